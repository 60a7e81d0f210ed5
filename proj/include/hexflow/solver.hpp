#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "hexflow/mesh.hpp"

namespace hexflow
{

struct SolveResult {
    ConformalState u_star;
    std::size_t iterations;
    double residual_inf;
    bool converged;
    /** max |K - kbar| before each iteration and at the final point. */
    std::vector<double> residual_history;
};

/** u = -min(1, min_e phi_e / 4) for every component; always admissible. */
ConformalState default_start(const IdealTriangulation& m);

/**
 * Newton iteration u <- u - t Delta^{-1} (K(u) - kbar) for the prescribed
 * boundary lengths kbar, with t halved from 1 until the trial point is
 * admissible and max|K - kbar| drops to at most (1 - t/4) times its old value.
 *
 * Throws NoDescentError after 60 halvings and NumericError if -Delta fails to
 * factor. Running out of iterations returns converged = false.
 */
SolveResult newton_solve(
    const IdealTriangulation& m, const ConformalState& s0, const Eigen::VectorXd& kbar,
    double tol = 1e-10, std::size_t max_iter = 100);

}  // namespace hexflow
