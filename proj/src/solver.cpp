#include "hexflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

#include "hexflow/curvature.hpp"
#include "hexflow/errors.hpp"

namespace hexflow
{

namespace
{

constexpr int kMaxBacktracks = 60;

}  // namespace

ConformalState default_start(const IdealTriangulation& m)
{
    double phi_min = m.edges().empty() ? 4.0 : m.edges().front().phi;
    for (const Edge& e : m.edges()) {
        phi_min = std::min(phi_min, e.phi);
    }
    const double u = -std::min(1.0, phi_min / 4.0);
    return validate_state(m, std::vector<double>(m.boundary_count(), u));
}

SolveResult newton_solve(
    const IdealTriangulation& m, const ConformalState& s0, const Eigen::VectorXd& kbar,
    double tol, std::size_t max_iter)
{
    if (static_cast<std::size_t>(kbar.size()) != m.boundary_count()) {
        throw DomainError("target size does not match the mesh");
    }
    for (Eigen::Index i = 0; i < kbar.size(); ++i) {
        if (!std::isfinite(kbar[i]) || kbar[i] <= 0.0) {
            throw DomainError("prescribed boundary lengths must be positive and finite");
        }
    }
    if (!(tol > 0.0)) {
        throw DomainError("tol must be positive");
    }

    ConformalState state = s0;
    auto kd = curvature_and_laplacian(m, state);
    double residual = (kd.k - kbar).lpNorm<Eigen::Infinity>();
    SolveResult result{state, 0, residual, false, {residual}};

    while (residual >= tol && result.iterations < max_iter) {
        const Eigen::LLT<Eigen::MatrixXd> llt(-kd.delta);
        if (llt.info() != Eigen::Success) {
            throw NumericError("discrete Laplacian is not negative definite at a valid state");
        }
        // Delta^{-1} (K - kbar) = -(-Delta)^{-1} (K - kbar)
        const Eigen::VectorXd step = -llt.solve(kd.k - kbar);
        const Eigen::Map<const Eigen::VectorXd> u(
            state.u().data(), static_cast<Eigen::Index>(state.size()));

        double t = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= kMaxBacktracks; ++halving, t *= 0.5) {
            const Eigen::VectorXd trial = u - t * step;
            try {
                ConformalState candidate =
                    validate_state(m, std::vector<double>(trial.begin(), trial.end()));
                auto trial_kd = curvature_and_laplacian(m, candidate);
                const double trial_res = (trial_kd.k - kbar).lpNorm<Eigen::Infinity>();
                if (trial_res <= (1.0 - 0.25 * t) * residual) {
                    state = std::move(candidate);
                    kd = std::move(trial_kd);
                    residual = trial_res;
                    accepted = true;
                    break;
                }
            }
            catch (const StateError&) {
            }
            catch (const InadmissibleFaceError&) {
            }
            catch (const DomainError&) {
            }
        }
        if (!accepted) {
            std::ostringstream os;
            os << "Newton backtracking found no descent after " << kMaxBacktracks
               << " halvings (iteration " << result.iterations << ", residual " << residual
               << ")";
            throw NoDescentError(os.str());
        }
        ++result.iterations;
        result.residual_history.push_back(residual);
    }
    result.u_star = state;
    result.residual_inf = residual;
    result.converged = residual < tol;
    return result;
}

}  // namespace hexflow
