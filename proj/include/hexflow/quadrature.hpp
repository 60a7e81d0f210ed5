#pragma once

#include <cstddef>
#include <functional>

namespace hexflow
{

struct QuadratureOptions {
    double abs_tol = 1e-9;
    int max_depth = 40;
};

/**
 * Adaptive Gauss-Legendre quadrature of f over [a, b].
 *
 * Each panel is integrated with an 8-point rule and compared against the sum
 * over its two halves; panels are split until the difference is below the
 * tolerance share of the panel or max_depth is reached.
 */
double integrate_adaptive(
    const std::function<double(double)>& f, double a, double b,
    const QuadratureOptions& opts = {});

}  // namespace hexflow
