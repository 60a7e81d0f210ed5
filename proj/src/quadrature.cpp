#include "hexflow/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace hexflow
{

namespace
{

constexpr std::size_t kOrder = 8;

struct Rule {
    std::array<double, kOrder> nodes{};
    std::array<double, kOrder> weights{};
};

// Nodes are roots of P_n found by Newton iteration from the Chebyshev guess.
Rule make_rule()
{
    Rule rule;
    const int n = static_cast<int>(kOrder);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const Rule& rule()
{
    static const Rule r = make_rule();
    return r;
}

double panel(const std::function<double(double)>& f, double a, double b)
{
    const Rule& r = rule();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < kOrder; ++i) {
        sum += r.weights[i] * f(mid + half * r.nodes[i]);
    }
    return half * sum;
}

double refine(
    const std::function<double(double)>& f, double a, double b, double whole, double tol,
    int depth)
{
    const double mid = 0.5 * (a + b);
    const double left = panel(f, a, mid);
    const double right = panel(f, mid, b);
    if (depth <= 0 || std::abs(left + right - whole) <= tol) {
        return left + right;
    }
    return refine(f, a, mid, left, 0.5 * tol, depth - 1) +
           refine(f, mid, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(
    const std::function<double(double)>& f, double a, double b, const QuadratureOptions& opts)
{
    if (a == b) return 0.0;
    return refine(f, a, b, panel(f, a, b), opts.abs_tol, opts.max_depth);
}

}  // namespace hexflow
