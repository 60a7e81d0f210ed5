#include <doctest.h>

#include <cmath>

#include "hexflow/errors.hpp"
#include "hexflow/solver.hpp"
#include "support.hpp"

using namespace hexflow;
using namespace hexflow::testing;

TEST_SUITE("solver")
{
    TEST_CASE("default start is admissible")
    {
        const auto s = default_start(pants());
        for (double u : s.u()) CHECK(u == -0.5);
        CHECK(default_start(torus())[0] == -0.5);
    }

    TEST_CASE("recovers unit radii")
    {
        const auto r = newton_solve(pants(), default_start(pants()), constant(3, kPantsK), 1e-12);
        CHECK(r.converged);
        CHECK(r.residual_inf < 1e-12);
        CHECK(r.iterations <= 20);
        for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(r.u_star[i] - kUOfRadiusOne) < 1e-10);
    }

    TEST_CASE("mixed target and uniqueness of the solution")
    {
        const Eigen::VectorXd kbar = Eigen::Vector3d(0.5, 1.0, 3.0);
        const auto a = newton_solve(pants(), default_start(pants()), kbar, 1e-12);
        const auto b = newton_solve(
            pants(), validate_state(pants(), load_state(data_path("state_perturbed.json"))), kbar,
            1e-12);
        const auto c = newton_solve(pants(), validate_state(pants(), {-0.2, -0.9, -0.4}), kbar, 1e-12);
        for (const auto* r : {&a, &b, &c}) {
            CHECK(r->converged);
            CHECK(r->iterations <= 20);
            CHECK((curvature(pants(), r->u_star) - kbar).lpNorm<Eigen::Infinity>() < 1e-12);
        }
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(std::abs(a.u_star[i] - b.u_star[i]) < 1e-8);
            CHECK(std::abs(a.u_star[i] - c.u_star[i]) < 1e-8);
        }
    }

    TEST_CASE("quadratic convergence near the solution")
    {
        const auto r = newton_solve(pants(), default_start(pants()), constant(3, kPantsK), 1e-14);
        const auto& h = r.residual_history;
        REQUIRE(h.size() >= 3);
        CHECK(h.size() == r.iterations + 1);
        for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i] < h[i - 1]);
        // once the residual is small, each step roughly squares it
        for (std::size_t i = 1; i < h.size(); ++i) {
            if (h[i - 1] < 1e-2 && h[i] > 1e-13) CHECK(h[i] <= 10.0 * h[i - 1] * h[i - 1]);
        }
    }

    TEST_CASE("torus")
    {
        const auto r = newton_solve(torus(), default_start(torus()), constant(1, 6.0 * kArcPantsHexagon), 1e-12);
        CHECK(r.converged);
        CHECK(std::abs(r.u_star[0] - kUOfRadiusOne) < 1e-10);
        const auto q = newton_solve(torus(), validate_state(torus(), {-0.95}), constant(1, 6.0 * kArcPantsHexagon), 1e-12);
        CHECK(std::abs(q.u_star[0] - r.u_star[0]) < 1e-8);
    }

    TEST_CASE("iteration budget")
    {
        const auto r = newton_solve(
            pants(), default_start(pants()), Eigen::Vector3d(0.5, 1.0, 3.0), 1e-12, 1);
        CHECK_FALSE(r.converged);
        CHECK(r.iterations == 1);
    }

    TEST_CASE("argument validation")
    {
        CHECK_THROWS_AS(newton_solve(pants(), default_start(pants()), constant(2, 1.0)), DomainError);
        CHECK_THROWS_AS(newton_solve(pants(), default_start(pants()), constant(3, -1.0)), DomainError);
        CHECK_THROWS_AS(newton_solve(pants(), default_start(pants()), constant(3, 1.0), 0.0), DomainError);
    }
}
