#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "hexflow/errors.hpp"
#include "hexflow/hexgeom.hpp"
#include "support.hpp"

using namespace hexflow;
using namespace hexflow::testing;

namespace
{

struct FaceSample {
    std::array<double, 3> r;
    std::array<double, 3> phi;
};

bool admissible(const FaceSample& f)
{
    for (int k = 0; k < 3; ++k) {
        const double e = admissibility_expression(
            Radius(f.r[(k + 1) % 3]), Radius(f.r[(k + 2) % 3]), Weight(f.phi[k]));
        if (!(e > 1.0 + 1e-6)) return false;
    }
    return true;
}

std::vector<FaceSample> random_faces(std::size_t count, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rad(0.3, 3.0);
    std::uniform_real_distribution<double> wt(1.0, 3.5);
    std::vector<FaceSample> out;
    while (out.size() < count) {
        FaceSample f{{rad(rng), rad(rng), rad(rng)}, {wt(rng), wt(rng), wt(rng)}};
        if (admissible(f)) out.push_back(f);
    }
    return out;
}

std::array<Radius, 3> radii(const FaceSample& f)
{
    return {Radius(f.r[0]), Radius(f.r[1]), Radius(f.r[2])};
}

std::array<Weight, 3> weights(const FaceSample& f)
{
    return {Weight(f.phi[0]), Weight(f.phi[1]), Weight(f.phi[2])};
}

// Arcs of the face at conformal factors u, built only from the public
// edge_length / hexagon_geometry route.
std::array<double, 3> arcs_at(const std::array<double, 3>& u, const std::array<double, 3>& phi)
{
    std::array<double, 3> l{};
    for (int k = 0; k < 3; ++k) {
        l[k] = edge_length(
            from_conformal(ConformalFactor(u[(k + 1) % 3])),
            from_conformal(ConformalFactor(u[(k + 2) % 3])), Weight(phi[k]));
    }
    return hexagon_geometry(l).theta;
}

Eigen::Matrix3d fd_corner_jacobian(const FaceSample& f, double h)
{
    std::array<double, 3> u{};
    for (int a = 0; a < 3; ++a) u[a] = to_conformal(Radius(f.r[a])).value();
    Eigen::Matrix3d m;
    for (int b = 0; b < 3; ++b) {
        auto up = u;
        auto um = u;
        up[b] += h;
        um[b] -= h;
        const auto tp = arcs_at(up, f.phi);
        const auto tm = arcs_at(um, f.phi);
        for (int a = 0; a < 3; ++a) m(a, b) = (tp[a] - tm[a]) / (2.0 * h);
    }
    return m;
}

// Fully expanded derivatives of the arc at corner i with respect to the
// factors at i, j and k, written out term by term; test-only cross-check.
Eigen::Matrix3d expanded_corner_jacobian(const FaceSample& f)
{
    std::array<double, 3> l{};
    for (int k = 0; k < 3; ++k) {
        l[k] = edge_length(Radius(f.r[(k + 1) % 3]), Radius(f.r[(k + 2) % 3]), Weight(f.phi[k]));
    }
    const auto hex = hexagon_geometry(l);
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int k = (i + 2) % 3;
        const double q = hex.q_at_corner(static_cast<std::size_t>(i));
        const double cli = std::cosh(l[i]), clj = std::cosh(l[j]), clk = std::cosh(l[k]);
        const double slj = std::sinh(l[j]), slk = std::sinh(l[k]);
        const double cri = std::cosh(f.r[i]), crj = std::cosh(f.r[j]), crk = std::cosh(f.r[k]);
        m(i, i) = -(1.0 / q) *
                  ((clk * crk + clj * clk * cri + cli * clj * crk + cli * clj * clj * cri) /
                       (slj * slj) +
                   (clj * crj + clj * clk * cri + cli * clk * crj + cli * clk * clk * cri) /
                       (slk * slk));
        m(i, j) = -(1.0 / q) / (slk * slk) *
                  (-slk * slk * crk + cli * crj + clj * cri + cli * clk * cri + clj * clk * crj);
        m(i, k) = -(1.0 / q) / (slj * slj) *
                  (-slj * slj * crj + cli * crk + clk * cri + cli * clj * cri + clj * clk * crk);
    }
    return m;
}

}  // namespace

TEST_SUITE("hexgeom.conformal")
{
    TEST_CASE("to_conformal reference values")
    {
        CHECK(to_conformal(Radius(2.0 * std::atanh(std::exp(-1.0)))).value() ==
              doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(to_conformal(Radius(1.0)).value() == doctest::Approx(kUOfRadiusOne).epsilon(1e-14));
    }

    TEST_CASE("from_conformal reference value")
    {
        CHECK(from_conformal(ConformalFactor(-1.0)).value() ==
              doctest::Approx(-kUOfRadiusOne).epsilon(1e-14));
    }

    TEST_CASE("round trips")
    {
        for (double r : {0.1, 1.0, 5.0}) {
            const double back = from_conformal(to_conformal(Radius(r))).value();
            CHECK(std::abs(back - r) <= 1e-12 * r);
        }
        for (double u : {-0.1, -1.0, -10.0}) {
            const double back = to_conformal(from_conformal(ConformalFactor(u))).value();
            CHECK(std::abs(back - u) <= 1e-12 * std::abs(u));
        }
    }

    TEST_CASE("radius grows without bound as u approaches zero")
    {
        double prev = 0.0;
        for (double u : {-1.0, -1e-1, -1e-2, -1e-4, -1e-8, -1e-12}) {
            const double r = from_conformal(ConformalFactor(u)).value();
            CHECK(r > prev);
            prev = r;
        }
        CHECK(prev > 25.0);
    }

    TEST_CASE("domain errors")
    {
        CHECK_THROWS_AS(Radius(0.0), DomainError);
        CHECK_THROWS_AS(Radius(-1.0), DomainError);
        CHECK_THROWS_AS(Radius(std::nan("")), DomainError);
        CHECK_THROWS_AS(Radius{INFINITY}, DomainError);
        CHECK_THROWS_AS(Radius(700.5), DomainError);
        CHECK_THROWS_AS(ConformalFactor(0.0), DomainError);
        CHECK_THROWS_AS(ConformalFactor(0.5), DomainError);
        CHECK_THROWS_AS(Weight(0.0), DomainError);
        // r = 2 artanh(e^u) exceeds the overflow limit
        CHECK_THROWS_AS(from_conformal(ConformalFactor(-1e-310)), DomainError);
    }
}

TEST_SUITE("hexgeom.edge")
{
    TEST_CASE("cosine-law reference value")
    {
        CHECK(edge_length(Radius(1.0), Radius(1.0), Weight(2.0)) ==
              doctest::Approx(kEdgeOneOneTwo).epsilon(1e-13));
    }

    TEST_CASE("radii on the boundary u_i + u_j = -phi are rejected")
    {
        const Radius r(2.0 * std::atanh(std::exp(-1.0)));
        try {
            edge_length(r, r, Weight(2.0));
            FAIL("expected InadmissiblePairError");
        }
        catch (const InadmissiblePairError& e) {
            CHECK(std::abs(e.expression() - 1.0) < 1e-12);
        }
        CHECK_THROWS_AS(edge_length(Radius(0.2), Radius(0.2), Weight(1.0)), InadmissiblePairError);
    }

    TEST_CASE("length vanishes at the boundary")
    {
        double prev = INFINITY;
        for (double delta : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
            const Radius r = from_conformal(ConformalFactor(0.5 * (-2.0 + delta)));
            const double l = edge_length(r, r, Weight(2.0));
            CHECK(l > 0.0);
            CHECK(l < prev);
            prev = l;
        }
        CHECK(prev < 5e-3);
    }

    TEST_CASE("argument swap is exact")
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> rad(0.5, 4.0);
        for (int i = 0; i < 50; ++i) {
            const Radius a(rad(rng));
            const Radius b(rad(rng));
            const Weight w(3.0);
            CHECK(edge_length(a, b, w) == edge_length(b, a, w));
        }
    }

    TEST_CASE("derivatives")
    {
        const auto p = d_length_d_radius(Radius(1.0), Radius(1.0), Weight(2.0));
        CHECK(p.d_ri == p.d_rj);
        CHECK(p.d_ri == doctest::Approx(kDlDrOneOneTwo).epsilon(1e-12));

        // frozen value also matches a brute-force central difference at h = 1e-7
        const double h = 1e-7;
        const double fd = (edge_length(Radius(1.0 + h), Radius(1.0), Weight(2.0)) -
                           edge_length(Radius(1.0 - h), Radius(1.0), Weight(2.0))) /
                          (2.0 * h);
        CHECK(fd == doctest::Approx(kDlDrOneOneTwo).epsilon(1e-7));
    }

    TEST_CASE("derivatives are positive and match finite differences")
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> rad(0.4, 4.0);
        std::uniform_real_distribution<double> wt(1.0, 4.0);
        int checked = 0;
        while (checked < 100) {
            const double ri = rad(rng), rj = rad(rng), phi = wt(rng);
            if (!(admissibility_expression(Radius(ri), Radius(rj), Weight(phi)) > 1.01)) continue;
            const auto p = d_length_d_radius(Radius(ri), Radius(rj), Weight(phi));
            const double h = 1e-6;
            const double fdi = (edge_length(Radius(ri + h), Radius(rj), Weight(phi)) -
                                edge_length(Radius(ri - h), Radius(rj), Weight(phi))) /
                               (2 * h);
            const double fdj = (edge_length(Radius(ri), Radius(rj + h), Weight(phi)) -
                                edge_length(Radius(ri), Radius(rj - h), Weight(phi))) /
                               (2 * h);
            CHECK(p.d_ri > 0.0);
            CHECK(p.d_rj > 0.0);
            CHECK(fdi > 0.0);
            CHECK(fdj > 0.0);
            CHECK(std::abs(p.d_ri - fdi) <= 1e-6 * std::abs(fdi));
            CHECK(std::abs(p.d_rj - fdj) <= 1e-6 * std::abs(fdj));
            ++checked;
        }
    }

    TEST_CASE("inadmissible derivative request")
    {
        CHECK_THROWS_AS(d_length_d_radius(Radius(0.2), Radius(0.2), Weight(1.0)),
                        InadmissiblePairError);
    }
}

TEST_SUITE("hexgeom.hexagon")
{
    TEST_CASE("arc reference values")
    {
        CHECK(arc_length(1.0, 1.0, 1.0) == doctest::Approx(kArcUnitHexagon).epsilon(1e-13));
        CHECK(arc_length(kEdgeOneOneTwo, kEdgeOneOneTwo, kEdgeOneOneTwo) ==
              doctest::Approx(kArcPantsHexagon).epsilon(1e-13));
    }

    TEST_CASE("arc symmetric in its adjacent edges")
    {
        for (double opp : {0.2, 1.0, 3.0}) {
            CHECK(arc_length(opp, 0.7, 2.1) == arc_length(opp, 2.1, 0.7));
            CHECK(arc_length(opp, 1.3, 1.3) > 0.0);
        }
    }

    TEST_CASE("arc domain errors")
    {
        CHECK_THROWS_AS(arc_length(0.0, 1.0, 1.0), DomainError);
        CHECK_THROWS_AS(arc_length(1.0, -1.0, 1.0), DomainError);
        CHECK_THROWS_AS(hexagon_geometry({1.0, 1.0, 0.0}), DomainError);
    }

    TEST_CASE("equilateral hexagon")
    {
        const auto h = hexagon_geometry({1.0, 1.0, 1.0});
        CHECK(h.theta[0] == doctest::Approx(kArcUnitHexagon).epsilon(1e-13));
        CHECK(h.theta[0] == h.theta[1]);
        CHECK(h.theta[1] == h.theta[2]);
        CHECK(h.q == doctest::Approx(kQUnitHexagon).epsilon(1e-13));
        CHECK(h.q > 2.0);
        for (std::size_t t = 0; t < 3; ++t) {
            CHECK(std::abs(h.q_at_corner(t) - h.q) <= 1e-12 * h.q);
        }
    }
}

TEST_SUITE("hexgeom.jacobian")
{
    TEST_CASE("equilateral face")
    {
        const auto j = corner_jacobian(
            {Radius(1.0), Radius(1.0), Radius(1.0)}, {Weight(2.0), Weight(2.0), Weight(2.0)});
        CHECK(j.m(0, 0) < 0.0);
        CHECK(j.m(0, 0) == doctest::Approx(kJacobianDiag).epsilon(1e-12));
        CHECK(j.m(0, 1) == doctest::Approx(kJacobianOff).epsilon(1e-12));
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const double expect = a == b ? j.m(0, 0) : j.m(0, 1);
                CHECK(j.m(a, b) == doctest::Approx(expect).epsilon(1e-14));
            }
        }
    }

    TEST_CASE("matches finite differences of the arcs")
    {
        for (const auto& f : random_faces(100, 3)) {
            const auto j = corner_jacobian(radii(f), weights(f)).m;
            const auto fd = fd_corner_jacobian(f, 1e-6);
            // entries far below the diagonal sit under the difference-quotient noise floor
            const Eigen::Matrix3d scale = fd.cwiseAbs().cwiseMax(1e-2);
            CHECK(((j - fd).cwiseAbs().array() / scale.array()).maxCoeff() <= 1e-6);
        }
    }

    TEST_CASE("matches the expanded closed forms")
    {
        for (const auto& f : random_faces(200, 5)) {
            const auto j = corner_jacobian(radii(f), weights(f)).m;
            const auto ex = expanded_corner_jacobian(f);
            CHECK(max_relative_error(j, ex) <= 1e-10);
        }
    }

    TEST_CASE("symmetric and negative definite")
    {
        for (const auto& f : random_faces(300, 9)) {
            const auto m = corner_jacobian(radii(f), weights(f)).m;
            for (int a = 0; a < 3; ++a) {
                CHECK(m(a, a) < 0.0);
                for (int b = 0; b < 3; ++b) {
                    CHECK(std::abs(m(a, b) - m(b, a)) <=
                          1e-10 * std::max(1.0, std::abs(m(a, b))));
                }
            }
            const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(m);
            CHECK(eig.eigenvalues().maxCoeff() < 0.0);
        }
    }

    TEST_CASE("inadmissible face names the slot")
    {
        // corners 1 and 2 are too small for the weight of slot 0
        try {
            corner_jacobian(
                {Radius(3.0), Radius(0.2), Radius(0.2)}, {Weight(1.0), Weight(4.0), Weight(4.0)});
            FAIL("expected InadmissibleFaceError");
        }
        catch (const InadmissibleFaceError& e) {
            CHECK(e.slot() == 0);
        }
    }

    TEST_CASE("diagonal dominance grows with the radius")
    {
        const std::array<Weight, 3> phi{Weight(2.0), Weight(2.0), Weight(2.0)};
        double prev = 0.0;
        for (double ri : {2.0, 4.0, 8.0, 16.0}) {
            const auto m = corner_jacobian({Radius(ri), Radius(1.0), Radius(1.0)}, phi).m;
            const double ratio = std::abs(m(0, 0)) / (std::abs(m(0, 1)) + std::abs(m(0, 2)));
            CHECK(ratio > prev);
            prev = ratio;
        }
    }

    TEST_CASE("arc at a growing boundary component shrinks to zero")
    {
        const std::array<double, 3> phi{2.0, 2.0, 2.0};
        double prev = INFINITY;
        double last = 0.0;
        for (double ri : {2.0, 4.0, 8.0, 15.0}) {
            const std::array<double, 3> u{
                to_conformal(Radius(ri)).value(), kUOfRadiusOne, kUOfRadiusOne};
            last = arcs_at(u, phi)[0];
            CHECK(last < prev);
            prev = last;
        }
        CHECK(last < 1e-4);
        // 50-digit reference for r_i = 15: 5.87134711752718e-7
        CHECK(last == doctest::Approx(5.87134711752718e-7).epsilon(1e-6));
    }
}

TEST_CASE("Q is corner-independent and exceeds two on random hexagons")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> len(0.1, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const auto h = hexagon_geometry({len(rng), len(rng), len(rng)});
        CHECK(h.q > 2.0);
        for (std::size_t t = 0; t < 3; ++t) {
            CHECK(std::abs(h.q_at_corner(t) - h.q) <= 1e-12 * h.q);
        }
    }
}
