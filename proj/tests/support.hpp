#pragma once

// Shared fixtures for the unit and acceptance suites: canonical meshes,
// frozen reference values and independent finite-difference oracles.

#include <array>
#include <cmath>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hexflow/curvature.hpp"
#include "hexflow/errors.hpp"
#include "hexflow/hexgeom.hpp"
#include "hexflow/mesh.hpp"

namespace hexflow::testing
{

// 50-digit mpmath values from tests/oracles/hexagon_oracle.py.
inline constexpr double kUOfRadiusOne = -0.77193683290530472507;  // log tanh(1/2)
inline constexpr double kEdgeOneOneTwo = 1.6949011625917027462;   // l(r=1, r=1, phi=2)
inline constexpr double kArcUnitHexagon = 1.7049128323580136912;  // theta(1, 1, 1)
inline constexpr double kArcPantsHexagon = 1.0067141268431946767; // theta(l0, l0, l0)
inline constexpr double kQUnitHexagon = 3.6731111454375017017;
inline constexpr double kDlDrOneOneTwo = 1.9036801308665639438;
inline constexpr double kPantsK = 2.0134282536863893535;          // K_i, pants, r = 1, phi = 2
inline constexpr double kPantsCalabiVsTwo = 2.7047699559904389113e-4;
inline constexpr double kJacobianDiag = -2.2246130175125597693;   // r = (1,1,1), phi = (2,2,2)
inline constexpr double kJacobianOff = -0.39515482609715810167;

inline std::string data_path(const std::string& name)
{
    return std::string(HEXFLOW_TEST_DATA) + "/" + name;
}

inline const IdealTriangulation& pants()
{
    static const IdealTriangulation m = load_mesh(data_path("pants.json"));
    return m;
}

inline const IdealTriangulation& torus()
{
    static const IdealTriangulation m = load_mesh(data_path("torus.json"));
    return m;
}

inline std::vector<double> uniform_u(std::size_t n, double u)
{
    return std::vector<double>(n, u);
}

inline Eigen::VectorXd as_vector(std::span<const double> u)
{
    return Eigen::Map<const Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(u.size()));
}

inline Eigen::VectorXd constant(std::size_t n, double v)
{
    return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), v);
}

/**
 * Uniform samples from the box [lo, hi]^N, rejection-filtered by
 * validate_state so only admissible draws are returned.
 */
inline std::vector<ConformalState> random_states(
    const IdealTriangulation& m, std::size_t count, unsigned seed, double lo = -0.95,
    double hi = -0.05)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<ConformalState> out;
    while (out.size() < count) {
        std::vector<double> u(m.boundary_count());
        for (auto& x : u) x = dist(rng);
        try {
            out.push_back(validate_state(m, std::move(u)));
        }
        catch (const StateError&) {
        }
    }
    return out;
}

/** dK/du by central differences at step h; independent of the closed-form Jacobian. */
inline Eigen::MatrixXd fd_laplacian(const IdealTriangulation& m, const ConformalState& s, double h)
{
    const auto n = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        std::vector<double> plus(s.u().begin(), s.u().end());
        std::vector<double> minus = plus;
        plus[j] += h;
        minus[j] -= h;
        const auto kp = curvature(m, validate_state(m, plus));
        const auto km = curvature(m, validate_state(m, minus));
        out.col(j) = (kp - km) / (2.0 * h);
    }
    return out;
}

/** Largest |a - b| / |b| over entries. */
inline double max_relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    return ((a - b).array().abs() / b.array().abs()).maxCoeff();
}

}  // namespace hexflow::testing
