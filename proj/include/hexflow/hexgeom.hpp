#pragma once

/**
 * @file hexgeom.hpp
 * @brief Trigonometry of a single right-angled hyperbolic hexagon.
 *
 * A generalized circle packing assigns a radius r_i to every boundary
 * component. Two components i, j joined by an ideal edge of weight phi get
 * the edge length
 *
 *     cosh l_ij = cosh(phi) sinh(r_i) sinh(r_j) - cosh(r_i) cosh(r_j),
 *
 * and the three edge lengths of a face determine a right-angled hexagon whose
 * boundary arcs theta satisfy
 *
 *     cosh theta_i = (cosh l_i + cosh l_j cosh l_k) / (sinh l_j sinh l_k),
 *
 * with l_i the edge opposite corner i. Everything downstream (curvature,
 * Laplacian, flows) is assembled from the quantities in this header.
 *
 * Face-local convention used throughout: corner a carries the radius r[a],
 * edge slot k is the edge opposite corner k and joins corners k+1 and k+2
 * (mod 3).
 */

#include <array>
#include <cstddef>

#include <Eigen/Core>

namespace hexflow
{

/** Strict margin on the cosine-law expression: admissible iff expr > 1 + margin. */
inline constexpr double kAdmissibilityMargin = 1e-12;

/** Radii above this overflow sinh/cosh products and are rejected. */
inline constexpr double kMaxRadius = 700.0;

/** Hyperbolic radius of a boundary component, 0 < r <= kMaxRadius. */
class Radius
{
public:
    explicit Radius(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

/** Discrete conformal factor u = log tanh(r/2), always negative. */
class ConformalFactor
{
public:
    explicit ConformalFactor(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

/** Positive edge weight phi. */
class Weight
{
public:
    explicit Weight(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

/** u = log tanh(r/2). */
ConformalFactor to_conformal(Radius r);

/** r = 2 artanh(exp(u)). Throws DomainError if the radius would exceed kMaxRadius. */
Radius from_conformal(ConformalFactor u);

/** cosh(phi) sinh(r_i) sinh(r_j) - cosh(r_i) cosh(r_j), evaluated as 1 + (a stable excess). */
double admissibility_expression(Radius ri, Radius rj, Weight phi);

/**
 * Edge length from the cosine law.
 * Throws InadmissiblePairError when the expression is not above 1 + kAdmissibilityMargin.
 */
double edge_length(Radius ri, Radius rj, Weight phi);

/** Boundary arc opposite to `l_opp`, between the edges `l_a` and `l_b`. */
double arc_length(double l_opp, double l_a, double l_b);

/** Edge lengths, boundary arcs and the corner-independent quantity Q of one hexagon. */
struct HexagonGeometry {
    std::array<double, 3> l;
    /** theta[k] is the arc at the corner opposite edge l[k]. */
    std::array<double, 3> theta;
    /** Q = sinh l_p sinh l_s sinh theta_t, taken at corner t = 0. */
    double q;

    /** Q evaluated at corner t; equal for every t up to rounding. */
    double q_at_corner(std::size_t t) const;
};

HexagonGeometry hexagon_geometry(const std::array<double, 3>& l);

/** Partial derivatives of edge_length(r_i, r_j, phi). */
struct LengthPartials {
    double d_ri;
    double d_rj;
};

LengthPartials d_length_d_radius(Radius ri, Radius rj, Weight phi);

/** m(a, b) = d theta_a / d u_b for the three corners of one face. */
struct CornerJacobian {
    Eigen::Matrix3d m;
};

/**
 * Chain-rule Jacobian of the three arcs with respect to the three conformal
 * factors. `phi[k]` is the weight of the edge opposite corner k.
 * Throws InadmissibleFaceError naming the first bad edge slot.
 */
CornerJacobian corner_jacobian(
    const std::array<Radius, 3>& r, const std::array<Weight, 3>& phi);

namespace detail
{

/** sinh r and cosh r expressed through u without forming r. */
struct CornerScale {
    double u;
    double sinh_r;
    double cosh_r;
};

/** Requires u < 0 and from_conformal(u) <= kMaxRadius. */
CornerScale corner_scale(double u);

/** cosh l - 1 for the edge between two corners; <= 0 outside the admissible set. */
double edge_excess(const CornerScale& a, const CornerScale& b, double phi);

struct EdgeValue {
    double length;
    double cosh_l;
    double sinh_l;
};

/** Requires excess > 0. */
EdgeValue edge_from_excess(double excess);

/** Full per-face evaluation shared by curvature, Laplacian and corner_jacobian. */
struct FaceGeometry {
    std::array<CornerScale, 3> corners;
    std::array<EdgeValue, 3> edges;
    std::array<double, 3> theta;
    std::array<double, 3> cosh_theta;
    double q;
};

/**
 * Evaluate a face from corner conformal factors. An edge is rejected when its
 * excess is not above `margin`; the failing slot is reported.
 */
FaceGeometry face_geometry(
    const std::array<double, 3>& u, const std::array<double, 3>& phi,
    double margin);

/** d theta_a / d u_b assembled by the chain rule through d theta/d l and d l/d u. */
Eigen::Matrix3d face_jacobian(const FaceGeometry& face);

}  // namespace detail

}  // namespace hexflow
