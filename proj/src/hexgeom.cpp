#include "hexflow/hexgeom.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "hexflow/errors.hpp"

namespace hexflow
{

namespace
{

// arccosh(1 + y) without forming 1 + y; accurate as y -> 0.
double acosh1p(double y)
{
    return std::log1p(y + std::sqrt(y) * std::sqrt(y + 2.0));
}

// sinh(arccosh(1 + y)).
double sinh_of_acosh1p(double y) { return std::sqrt(y) * std::sqrt(y + 2.0); }

std::string describe(const char* what, double value)
{
    std::ostringstream os;
    os.precision(17);
    os << what << " (got " << value << ")";
    return os.str();
}

// cosh(theta) - 1 at the corner between edges a and b, opposite edge `opp`.
double arc_excess(
    const detail::EdgeValue& opp, const detail::EdgeValue& a,
    const detail::EdgeValue& b)
{
    return (opp.cosh_l + std::cosh(a.length - b.length)) / (a.sinh_l * b.sinh_l);
}

detail::EdgeValue edge_from_length(double l)
{
    if (!std::isfinite(l) || l <= 0.0) {
        throw DomainError(describe("hexagon edge length must be positive and finite", l));
    }
    return {l, std::cosh(l), std::sinh(l)};
}

}  // namespace

Radius::Radius(double value) : value_(value)
{
    if (!std::isfinite(value) || value <= 0.0) {
        throw DomainError(describe("radius must be positive and finite", value));
    }
    if (value > kMaxRadius) {
        throw DomainError(describe("radius exceeds overflow limit 700", value));
    }
}

ConformalFactor::ConformalFactor(double value) : value_(value)
{
    if (!std::isfinite(value) || value >= 0.0) {
        throw DomainError(describe("conformal factor must be negative and finite", value));
    }
}

Weight::Weight(double value) : value_(value)
{
    if (!std::isfinite(value) || value <= 0.0) {
        throw DomainError(describe("edge weight must be positive and finite", value));
    }
}

ConformalFactor to_conformal(Radius r)
{
    // log tanh(r/2) = -log1p(2 / expm1(r))
    const double u = -std::log1p(2.0 / std::expm1(r.value()));
    if (!std::isfinite(u) || u >= 0.0) {
        throw DomainError(describe("conformal factor not representable for radius", r.value()));
    }
    return ConformalFactor(u);
}

Radius from_conformal(ConformalFactor u)
{
    // 2 artanh(t) = log1p(2t / (1 - t)), t = exp(u)
    const double t = std::exp(u.value());
    return Radius(std::log1p(2.0 * t / -std::expm1(u.value())));
}

namespace detail
{

CornerScale corner_scale(double u)
{
    // validates u < 0 and the radius bound
    from_conformal(ConformalFactor(u));
    return {u, -1.0 / std::sinh(u), -1.0 / std::tanh(u)};
}

double edge_excess(const CornerScale& a, const CornerScale& b, double phi)
{
    // cosh l - 1 = sinh r_a sinh r_b (cosh phi - cosh(u_a + u_b))
    const double sigma = a.u + b.u;
    const double gap = 2.0 * std::sinh(0.5 * (phi + sigma)) * std::sinh(0.5 * (phi - sigma));
    return gap * (a.sinh_r * b.sinh_r);
}

EdgeValue edge_from_excess(double excess)
{
    if (!std::isfinite(excess)) {
        throw DomainError("edge length overflow");
    }
    const double sinh_l = sinh_of_acosh1p(excess);
    return {std::log1p(excess + sinh_l), 1.0 + excess, sinh_l};
}

FaceGeometry face_geometry(
    const std::array<double, 3>& u, const std::array<double, 3>& phi,
    double margin)
{
    FaceGeometry f{};
    for (std::size_t a = 0; a < 3; ++a) {
        f.corners[a] = corner_scale(u[a]);
    }
    for (std::size_t k = 0; k < 3; ++k) {
        const double y = edge_excess(f.corners[(k + 1) % 3], f.corners[(k + 2) % 3], phi[k]);
        if (!(y > margin)) {
            std::ostringstream os;
            os.precision(17);
            os << "inadmissible edge in face slot " << k << ": cosh l - 1 = " << y;
            throw InadmissibleFaceError(os.str(), k);
        }
        f.edges[k] = edge_from_excess(y);
    }
    double sinh_theta0 = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
        const double y = arc_excess(f.edges[a], f.edges[(a + 1) % 3], f.edges[(a + 2) % 3]);
        f.theta[a] = acosh1p(y);
        f.cosh_theta[a] = 1.0 + y;
        if (a == 0) sinh_theta0 = sinh_of_acosh1p(y);
    }
    f.q = f.edges[1].sinh_l * f.edges[2].sinh_l * sinh_theta0;
    if (!std::isfinite(f.q) || !(f.q > 0.0)) {
        throw DomainError("hexagon geometry out of floating-point range");
    }
    return f;
}

Eigen::Matrix3d face_jacobian(const FaceGeometry& f)
{
    // d theta_a / d l_k
    Eigen::Matrix3d dtheta_dl;
    for (int a = 0; a < 3; ++a) {
        for (int k = 0; k < 3; ++k) {
            const double s = f.edges[a].sinh_l / f.q;
            dtheta_dl(a, k) = (k == a) ? s : -s * f.cosh_theta[3 - a - k];
        }
    }
    // d l_k / d u_b = (d l_k / d r_b) sinh r_b; zero for the opposite corner
    Eigen::Matrix3d dl_du;
    for (int k = 0; k < 3; ++k) {
        for (int b = 0; b < 3; ++b) {
            if (b == k) {
                dl_du(k, b) = 0.0;
                continue;
            }
            const int c = 3 - k - b;
            dl_du(k, b) = (f.corners[c].cosh_r + f.corners[b].cosh_r * f.edges[k].cosh_l) /
                          f.edges[k].sinh_l;
        }
    }
    return dtheta_dl * dl_du;
}

}  // namespace detail

double admissibility_expression(Radius ri, Radius rj, Weight phi)
{
    const auto a = detail::corner_scale(to_conformal(ri).value());
    const auto b = detail::corner_scale(to_conformal(rj).value());
    return 1.0 + detail::edge_excess(a, b, phi.value());
}

double edge_length(Radius ri, Radius rj, Weight phi)
{
    const auto a = detail::corner_scale(to_conformal(ri).value());
    const auto b = detail::corner_scale(to_conformal(rj).value());
    const double y = detail::edge_excess(a, b, phi.value());
    if (!(y > kAdmissibilityMargin)) {
        std::ostringstream os;
        os.precision(17);
        os << "radii (" << ri.value() << ", " << rj.value() << ") inadmissible for weight "
           << phi.value() << ": cosine-law expression " << 1.0 + y << " <= 1";
        throw InadmissiblePairError(os.str(), 1.0 + y);
    }
    return detail::edge_from_excess(y).length;
}

double arc_length(double l_opp, double l_a, double l_b)
{
    const auto opp = edge_from_length(l_opp);
    const auto a = edge_from_length(l_a);
    const auto b = edge_from_length(l_b);
    return acosh1p(arc_excess(opp, a, b));
}

HexagonGeometry hexagon_geometry(const std::array<double, 3>& l)
{
    HexagonGeometry h{};
    h.l = l;
    for (std::size_t k = 0; k < 3; ++k) {
        h.theta[k] = arc_length(l[k], l[(k + 1) % 3], l[(k + 2) % 3]);
    }
    h.q = h.q_at_corner(0);
    return h;
}

double HexagonGeometry::q_at_corner(std::size_t t) const
{
    return std::sinh(l[(t + 1) % 3]) * std::sinh(l[(t + 2) % 3]) * std::sinh(theta[t % 3]);
}

LengthPartials d_length_d_radius(Radius ri, Radius rj, Weight phi)
{
    const double l = edge_length(ri, rj, phi);
    const double cosh_l = std::cosh(l);
    const double sinh_l = std::sinh(l);
    const double ci = std::cosh(ri.value());
    const double cj = std::cosh(rj.value());
    LengthPartials p{
        (cj + ci * cosh_l) / (std::sinh(ri.value()) * sinh_l),
        (ci + cj * cosh_l) / (std::sinh(rj.value()) * sinh_l)};
    if (!std::isfinite(p.d_ri) || !std::isfinite(p.d_rj)) {
        throw DomainError("edge-length derivative overflow");
    }
    return p;
}

CornerJacobian corner_jacobian(
    const std::array<Radius, 3>& r, const std::array<Weight, 3>& phi)
{
    std::array<double, 3> u{};
    std::array<double, 3> w{};
    for (std::size_t a = 0; a < 3; ++a) {
        u[a] = to_conformal(r[a]).value();
        w[a] = phi[a].value();
    }
    return {detail::face_jacobian(detail::face_geometry(u, w, kAdmissibilityMargin))};
}

}  // namespace hexflow
