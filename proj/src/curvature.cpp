#include "hexflow/curvature.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "hexflow/errors.hpp"
#include "hexflow/hexgeom.hpp"

namespace hexflow
{

namespace
{

detail::FaceGeometry evaluate_face(
    const IdealTriangulation& m, std::size_t f, std::span<const double> u)
{
    const Face& face = m.faces()[f];
    const std::array<double, 3> uf{u[face.corners[0]], u[face.corners[1]], u[face.corners[2]]};
    try {
        return detail::face_geometry(uf, m.face_weights(f), 0.0);
    }
    catch (const InadmissibleFaceError& e) {
        throw InadmissibleFaceError(
            "faces[" + std::to_string(f) + "]: " + e.what(), e.slot());
    }
}

void check_lengths(const CurvatureVector& k, const Eigen::VectorXd& kbar)
{
    if (k.size() != kbar.size()) {
        throw DomainError(
            "curvature has " + std::to_string(k.size()) + " entries, target has " +
            std::to_string(kbar.size()));
    }
}

}  // namespace

namespace detail
{

CurvatureVector curvature_at(const IdealTriangulation& m, std::span<const double> u)
{
    CurvatureVector k = CurvatureVector::Zero(static_cast<Eigen::Index>(m.boundary_count()));
    for (std::size_t f = 0; f < m.faces().size(); ++f) {
        const auto geo = evaluate_face(m, f, u);
        const Face& face = m.faces()[f];
        for (std::size_t a = 0; a < 3; ++a) {
            k[static_cast<Eigen::Index>(face.corners[a])] += geo.theta[a];
        }
    }
    return k;
}

}  // namespace detail

CurvatureVector curvature(const IdealTriangulation& m, const ConformalState& s)
{
    return detail::curvature_at(m, s.u());
}

CurvatureAndLaplacian curvature_and_laplacian(const IdealTriangulation& m, const ConformalState& s)
{
    const auto n = static_cast<Eigen::Index>(m.boundary_count());
    CurvatureAndLaplacian out{CurvatureVector::Zero(n), LaplacianMatrix::Zero(n, n)};
    for (std::size_t f = 0; f < m.faces().size(); ++f) {
        const auto geo = evaluate_face(m, f, s.u());
        const Eigen::Matrix3d jac = detail::face_jacobian(geo);
        const Face& face = m.faces()[f];
        for (std::size_t a = 0; a < 3; ++a) {
            const auto i = static_cast<Eigen::Index>(face.corners[a]);
            out.k[i] += geo.theta[a];
            for (std::size_t b = 0; b < 3; ++b) {
                // repeated corners accumulate into the same entry
                out.delta(i, static_cast<Eigen::Index>(face.corners[b])) +=
                    jac(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            }
        }
    }
    return out;
}

LaplacianMatrix laplacian(const IdealTriangulation& m, const ConformalState& s)
{
    return curvature_and_laplacian(m, s).delta;
}

double calabi_energy(const CurvatureVector& k, const Eigen::VectorXd& kbar)
{
    check_lengths(k, kbar);
    return 0.5 * (k - kbar).squaredNorm();
}

double ricci_potential(
    const IdealTriangulation& m, const ConformalState& s, const ConformalState& s0,
    const Eigen::VectorXd& kbar, const QuadratureOptions& opts)
{
    if (s.size() != m.boundary_count() || s0.size() != m.boundary_count()) {
        throw DomainError("state size does not match the mesh");
    }
    check_lengths(CurvatureVector::Zero(static_cast<Eigen::Index>(s.size())), kbar);
    const auto n = static_cast<Eigen::Index>(s.size());
    const Eigen::Map<const Eigen::VectorXd> end(s.u().data(), n);
    const Eigen::Map<const Eigen::VectorXd> start(s0.u().data(), n);
    const Eigen::VectorXd dir = end - start;
    if (dir.isZero(0.0)) return 0.0;

    // convexity of the admissible space keeps every point of the segment inside
    Eigen::VectorXd point(n);
    const auto integrand = [&](double t) {
        point = start + t * dir;
        const auto k = detail::curvature_at(m, std::span<const double>(point.data(), point.size()));
        return (k - kbar).dot(dir);
    };
    return -integrate_adaptive(integrand, 0.0, 1.0, opts);
}

double min_edge_length(const IdealTriangulation& m, const ConformalState& s)
{
    double best = std::numeric_limits<double>::infinity();
    for (const Edge& e : m.edges()) {
        const auto a = detail::corner_scale(s[e.ends[0]]);
        const auto b = detail::corner_scale(s[e.ends[1]]);
        best = std::min(best, detail::edge_from_excess(detail::edge_excess(a, b, e.phi)).length);
    }
    return best;
}

}  // namespace hexflow
