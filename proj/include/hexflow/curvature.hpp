#pragma once

/**
 * @file curvature.hpp
 * @brief Boundary lengths K, the discrete Laplacian dK/du and the two energies.
 *
 * All assembly loops run over faces in ascending order and corners in slot
 * order, so results are bitwise reproducible for identical inputs.
 */

#include <span>

#include <Eigen/Core>

#include "hexflow/mesh.hpp"
#include "hexflow/quadrature.hpp"

namespace hexflow
{

/** K_i: total boundary-arc length at component i. */
using CurvatureVector = Eigen::VectorXd;
/** Dense symmetric negative definite matrix dK_i/du_j. */
using LaplacianMatrix = Eigen::MatrixXd;

CurvatureVector curvature(const IdealTriangulation& m, const ConformalState& s);

LaplacianMatrix laplacian(const IdealTriangulation& m, const ConformalState& s);

struct CurvatureAndLaplacian {
    CurvatureVector k;
    LaplacianMatrix delta;
};

/** Both quantities from a single pass over the faces. */
CurvatureAndLaplacian curvature_and_laplacian(const IdealTriangulation& m, const ConformalState& s);

/** 1/2 |k - kbar|^2. */
double calabi_energy(const CurvatureVector& k, const Eigen::VectorXd& kbar);

/**
 * E(s) - E(s0) for E with gradient -(K - kbar): minus the line integral of
 * (K - kbar) . du along the straight segment s0 -> s.
 */
double ricci_potential(
    const IdealTriangulation& m, const ConformalState& s, const ConformalState& s0,
    const Eigen::VectorXd& kbar, const QuadratureOptions& opts = {});

/** Shortest edge length of the metric induced by s. */
double min_edge_length(const IdealTriangulation& m, const ConformalState& s);

namespace detail
{
/** K at raw conformal factors known to lie in the admissible space. */
CurvatureVector curvature_at(const IdealTriangulation& m, std::span<const double> u);
}  // namespace detail

}  // namespace hexflow
