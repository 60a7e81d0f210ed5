#pragma once

/**
 * @file mesh.hpp
 * @brief Ideal triangulations of surfaces with boundary and their conformal states.
 *
 * Boundary components play the role of vertices. Files use 1-based component
 * indices; everything in memory is 0-based. Faces name their corners
 * explicitly because self-loop edges and repeated corners are common (the
 * one-holed torus has a single component at every corner).
 */

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hexflow
{

struct Edge {
    /** Identifier as written in the mesh file. */
    long long id;
    /** 0-based boundary components; equal for a self-loop. */
    std::array<std::size_t, 2> ends;
    double phi;
};

struct Face {
    /** Positions into IdealTriangulation::edges(). */
    std::array<std::size_t, 3> edges;
    /** corners[k] is the 0-based component opposite edges[k]. */
    std::array<std::size_t, 3> corners;
};

/**
 * Validated, immutable ideal triangulation.
 *
 * Structural invariants (checked by build()):
 *  - at least one component and one face, unique edge ids;
 *  - three distinct edges per face;
 *  - edges[k] joins exactly corners[k+1] and corners[k+2];
 *  - every edge fills exactly two face slots, every component is some corner.
 */
class IdealTriangulation
{
public:
    /** Face.edges hold edge positions; throws MeshError on any violation. */
    static IdealTriangulation build(
        std::size_t n_boundary, std::vector<Edge> edges, std::vector<Face> faces);

    std::size_t boundary_count() const noexcept { return n_boundary_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<Face>& faces() const noexcept { return faces_; }

    /** Weights of the three edge slots of face f. */
    std::array<double, 3> face_weights(std::size_t f) const;

private:
    IdealTriangulation() = default;

    std::size_t n_boundary_ = 0;
    std::vector<Edge> edges_;
    std::vector<Face> faces_;
};

/** Parse the JSON mesh format; throws MeshError (Syntax errors carry line/column). */
IdealTriangulation parse_mesh(std::string_view text);
IdealTriangulation load_mesh(const std::filesystem::path& path);

/** JSON mesh document with 1-based indices; parse_mesh(serialize_mesh(m)) reproduces m. */
std::string serialize_mesh(const IdealTriangulation& m);

/** N - |E| + |F| of the coned-off closed surface. */
long long euler_characteristic(const IdealTriangulation& m);

/** Second mesh appended with its components and edge ids shifted past the first. */
IdealTriangulation disjoint_union(const IdealTriangulation& a, const IdealTriangulation& b);

/** Conformal factors inside the admissible space of a specific mesh. */
class ConformalState
{
public:
    std::span<const double> u() const noexcept { return u_; }
    std::size_t size() const noexcept { return u_.size(); }
    double operator[](std::size_t i) const { return u_[i]; }

private:
    explicit ConformalState(std::vector<double> u) : u_(std::move(u)) {}
    friend ConformalState validate_state(const IdealTriangulation&, std::vector<double>);

    std::vector<double> u_;
};

/** u_i + u_j + phi_ij must exceed this for every edge. */
inline constexpr double kStateMargin = 1e-12;

/**
 * Accepts u iff it has one entry per component, every u_i < 0, and every edge
 * satisfies u_i + u_j > -phi_ij + kStateMargin. Throws StateError listing all
 * violations otherwise.
 */
ConformalState validate_state(const IdealTriangulation& m, std::vector<double> u);

/** Slack u_i + u_j + phi_ij for each edge in mesh order. */
std::vector<double> edge_slacks(const IdealTriangulation& m, std::span<const double> u);

/**
 * State document: exactly one of {"u": [...]} or {"r": [...]} (radii are
 * converted to conformal factors). Other keys are ignored. Not validated
 * against a mesh.
 */
std::vector<double> parse_state(std::string_view text);
std::vector<double> load_state(const std::filesystem::path& path);

/** Target document {"K": [...]}; entries must be positive and finite. */
std::vector<double> parse_target(std::string_view text);
std::vector<double> load_target(const std::filesystem::path& path);

/** Read a whole file; throws Error on I/O failure. */
std::string read_file(const std::filesystem::path& path);

}  // namespace hexflow
