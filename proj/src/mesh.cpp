#include "hexflow/mesh.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "hexflow/errors.hpp"
#include "hexflow/hexgeom.hpp"

namespace hexflow
{

namespace
{

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& msg)
{
    throw MeshError(MeshError::Kind::Schema, msg);
}

json parse_json(std::string_view text)
{
    try {
        return json::parse(text.begin(), text.end());
    }
    catch (const json::parse_error& e) {
        // byte is 1-based position of the offending character
        std::size_t line = 1;
        std::size_t col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            }
            else {
                ++col;
            }
        }
        std::ostringstream os;
        os << "JSON syntax error at line " << line << ", column " << col << " (offset "
           << e.byte << "): " << e.what();
        throw MeshError(MeshError::Kind::Syntax, os.str());
    }
}

const json& require(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key)) {
        schema_error(where + ": missing key \"" + key + "\"");
    }
    return obj.at(key);
}

long long require_int(const json& v, const std::string& where)
{
    if (!v.is_number_integer()) {
        schema_error(where + ": expected an integer");
    }
    return v.get<long long>();
}

double require_number(const json& v, const std::string& where)
{
    if (!v.is_number()) {
        schema_error(where + ": expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        schema_error(where + ": expected a finite number");
    }
    return x;
}

std::size_t require_component(const json& v, std::size_t n, const std::string& where)
{
    const long long k = require_int(v, where);
    if (k < 1 || static_cast<unsigned long long>(k) > n) {
        schema_error(where + ": boundary index " + std::to_string(k) + " outside 1.." +
                     std::to_string(n));
    }
    return static_cast<std::size_t>(k - 1);
}

const json& require_array(const json& v, std::size_t size, const std::string& where)
{
    if (!v.is_array() || (size != 0 && v.size() != size)) {
        schema_error(where + ": expected an array" +
                     (size ? " of length " + std::to_string(size) : std::string()));
    }
    return v;
}

std::vector<double> number_list(const json& v, const std::string& where)
{
    if (!v.is_array()) {
        schema_error(where + ": expected an array of numbers");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(require_number(v[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::string face_slot(std::size_t f, std::size_t k)
{
    return "faces[" + std::to_string(f) + "] slot " + std::to_string(k);
}

}  // namespace

IdealTriangulation IdealTriangulation::build(
    std::size_t n_boundary, std::vector<Edge> edges, std::vector<Face> faces)
{
    using K = MeshError::Kind;
    if (n_boundary < 1) {
        throw MeshError(K::Structure, "mesh needs at least one boundary component");
    }
    if (faces.empty()) {
        throw MeshError(K::Structure, "mesh needs at least one face");
    }
    std::map<long long, std::size_t> ids;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const Edge& edge = edges[e];
        if (!ids.emplace(edge.id, e).second) {
            throw MeshError(K::Schema, "duplicate edge id " + std::to_string(edge.id));
        }
        for (auto end : edge.ends) {
            if (end >= n_boundary) {
                throw MeshError(K::Schema, "edge " + std::to_string(edge.id) +
                                               " has an endpoint outside the boundary range");
            }
        }
        if (!std::isfinite(edge.phi) || edge.phi <= 0.0) {
            throw MeshError(K::Schema, "edge " + std::to_string(edge.id) +
                                           " needs a positive finite weight");
        }
    }

    std::vector<std::size_t> slot_count(edges.size(), 0);
    std::vector<bool> used_corner(n_boundary, false);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& face = faces[f];
        for (std::size_t k = 0; k < 3; ++k) {
            if (face.edges[k] >= edges.size()) {
                throw MeshError(K::Dangling, face_slot(f, k) + " references a missing edge");
            }
            if (face.corners[k] >= n_boundary) {
                throw MeshError(K::Schema, face_slot(f, k) + " corner outside the boundary range");
            }
        }
        if (face.edges[0] == face.edges[1] || face.edges[1] == face.edges[2] ||
            face.edges[0] == face.edges[2]) {
            throw MeshError(K::Structure,
                            "faces[" + std::to_string(f) + "] repeats an edge");
        }
        for (std::size_t k = 0; k < 3; ++k) {
            // edge k must join exactly the two other corners (as a multiset)
            const Edge& edge = edges[face.edges[k]];
            const std::size_t p = face.corners[(k + 1) % 3];
            const std::size_t q = face.corners[(k + 2) % 3];
            const bool match = (edge.ends[0] == p && edge.ends[1] == q) ||
                               (edge.ends[0] == q && edge.ends[1] == p);
            if (!match) {
                throw MeshError(
                    K::Corner, face_slot(f, k) + ": edge " + std::to_string(edge.id) +
                                   " does not join corners " + std::to_string(p + 1) + " and " +
                                   std::to_string(q + 1));
            }
            ++slot_count[face.edges[k]];
            used_corner[face.corners[k]] = true;
        }
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (slot_count[e] != 2) {
            throw MeshError(K::Structure, "edge " + std::to_string(edges[e].id) + " fills " +
                                              std::to_string(slot_count[e]) +
                                              " face slots, expected exactly 2");
        }
    }
    for (std::size_t i = 0; i < n_boundary; ++i) {
        if (!used_corner[i]) {
            throw MeshError(K::Structure, "boundary component " + std::to_string(i + 1) +
                                              " is not a corner of any face");
        }
    }

    IdealTriangulation m;
    m.n_boundary_ = n_boundary;
    m.edges_ = std::move(edges);
    m.faces_ = std::move(faces);
    return m;
}

std::array<double, 3> IdealTriangulation::face_weights(std::size_t f) const
{
    const Face& face = faces_.at(f);
    return {edges_[face.edges[0]].phi, edges_[face.edges[1]].phi, edges_[face.edges[2]].phi};
}

IdealTriangulation parse_mesh(std::string_view text)
{
    const json doc = parse_json(text);
    if (!doc.is_object()) {
        schema_error("mesh document must be a JSON object");
    }
    const long long n_raw = require_int(require(doc, "n_boundary", "mesh"), "n_boundary");
    if (n_raw < 1) {
        schema_error("n_boundary must be at least 1");
    }
    const auto n = static_cast<std::size_t>(n_raw);

    const json& jedges = require_array(require(doc, "edges", "mesh"), 0, "edges");
    std::vector<Edge> edges;
    std::map<long long, std::size_t> position;
    for (std::size_t e = 0; e < jedges.size(); ++e) {
        const std::string where = "edges[" + std::to_string(e) + "]";
        const json& je = jedges[e];
        Edge edge{};
        edge.id = require_int(require(je, "id", where), where + ".id");
        const json& ends = require_array(require(je, "ends", where), 2, where + ".ends");
        edge.ends = {require_component(ends[0], n, where + ".ends[0]"),
                     require_component(ends[1], n, where + ".ends[1]")};
        edge.phi = require_number(require(je, "phi", where), where + ".phi");
        if (edge.phi <= 0.0) {
            schema_error(where + ".phi: weight must be positive");
        }
        if (!position.emplace(edge.id, e).second) {
            schema_error(where + ": duplicate edge id " + std::to_string(edge.id));
        }
        edges.push_back(edge);
    }

    const json& jfaces = require_array(require(doc, "faces", "mesh"), 0, "faces");
    std::vector<Face> faces;
    for (std::size_t f = 0; f < jfaces.size(); ++f) {
        const std::string where = "faces[" + std::to_string(f) + "]";
        const json& jf = jfaces[f];
        const json& fe = require_array(require(jf, "edges", where), 3, where + ".edges");
        const json& fv = require_array(
            require(jf, "opposite_vertices", where), 3, where + ".opposite_vertices");
        Face face{};
        for (std::size_t k = 0; k < 3; ++k) {
            const long long id = require_int(fe[k], where + ".edges[" + std::to_string(k) + "]");
            const auto it = position.find(id);
            if (it == position.end()) {
                throw MeshError(MeshError::Kind::Dangling,
                                where + ".edges[" + std::to_string(k) + "]: undefined edge id " +
                                    std::to_string(id));
            }
            face.edges[k] = it->second;
            face.corners[k] = require_component(
                fv[k], n, where + ".opposite_vertices[" + std::to_string(k) + "]");
        }
        faces.push_back(face);
    }
    return IdealTriangulation::build(n, std::move(edges), std::move(faces));
}

IdealTriangulation load_mesh(const std::filesystem::path& path)
{
    return parse_mesh(read_file(path));
}

std::string serialize_mesh(const IdealTriangulation& m)
{
    json doc;
    doc["n_boundary"] = m.boundary_count();
    json edges = json::array();
    for (const Edge& e : m.edges()) {
        edges.push_back({{"id", e.id}, {"ends", {e.ends[0] + 1, e.ends[1] + 1}}, {"phi", e.phi}});
    }
    json faces = json::array();
    for (const Face& f : m.faces()) {
        json ids = json::array();
        json corners = json::array();
        for (std::size_t k = 0; k < 3; ++k) {
            ids.push_back(m.edges()[f.edges[k]].id);
            corners.push_back(f.corners[k] + 1);
        }
        faces.push_back({{"edges", ids}, {"opposite_vertices", corners}});
    }
    doc["edges"] = edges;
    doc["faces"] = faces;
    return doc.dump(2) + "\n";
}

long long euler_characteristic(const IdealTriangulation& m)
{
    return static_cast<long long>(m.boundary_count()) -
           static_cast<long long>(m.edges().size()) + static_cast<long long>(m.faces().size());
}

IdealTriangulation disjoint_union(const IdealTriangulation& a, const IdealTriangulation& b)
{
    long long id_shift = 0;
    for (const Edge& e : a.edges()) {
        id_shift = std::max(id_shift, e.id);
    }
    const std::size_t n = a.boundary_count();
    const std::size_t ne = a.edges().size();

    std::vector<Edge> edges = a.edges();
    for (Edge e : b.edges()) {
        e.id += id_shift;
        e.ends = {e.ends[0] + n, e.ends[1] + n};
        edges.push_back(e);
    }
    std::vector<Face> faces = a.faces();
    for (Face f : b.faces()) {
        for (std::size_t k = 0; k < 3; ++k) {
            f.edges[k] += ne;
            f.corners[k] += n;
        }
        faces.push_back(f);
    }
    return IdealTriangulation::build(n + b.boundary_count(), std::move(edges), std::move(faces));
}

std::vector<double> edge_slacks(const IdealTriangulation& m, std::span<const double> u)
{
    std::vector<double> out;
    out.reserve(m.edges().size());
    for (const Edge& e : m.edges()) {
        out.push_back(u[e.ends[0]] + u[e.ends[1]] + e.phi);
    }
    return out;
}

ConformalState validate_state(const IdealTriangulation& m, std::vector<double> u)
{
    using VK = StateViolation::Kind;
    std::vector<StateViolation> bad;
    if (u.size() != m.boundary_count()) {
        bad.push_back({VK::Length, u.size(), 0.0});
        throw StateError("state has " + std::to_string(u.size()) + " entries, mesh has " +
                             std::to_string(m.boundary_count()) + " boundary components",
                         std::move(bad));
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i])) {
            bad.push_back({VK::NonFinite, i, u[i]});
        }
        else if (u[i] >= 0.0) {
            bad.push_back({VK::NonNegative, i, u[i]});
        }
    }
    if (bad.empty()) {
        const auto slack = edge_slacks(m, u);
        for (std::size_t e = 0; e < slack.size(); ++e) {
            if (!(slack[e] > kStateMargin)) {
                bad.push_back({VK::Edge, static_cast<std::size_t>(m.edges()[e].id), slack[e]});
            }
        }
    }
    if (!bad.empty()) {
        std::ostringstream os;
        os.precision(17);
        os << "inadmissible conformal state:";
        for (const auto& v : bad) {
            if (v.kind == VK::Edge) {
                os << " edge " << v.index << " has u_i + u_j + phi = " << v.slack << ";";
            }
            else {
                os << " u[" << v.index + 1 << "] = " << v.slack << " is not negative;";
            }
        }
        throw StateError(os.str(), std::move(bad));
    }
    return ConformalState(std::move(u));
}

std::vector<double> parse_state(std::string_view text)
{
    const json doc = parse_json(text);
    if (!doc.is_object()) {
        schema_error("state document must be a JSON object");
    }
    const bool has_u = doc.contains("u");
    const bool has_r = doc.contains("r");
    if (has_u == has_r) {
        schema_error("state document needs exactly one of the keys \"u\" and \"r\"");
    }
    if (has_u) {
        return number_list(doc.at("u"), "u");
    }
    std::vector<double> u;
    const auto radii = number_list(doc.at("r"), "r");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        try {
            u.push_back(to_conformal(Radius(radii[i])).value());
        }
        catch (const DomainError& e) {
            schema_error("r[" + std::to_string(i) + "]: " + e.what());
        }
    }
    return u;
}

std::vector<double> load_state(const std::filesystem::path& path)
{
    return parse_state(read_file(path));
}

std::vector<double> parse_target(std::string_view text)
{
    const json doc = parse_json(text);
    const auto k = number_list(require(doc, "K", "target"), "K");
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (!(k[i] > 0.0)) {
            schema_error("K[" + std::to_string(i) + "]: prescribed boundary length must be positive");
        }
    }
    return k;
}

std::vector<double> load_target(const std::filesystem::path& path)
{
    return parse_target(read_file(path));
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw Error("failed reading " + path.string());
    }
    return ss.str();
}

}  // namespace hexflow
