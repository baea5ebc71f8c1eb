#pragma once

// Quadrilateral meshes: uniform rectangular construction, per-element
// geometry, and plain-text file I/O.
//
// Mesh file format (whitespace separated, '#' starts a comment):
//   nv ne
//   x y            one line per vertex
//   i0 i1 i2 i3    one line per element, zero-based vertex indices in the
//                  corner order (0,0),(0,1),(1,1),(1,0)
//   B n0 n1 ...    optional trailing boundary-node list

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "monofem/errors.hpp"
#include "monofem/reference.hpp"
#include "monofem/types.hpp"

namespace monofem {

struct UniformMeshInfo {
    int nx = 0;
    int ny = 0;
    Rect domain;
    double h1 = 0.0;
    double h2 = 0.0;
};

struct Mesh {
    std::vector<Vec2> vertices;
    /// Four vertex indices per element in the corner order (0,0),(0,1),(1,1),(1,0).
    std::vector<std::array<int, 4>> elements;
    std::vector<std::uint8_t> boundary;  // per-vertex flag
    std::optional<UniformMeshInfo> uniform;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int element_count() const { return static_cast<int>(elements.size()); }

    int interior_count() const {
        int n = 0;
        for (auto flag : boundary)
            if (!flag) ++n;
        return n;
    }

    std::vector<int> boundary_nodes() const {
        std::vector<int> out;
        for (int i = 0; i < vertex_count(); ++i)
            if (boundary[i]) out.push_back(i);
        return out;
    }
};

/// Edge vectors and center Jacobian of one element's bilinear map.
struct ElementGeometry {
    /// c0 = c01-c00, c1 = c10-c00, c2 = c11-c10, c3 = c11-c01.
    std::array<Vec2, 4> edges{};
    Mat2 jacobian;         // DF at the reference center (1/2,1/2)
    double jac_det = 0.0;  // det(DF) at the center, positive for valid elements
    Vec2 center;           // image of (1/2,1/2)
};

inline ElementGeometry element_geometry(const Mesh& mesh, int e) {
    if (e < 0 || e >= mesh.element_count())
        throw ParameterError("element_geometry: element index " + std::to_string(e) + " out of range");
    const auto& el = mesh.elements[e];
    const Vec2 c00 = mesh.vertices[el[0]];
    const Vec2 c01 = mesh.vertices[el[1]];
    const Vec2 c11 = mesh.vertices[el[2]];
    const Vec2 c10 = mesh.vertices[el[3]];

    ElementGeometry g;
    if (mesh.uniform) {
        // all cells are congruent h1 x h2 rectangles; taking the stored sizes
        // keeps the geometry bit-identical across elements
        const double h1 = mesh.uniform->h1;
        const double h2 = mesh.uniform->h2;
        g.edges = {Vec2{0.0, h2}, Vec2{h1, 0.0}, Vec2{0.0, h2}, Vec2{h1, 0.0}};
        g.jacobian = {h1, 0.0, 0.0, h2};
    } else {
        g.edges = {c01 - c00, c10 - c00, c11 - c10, c11 - c01};
        const Vec2 col1 = 0.5 * (g.edges[1] + g.edges[3]);
        const Vec2 col2 = 0.5 * (g.edges[0] + g.edges[2]);
        g.jacobian = {col1.x, col2.x, col1.y, col2.y};
    }
    g.jac_det = g.jacobian.det();
    g.center = 0.25 * (c00 + c01 + c11 + c10);
    if (!(g.jac_det > 0.0))
        throw GeometryError("element " + std::to_string(e) + ": degenerate bilinear map, det(DF) = " +
                            format_exact(g.jac_det));
    return g;
}

/// det(DF) at the four element corners, in corner order. For rectangles and
/// parallelograms all four equal jac_det.
inline std::array<double, 4> vertex_jacobians(const ElementGeometry& g) {
    return {cross(g.edges[1], g.edges[0]),   // (0,0): dF1 = c1, dF2 = c0
            cross(g.edges[3], g.edges[0]),   // (0,1): dF1 = c3, dF2 = c0
            cross(g.edges[3], g.edges[2]),   // (1,1): dF1 = c3, dF2 = c2
            cross(g.edges[1], g.edges[2])};  // (1,0): dF1 = c1, dF2 = c2
}

/// Uniform rectangular mesh with lexicographic node numbering (x fastest).
inline Mesh uniform_mesh(int nx, int ny, Rect domain) {
    if (nx < 1 || ny < 1)
        throw ParameterError("uniform_mesh: cell counts must be >= 1, got " + std::to_string(nx) + "x" +
                             std::to_string(ny));
    if (domain.degenerate()) throw ParameterError("uniform_mesh: degenerate domain rectangle");

    Mesh mesh;
    const double h1 = domain.width() / nx;
    const double h2 = domain.height() / ny;
    mesh.vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
    mesh.boundary.reserve(mesh.vertices.capacity());
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            mesh.vertices.push_back({domain.x0 + i * h1, domain.y0 + j * h2});
            mesh.boundary.push_back(i == 0 || i == nx || j == 0 || j == ny ? 1 : 0);
        }
    mesh.elements.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int v00 = j * (nx + 1) + i;
            const int v10 = v00 + 1;
            const int v01 = v00 + (nx + 1);
            const int v11 = v01 + 1;
            mesh.elements.push_back({v00, v01, v11, v10});
        }
    mesh.uniform = UniformMeshInfo{nx, ny, domain, h1, h2};
    return mesh;
}

namespace detail {

/// A node lies on the boundary iff it touches a perimeter edge owned by
/// exactly one element.
inline std::vector<std::uint8_t> derive_boundary(const std::vector<Vec2>& vertices,
                                                 const std::vector<std::array<int, 4>>& elements) {
    std::map<std::pair<int, int>, int> edge_count;
    auto touch = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        ++edge_count[{a, b}];
    };
    // perimeter cycle in corner order is c00 -> c01 -> c11 -> c10
    for (const auto& el : elements) {
        touch(el[0], el[1]);
        touch(el[1], el[2]);
        touch(el[2], el[3]);
        touch(el[3], el[0]);
    }
    std::vector<std::uint8_t> flags(vertices.size(), 0);
    for (const auto& [edge, count] : edge_count)
        if (count == 1) {
            flags[edge.first] = 1;
            flags[edge.second] = 1;
        }
    return flags;
}

struct LineReader {
    std::istream& in;
    std::string name;
    int line_no = 0;

    /// Next non-empty line with comments stripped; false at end of input.
    bool next(std::string& out) {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_no;
            const auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            std::istringstream probe(raw);
            std::string token;
            if (probe >> token) {
                out = raw;
                return true;
            }
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(name + ":" + std::to_string(line_no) + ": " + what);
    }
};

}  // namespace detail

inline Mesh load_mesh(std::istream& in, const std::string& name = "<mesh>") {
    detail::LineReader reader{in, name};
    std::string line;

    if (!reader.next(line)) reader.fail("empty mesh file");
    long nv = -1, ne = -1;
    {
        std::istringstream ss(line);
        std::string extra;
        if (!(ss >> nv >> ne) || (ss >> extra)) reader.fail("malformed header, expected 'nv ne'");
        if (nv < 1 || ne < 1) reader.fail("invalid counts nv=" + std::to_string(nv) + " ne=" + std::to_string(ne));
    }

    Mesh mesh;
    mesh.vertices.reserve(static_cast<std::size_t>(nv));
    for (long i = 0; i < nv; ++i) {
        if (!reader.next(line)) reader.fail("unexpected end of file, expected vertex " + std::to_string(i));
        std::istringstream ss(line);
        Vec2 p;
        std::string extra;
        if (!(ss >> p.x >> p.y) || (ss >> extra))
            reader.fail("malformed vertex line, expected 'x y'");
        mesh.vertices.push_back(p);
    }

    std::vector<int> element_lines;
    element_lines.reserve(static_cast<std::size_t>(ne));
    for (long e = 0; e < ne; ++e) {
        if (!reader.next(line)) reader.fail("unexpected end of file, expected element " + std::to_string(e));
        std::istringstream ss(line);
        std::array<int, 4> idx{};
        std::string extra;
        if (!(ss >> idx[0] >> idx[1] >> idx[2] >> idx[3]) || (ss >> extra))
            reader.fail("malformed element line, expected 4 vertex indices");
        for (int k = 0; k < 4; ++k)
            if (idx[k] < 0 || idx[k] >= nv)
                reader.fail("vertex index " + std::to_string(idx[k]) + " out of range [0," + std::to_string(nv) +
                            ") in element " + std::to_string(e));
        for (int k = 0; k < 4; ++k)
            for (int l = k + 1; l < 4; ++l)
                if (idx[k] == idx[l]) reader.fail("repeated vertex " + std::to_string(idx[k]) + " in element " +
                                                  std::to_string(e));
        mesh.elements.push_back(idx);
        element_lines.push_back(reader.line_no);
    }

    std::optional<std::vector<int>> listed_boundary;
    if (reader.next(line)) {
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag != "B") reader.fail("unexpected trailing line, expected optional 'B ...' list");
        std::vector<int> nodes;
        int v;
        while (ss >> v) {
            if (v < 0 || v >= nv) reader.fail("boundary node " + std::to_string(v) + " out of range");
            nodes.push_back(v);
        }
        if (!ss.eof()) reader.fail("malformed boundary-node list");
        listed_boundary = std::move(nodes);
        if (reader.next(line)) reader.fail("unexpected content after boundary-node list");
    }

    mesh.boundary.assign(mesh.vertices.size(), 0);
    if (listed_boundary) {
        for (int v : *listed_boundary) mesh.boundary[v] = 1;
    } else {
        mesh.boundary = detail::derive_boundary(mesh.vertices, mesh.elements);
    }

    for (int e = 0; e < mesh.element_count(); ++e) {
        try {
            element_geometry(mesh, e);
        } catch (const GeometryError& err) {
            throw ParseError(name + ":" + std::to_string(element_lines[e]) + ": " + err.what());
        }
    }
    return mesh;
}

inline Mesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_mesh: cannot open '" + path + "'");
    return load_mesh(in, path);
}

inline void save_mesh(const Mesh& mesh, std::ostream& out) {
    out << mesh.vertex_count() << ' ' << mesh.element_count() << '\n';
    for (const auto& v : mesh.vertices) out << format_exact(v.x) << ' ' << format_exact(v.y) << '\n';
    for (const auto& el : mesh.elements) out << el[0] << ' ' << el[1] << ' ' << el[2] << ' ' << el[3] << '\n';
    out << 'B';
    for (int v : mesh.boundary_nodes()) out << ' ' << v;
    out << '\n';
}

inline void save_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("save_mesh: cannot open '" + path + "' for writing");
    save_mesh(mesh, out);
    if (!out) throw IoError("save_mesh: write failure on '" + path + "'");
}

}  // namespace monofem
