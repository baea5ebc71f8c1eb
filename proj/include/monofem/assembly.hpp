#pragma once

// Global assembly: diffusion via the mixed quadrature with per-element
// parameters, reaction and load via the trapezoid rule, and Dirichlet
// elimination to an interior-only symmetric system.

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "monofem/errors.hpp"
#include "monofem/lambda.hpp"
#include "monofem/mesh.hpp"
#include "monofem/problem.hpp"
#include "monofem/sparse.hpp"
#include "monofem/types.hpp"

namespace monofem {

struct AssembleOptions {
    LambdaPolicy policy = LambdaPolicy::upper;
    /// When set, bypasses admissibility and uses these parameters everywhere.
    /// For experiments on what happens outside the guaranteed regime.
    std::optional<std::pair<double, double>> lambda_override;
};

struct ElementRecord {
    Sym2 abar;
    Sym2 atilde;
    QuadParams params;
};

struct BoundaryCoupling {
    int row;       // interior equation index
    int node;      // boundary mesh node
    double value;  // raw stiffness entry eliminated from that equation
};

struct AssembledSystem {
    SparseMatrix A;                      // interior x interior, symmetric
    std::vector<double> b;               // load - coupling * g
    std::vector<double> load;            // trapezoid load vector, interior rows
    std::vector<int> interior_map;       // node -> row, -1 on the boundary
    std::vector<int> interior_nodes;     // row -> node
    std::vector<double> boundary_values; // g per node, 0 at interior nodes
    std::vector<BoundaryCoupling> coupling;  // ascending (row, node)
    std::vector<double> load_weights;    // per node: sum over elements of trapezoid weight * |J|
    std::vector<ElementRecord> elements;
    double tol_sign = 0.0;               // 1e-12 * max diagonal, for sign-pattern checks

    int dimension() const { return A.rows; }

    /// Expands an interior vector to all mesh nodes, boundary entries carry g.
    std::vector<double> nodal_values(std::span<const double> interior) const {
        std::vector<double> u = boundary_values;
        for (int row = 0; row < dimension(); ++row) u[interior_nodes[row]] = interior[row];
        return u;
    }
};

/// Replaces the Dirichlet data: b_i = load_i - sum_{j on boundary} A_raw[i][j] g_j.
inline void apply_dirichlet(AssembledSystem& system, const std::vector<double>& g_nodal) {
    if (g_nodal.size() != system.boundary_values.size())
        throw ParameterError("apply_dirichlet: expected one value per mesh node");
    system.b = system.load;
    for (const auto& c : system.coupling) system.b[c.row] -= c.value * g_nodal[c.node];
    for (std::size_t i = 0; i < g_nodal.size(); ++i)
        system.boundary_values[i] = system.interior_map[i] < 0 ? g_nodal[i] : 0.0;
}

inline AssembledSystem assemble(const Mesh& mesh, const ProblemSpec& problem, const AssembleOptions& opts = {}) {
    AssembledSystem sys;
    const int nv = mesh.vertex_count();
    sys.interior_map.assign(nv, -1);
    for (int v = 0; v < nv; ++v)
        if (!mesh.boundary[v]) {
            sys.interior_map[v] = static_cast<int>(sys.interior_nodes.size());
            sys.interior_nodes.push_back(v);
        }
    const int n = static_cast<int>(sys.interior_nodes.size());

    SparseBuilder builder(n, n);
    std::map<std::pair<int, int>, double> coupling;
    sys.load.assign(n, 0.0);
    sys.load_weights.assign(nv, 0.0);
    sys.elements.reserve(mesh.elements.size());

    for (int e = 0; e < mesh.element_count(); ++e) {
        const ElementGeometry geom = element_geometry(mesh, e);
        const CoefficientSample sample = sample_center(problem, geom, e);
        const EffectiveCoefficient eff = effective_coefficient(geom, sample);

        QuadParams params;
        if (opts.lambda_override) {
            params.lambda1 = opts.lambda_override->first;
            params.lambda2 = opts.lambda_override->second;
        } else {
            params = select_lambda(eff, opts.policy, e);
        }
        const LocalMatrix local = local_stiffness(eff.atilde, params);
        sys.elements.push_back({sample.abar, eff.atilde, params});

        const std::array<double, 4> jac = vertex_jacobians(geom);
        const auto& el = mesh.elements[e];
        for (int r = 0; r < 4; ++r) {
            const int node = el[r];
            const double weight = 0.25 * jac[r];  // corner weight of the 2D trapezoid rule
            sys.load_weights[node] += weight;
            const int row = sys.interior_map[node];
            if (row < 0) continue;

            const Vec2 x = mesh.vertices[node];
            const double c_val = problem.c(x);
            if (c_val < 0.0)
                throw CoefficientError("node " + std::to_string(node) + ": reaction coefficient c = " +
                                       format_exact(c_val) + " is negative");
            // trapezoid nodes are the vertices, so the reaction couples the diagonal only
            builder.add(row, row, weight * c_val);
            sys.load[row] += weight * problem.f(x);

            for (int s = 0; s < 4; ++s) {
                const int other = el[s];
                const int col = sys.interior_map[other];
                if (col >= 0)
                    builder.add(row, col, local[r][s]);
                else
                    coupling[{row, other}] += local[r][s];
            }
        }
    }

    sys.A = builder.build();
    sys.coupling.reserve(coupling.size());
    for (const auto& [key, v] : coupling) sys.coupling.push_back({key.first, key.second, v});

    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(sys.A.diagonal(i)));
    sys.tol_sign = 1e-12 * max_diag;

    std::vector<double> g_nodal(nv, 0.0);
    for (int v = 0; v < nv; ++v)
        if (mesh.boundary[v]) g_nodal[v] = problem.g ? problem.g(mesh.vertices[v]) : 0.0;
    sys.boundary_values.assign(nv, 0.0);
    apply_dirichlet(sys, g_nodal);
    return sys;
}

/// Coordinate-triplet text: header "rows cols nnz", then "i j value" with
/// 1-based indices in row-major order.
inline void export_matrix(const AssembledSystem& system, std::ostream& out) {
    const SparseMatrix& A = system.A;
    out << A.rows << ' ' << A.cols << ' ' << A.nnz() << '\n';
    for (int i = 0; i < A.rows; ++i)
        for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
            out << i + 1 << ' ' << A.col_idx[k] + 1 << ' ' << format_exact(A.values[k]) << '\n';
}

inline void export_matrix(const AssembledSystem& system, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("export_matrix: cannot open '" + path + "' for writing");
    export_matrix(system, out);
    if (!out) throw IoError("export_matrix: write failure on '" + path + "'");
}

/// Load vector: a count header, then one value per line.
inline void export_load(const AssembledSystem& system, std::ostream& out) {
    out << system.b.size() << '\n';
    for (double v : system.b) out << format_exact(v) << '\n';
}

inline void export_load(const AssembledSystem& system, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("export_load: cannot open '" + path + "' for writing");
    export_load(system, out);
    if (!out) throw IoError("export_load: write failure on '" + path + "'");
}

}  // namespace monofem
