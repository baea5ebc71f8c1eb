#pragma once

// Executable monotonicity verification: M-matrix certification by the sign /
// row-sum / irreducibility clauses, a dense inverse-nonnegativity oracle, and
// randomized discrete maximum principle trials.

#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "monofem/assembly.hpp"
#include "monofem/errors.hpp"
#include "monofem/solve.hpp"
#include "monofem/sparse.hpp"

namespace monofem {

struct MmatrixReport {
    bool sign_ok = false;
    std::vector<std::tuple<int, int, double>> sign_violations;  // (i, j, value)
    bool rowsum_ok = false;
    double min_row_sum = 0.0;
    int positive_row_sums = 0;
    bool irreducible = false;
    bool certified = false;
    double tol_sign = 0.0;
    double tol_rowsum = 0.0;
    int dimension = 0;

    std::string to_text() const {
        std::ostringstream out;
        out << "M-matrix certification (" << dimension << " unknowns)\n"
            << "  sign pattern:   " << (sign_ok ? "ok" : "VIOLATED") << " (" << sign_violations.size()
            << " violations, tol " << format_exact(tol_sign) << ")\n"
            << "  row sums:       " << (rowsum_ok ? "ok" : "VIOLATED") << " (min " << format_exact(min_row_sum)
            << ", " << positive_row_sums << " strictly positive, tol " << format_exact(tol_rowsum) << ")\n"
            << "  irreducible:    " << (irreducible ? "yes" : "NO") << "\n"
            << "  verdict:        " << (certified ? "certified" : "violated") << "\n";
        return out.str();
    }

    std::string to_keyvalue() const {
        std::ostringstream out;
        out << "dimension = " << dimension << "\n"
            << "sign_ok = " << (sign_ok ? 1 : 0) << "\n"
            << "sign_violations = " << sign_violations.size() << "\n"
            << "rowsum_ok = " << (rowsum_ok ? 1 : 0) << "\n"
            << "min_row_sum = " << format_exact(min_row_sum) << "\n"
            << "positive_row_sums = " << positive_row_sums << "\n"
            << "irreducible = " << (irreducible ? 1 : 0) << "\n"
            << "tol_sign = " << format_exact(tol_sign) << "\n"
            << "tol_rowsum = " << format_exact(tol_rowsum) << "\n"
            << "verdict = " << (certified ? "certified" : "violated") << "\n";
        return out.str();
    }
};

/// Sufficient M-matrix test: positive diagonal, non-positive off-diagonal,
/// non-negative row sums with at least one strictly positive, irreducible.
/// Tolerances scale with the largest diagonal entry because boundary-case
/// quadrature parameters make some off-diagonal entries analytically zero.
inline MmatrixReport check_m_matrix(const SparseMatrix& A) {
    if (A.rows != A.cols) throw ParameterError("check_m_matrix: matrix is not square");
    const int n = A.rows;
    MmatrixReport rep;
    rep.dimension = n;
    if (n == 0) return rep;

    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(A.diagonal(i)));
    rep.tol_sign = 1e-12 * max_diag;
    rep.tol_rowsum = 1e-11 * max_diag;

    rep.sign_ok = true;
    for (int i = 0; i < n; ++i) {
        if (!(A.diagonal(i) > 0.0)) {
            rep.sign_ok = false;
            rep.sign_violations.emplace_back(i, i, A.diagonal(i));
        }
        for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
            const int j = A.col_idx[k];
            if (j != i && A.values[k] > rep.tol_sign) {
                rep.sign_ok = false;
                rep.sign_violations.emplace_back(i, j, A.values[k]);
            }
        }
    }

    const std::vector<double> sums = A.row_sums();
    rep.min_row_sum = sums.empty() ? 0.0 : sums[0];
    for (double s : sums) {
        rep.min_row_sum = std::min(rep.min_row_sum, s);
        if (s > rep.tol_rowsum) ++rep.positive_row_sums;
    }
    rep.rowsum_ok = rep.min_row_sum >= -rep.tol_rowsum && rep.positive_row_sums >= 1;

    // connectivity of the graph of off-diagonal entries above the sign tolerance
    std::vector<char> seen(n, 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    int visited = 1;
    while (!frontier.empty()) {
        const int i = frontier.front();
        frontier.pop();
        for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
            const int j = A.col_idx[k];
            if (j != i && !seen[j] && std::abs(A.values[k]) > rep.tol_sign) {
                seen[j] = 1;
                ++visited;
                frontier.push(j);
            }
        }
    }
    rep.irreducible = visited == n;

    rep.certified = rep.sign_ok && rep.rowsum_ok && rep.irreducible;
    return rep;
}

struct InverseCheck {
    bool pass = false;
    double min_entry = 0.0;
    int row = -1;
    int col = -1;
};

/// Dense factorization of A and explicit inverse; passes when the smallest
/// entry of A^-1 is >= -tol. LU with partial pivoting, independent of the
/// Cholesky and CG paths.
inline InverseCheck inverse_nonnegative_oracle(const SparseMatrix& A, double tol = 1e-12, int cap = 2500) {
    if (A.rows != A.cols) throw ParameterError("inverse_nonnegative_oracle: matrix is not square");
    const int n = A.rows;
    if (n > cap)
        throw ParameterError("inverse_nonnegative_oracle: dimension " + std::to_string(n) + " exceeds cap " +
                             std::to_string(cap));
    if (n == 0) return {true, 0.0, -1, -1};

    std::vector<double> lu = A.dense();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;

    double scale = 0.0;
    for (double v : lu) scale = std::max(scale, std::abs(v));

    for (int k = 0; k < n; ++k) {
        int pivot_row = k;
        double pivot = std::abs(lu[static_cast<std::size_t>(k) * n + k]);
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(lu[static_cast<std::size_t>(i) * n + k]);
            if (v > pivot) {
                pivot = v;
                pivot_row = i;
            }
        }
        if (!(pivot > 1e-300 + 1e-15 * scale))
            throw SolverError("inverse_nonnegative_oracle: matrix is singular at column " + std::to_string(k));
        if (pivot_row != k) {
            for (int j = 0; j < n; ++j)
                std::swap(lu[static_cast<std::size_t>(k) * n + j], lu[static_cast<std::size_t>(pivot_row) * n + j]);
            std::swap(perm[k], perm[pivot_row]);
        }
        const double inv_pivot = 1.0 / lu[static_cast<std::size_t>(k) * n + k];
        for (int i = k + 1; i < n; ++i) {
            const double m = lu[static_cast<std::size_t>(i) * n + k] * inv_pivot;
            lu[static_cast<std::size_t>(i) * n + k] = m;
            if (m == 0.0) continue;
            for (int j = k + 1; j < n; ++j)
                lu[static_cast<std::size_t>(i) * n + j] -= m * lu[static_cast<std::size_t>(k) * n + j];
        }
    }

    InverseCheck check;
    check.min_entry = std::numeric_limits<double>::infinity();
    std::vector<double> col(n);
    for (int rhs = 0; rhs < n; ++rhs) {
        for (int i = 0; i < n; ++i) col[i] = perm[i] == rhs ? 1.0 : 0.0;
        for (int i = 1; i < n; ++i)
            for (int k = 0; k < i; ++k) col[i] -= lu[static_cast<std::size_t>(i) * n + k] * col[k];
        for (int i = n - 1; i >= 0; --i) {
            for (int k = i + 1; k < n; ++k) col[i] -= lu[static_cast<std::size_t>(i) * n + k] * col[k];
            col[i] /= lu[static_cast<std::size_t>(i) * n + i];
        }
        for (int i = 0; i < n; ++i)
            if (col[i] < check.min_entry) {
                check.min_entry = col[i];
                check.row = i;
                check.col = rhs;
            }
    }
    check.pass = check.min_entry >= -tol;
    return check;
}

struct DmpReport {
    int trials = 0;
    std::uint64_t seed = 0;
    /// Largest undershoot below zero in the nonnegativity trials, relative to max|u|.
    double worst_nonneg_violation = 0.0;
    /// Largest excursion outside [min g, max g] in the bounds trials, relative to max|g|.
    double worst_bounds_violation = 0.0;
    double tol = 0.0;
    bool pass = false;

    std::string to_text() const {
        std::ostringstream out;
        out << "Discrete maximum principle trials: " << trials << " (seed " << seed << ")\n"
            << "  nonnegativity: worst relative violation " << format_exact(worst_nonneg_violation) << "\n"
            << "  bounds:        worst relative violation " << format_exact(worst_bounds_violation) << "\n"
            << "  tolerance:     " << format_exact(tol) << " -> " << (pass ? "pass" : "FAIL") << "\n";
        return out.str();
    }

    std::string to_keyvalue() const {
        std::ostringstream out;
        out << "trials = " << trials << "\n"
            << "seed = " << seed << "\n"
            << "worst_nonneg_violation = " << format_exact(worst_nonneg_violation) << "\n"
            << "worst_bounds_violation = " << format_exact(worst_bounds_violation) << "\n"
            << "tol = " << format_exact(tol) << "\n"
            << "pass = " << (pass ? 1 : 0) << "\n";
        return out.str();
    }
};

/// Randomized maximum-principle trials on the assembled operator.
/// (i) nonnegativity: random f >= 0 at the nodes with g = 0 must give u >= 0;
/// (ii) bounds: c = 0, f = 0, random g must keep u inside [min g, max g].
inline DmpReport dmp_test(const Mesh& mesh, const ProblemSpec& problem, int trials, std::uint64_t seed = 20260801,
                          double tol = 1e-10, const AssembleOptions& opts = {}) {
    if (trials < 1) throw ParameterError("dmp_test: trials must be >= 1");

    DmpReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.tol = tol;

    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    const CgOptions cg{1e-12, 0};

    AssembledSystem sys = assemble(mesh, problem, opts);
    const int n = sys.dimension();
    for (int t = 0; t < trials; ++t) {
        for (int row = 0; row < n; ++row) sys.b[row] = sys.load_weights[sys.interior_nodes[row]] * unit(gen);
        const LinearSolveResult sol = cg_solve(sys.A, sys.b, cg);
        double min_u = 0.0, max_abs = 0.0;
        for (double v : sol.x) {
            min_u = std::min(min_u, v);
            max_abs = std::max(max_abs, std::abs(v));
        }
        if (max_abs > 0.0) rep.worst_nonneg_violation = std::max(rep.worst_nonneg_violation, -min_u / max_abs);
    }

    ProblemSpec reduced = problem;
    reduced.c = [](Vec2) { return 0.0; };
    reduced.f = [](Vec2) { return 0.0; };
    AssembledSystem sys0 = assemble(mesh, reduced, opts);
    std::vector<double> g(mesh.vertex_count(), 0.0);
    for (int t = 0; t < trials; ++t) {
        double g_min = std::numeric_limits<double>::infinity();
        double g_max = -g_min;
        double g_scale = 0.0;
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            if (!mesh.boundary[v]) continue;
            g[v] = sym(gen);
            g_min = std::min(g_min, g[v]);
            g_max = std::max(g_max, g[v]);
            g_scale = std::max(g_scale, std::abs(g[v]));
        }
        apply_dirichlet(sys0, g);
        const LinearSolveResult sol = cg_solve(sys0.A, sys0.b, cg);
        double excess = 0.0;
        for (double v : sol.x) excess = std::max({excess, g_min - v, v - g_max});
        if (g_scale > 0.0) rep.worst_bounds_violation = std::max(rep.worst_bounds_violation, excess / g_scale);
    }

    rep.pass = rep.worst_nonneg_violation <= tol && rep.worst_bounds_violation <= tol;
    return rep;
}

}  // namespace monofem
