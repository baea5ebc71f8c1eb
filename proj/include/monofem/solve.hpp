#pragma once

// Solvers for the assembled SPD systems: Jacobi-preconditioned conjugate
// gradients, and a dense Cholesky reference for cross-checking.

#include <cmath>
#include <span>
#include <vector>

#include "monofem/assembly.hpp"
#include "monofem/errors.hpp"
#include "monofem/sparse.hpp"

namespace monofem {

enum class SolveMethod { cg, dense };

inline const char* to_string(SolveMethod m) { return m == SolveMethod::cg ? "cg" : "dense"; }

/// Solution of one linear system A x = b.
struct LinearSolveResult {
    std::vector<double> x;
    int iterations = 0;
    double residual = 0.0;  // relative 2-norm of b - A x
    SolveMethod method = SolveMethod::cg;
};

/// Solution expanded over all mesh nodes; boundary entries carry g exactly.
struct SolveResult {
    std::vector<double> u;
    int iterations = 0;
    double residual = 0.0;
    SolveMethod method = SolveMethod::cg;
};

struct CgOptions {
    double rel_tol = 1e-12;
    int max_iter = 0;  // 0 selects 20 * dimension
};

namespace detail {

inline double dot_vec(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_vec(std::span<const double> a) { return std::sqrt(dot_vec(a, a)); }

}  // namespace detail

inline LinearSolveResult cg_solve(const SparseMatrix& A, const std::vector<double>& b, CgOptions opts = {}) {
    if (A.rows != A.cols) throw SolverError("cg_solve: matrix is not square");
    const int n = A.rows;
    if (static_cast<int>(b.size()) != n) throw SolverError("cg_solve: dimension mismatch");
    const int max_iter = opts.max_iter > 0 ? opts.max_iter : 20 * std::max(n, 1);

    LinearSolveResult out;
    out.method = SolveMethod::cg;
    out.x.assign(n, 0.0);
    const double b_norm = detail::norm_vec(b);
    if (b_norm == 0.0 || n == 0) return out;

    std::vector<double> inv_diag(n);
    for (int i = 0; i < n; ++i) {
        const double d = A.diagonal(i);
        if (!(d > 0.0))
            throw SolverError("cg_solve: non-positive diagonal entry at row " + std::to_string(i) +
                              "; matrix is not positive definite");
        inv_diag[i] = 1.0 / d;
    }

    std::vector<double> r = b;
    std::vector<double> z(n), p(n), Ap(n);
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = detail::dot_vec(r, z);

    for (int it = 1; it <= max_iter; ++it) {
        A.multiply(p, Ap);
        const double pAp = detail::dot_vec(p, Ap);
        if (!(pAp > 0.0))
            throw SolverError("cg_solve: p'Ap = " + format_exact(pAp) + " at iteration " + std::to_string(it) +
                              "; matrix is not positive definite");
        const double alpha = rz / pAp;
        for (int i = 0; i < n; ++i) {
            out.x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        out.iterations = it;
        if (detail::norm_vec(r) <= opts.rel_tol * b_norm) {
            // confirm against the true residual and restart if the recurrence drifted
            A.multiply(out.x, Ap);
            for (int i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
            const double true_norm = detail::norm_vec(r);
            if (true_norm <= opts.rel_tol * b_norm) {
                out.residual = true_norm / b_norm;
                return out;
            }
            for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
            p = z;
            rz = detail::dot_vec(r, z);
            continue;
        }
        for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_next = detail::dot_vec(r, z);
        const double beta = rz_next / rz;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        rz = rz_next;
    }
    A.multiply(out.x, Ap);
    for (int i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
    throw SolverError("cg_solve: no convergence after " + std::to_string(max_iter) +
                      " iterations, residual = " + format_exact(detail::norm_vec(r) / b_norm));
}

/// Dense Cholesky (A = U'U), the reference oracle for the iterative path.
inline LinearSolveResult dense_solve(const SparseMatrix& A, const std::vector<double>& b, int cap = 4096) {
    if (A.rows != A.cols) throw SolverError("dense_solve: matrix is not square");
    const int n = A.rows;
    if (static_cast<int>(b.size()) != n) throw SolverError("dense_solve: dimension mismatch");
    if (n > cap)
        throw SolverError("dense_solve: dimension " + std::to_string(n) + " exceeds cap " + std::to_string(cap));

    LinearSolveResult out;
    out.method = SolveMethod::dense;
    out.x.assign(n, 0.0);
    if (n == 0) return out;

    std::vector<double> u = A.dense();
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(u[static_cast<std::size_t>(i) * n + i]));

    for (int k = 0; k < n; ++k) {
        double* row_k = u.data() + static_cast<std::size_t>(k) * n;
        const double pivot = row_k[k];
        if (!(pivot > 1e-14 * max_diag))
            throw SolverError("dense_solve: pivot " + format_exact(pivot) + " at row " + std::to_string(k) +
                              "; matrix is singular or not positive definite");
        const double d = std::sqrt(pivot);
        row_k[k] = d;
        for (int j = k + 1; j < n; ++j) row_k[j] /= d;
        for (int i = k + 1; i < n; ++i) {
            const double cik = row_k[i];
            if (cik == 0.0) continue;
            double* row_i = u.data() + static_cast<std::size_t>(i) * n;
            for (int j = i; j < n; ++j) row_i[j] -= cik * row_k[j];
        }
    }

    // U' y = b, then U x = y
    std::vector<double> y(b);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < i; ++k) y[i] -= u[static_cast<std::size_t>(k) * n + i] * y[k];
        y[i] /= u[static_cast<std::size_t>(i) * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        const double* row_i = u.data() + static_cast<std::size_t>(i) * n;
        double s = y[i];
        for (int j = i + 1; j < n; ++j) s -= row_i[j] * out.x[j];
        out.x[i] = s / row_i[i];
    }

    const double b_norm = detail::norm_vec(b);
    if (b_norm > 0.0) {
        std::vector<double> r = A.multiply(out.x);
        for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
        out.residual = detail::norm_vec(r) / b_norm;
    }
    return out;
}

/// Solves an assembled system and expands to the full nodal vector.
inline SolveResult solve_system(const AssembledSystem& system, SolveMethod method = SolveMethod::cg,
                                CgOptions opts = {}, int dense_cap = 4096) {
    const LinearSolveResult lin = method == SolveMethod::cg ? cg_solve(system.A, system.b, opts)
                                                            : dense_solve(system.A, system.b, dense_cap);
    SolveResult out;
    out.u = system.nodal_values(lin.x);
    out.iterations = lin.iterations;
    out.residual = lin.residual;
    out.method = lin.method;
    return out;
}

}  // namespace monofem
