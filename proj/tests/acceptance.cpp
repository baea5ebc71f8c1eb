// Acceptance suite: runs every pinned end-to-end requirement and prints one
// pass/fail line per criterion. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <monofem/monofem.hpp>

#include "test_support.hpp"

using namespace monofem;

namespace {

constexpr double pi = std::numbers::pi;

int failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  %d. %s — %s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(), detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct NamedSystem {
    std::string name;
    AssembledSystem system;
};

std::vector<NamedSystem> cross_check_pool;

void pool_system(const std::string& name, const AssembledSystem& sys) {
    cross_check_pool.push_back({name, sys});
}

// --- criterion 1 + 2: Table-1 convergence orders and per-level certification

void criterion_convergence_and_certification() {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<int> levels{4, 8, 16, 32, 64};
    const ProblemSpec problem = paper_sec6_problem(1.0);

    bool certified_all = true;
    std::string certify_detail;
    for (int n : levels) {
        const Mesh mesh = uniform_mesh(n, n, problem.domain);
        const AssembledSystem sys = assemble(mesh, problem);
        pool_system("paper-sec6 " + std::to_string(n), sys);
        const MmatrixReport rep = check_m_matrix(sys.A);
        if (!rep.certified) {
            certified_all = false;
            certify_detail += " n=" + std::to_string(n) + " violated;";
        }
        if (n == 64 && rep.certified)
            certify_detail = "all levels certified, 64x64: min row sum " + format_sig6(rep.min_row_sum) +
                             ", tol_sign " + format_sig6(rep.tol_sign);
    }

    StudyOptions opts;
    opts.c_note = "1 (constant)";
    const ConvergenceTable table = convergence_study(problem, levels, opts);
    const double elapsed = seconds_since(start);

    bool orders_ok = true;
    std::string orders;
    for (std::size_t k = 2; k < table.rows.size(); ++k) {
        const double lo = table.rows[k].linf_order;
        const double l2o = table.rows[k].l2_order;
        if (!(lo >= 1.9 && lo <= 2.15)) orders_ok = false;
        if (!(l2o >= 1.9 && l2o <= 2.15)) orders_ok = false;
        orders += " n=" + std::to_string(table.rows[k].n) + ": linf " + format_sig6(lo) + ", l2 " +
                  format_sig6(l2o) + ";";
    }
    const double linf64 = table.rows.back().linf;
    const bool magnitude_ok = linf64 >= 8.61e-4 / 3.0 && linf64 <= 8.61e-4 * 3.0;
    const bool time_ok = elapsed < 60.0;

    report(1, "convergence orders (paper-sec6, levels 4..64, c = 1)",
           orders_ok && magnitude_ok && time_ok,
           orders + " linf@64 = " + format_sig6(linf64) + " (target 8.61e-04 x3), " +
               format_sig6(elapsed) + " s");
    report(2, "M-matrix certification at every level", certified_all, certify_detail);
}

// --- criterion 3: dense inverse nonnegativity up to 10x10 meshes

void criterion_inverse_nonnegativity() {
    const auto start = std::chrono::steady_clock::now();
    bool pass = true;
    double worst = 0.0;
    for (const auto& make : {paper_sec6_problem(1.0), poisson_sine_problem()}) {
        for (int n = 2; n <= 10; ++n) {
            const Mesh mesh = uniform_mesh(n, n, make.domain);
            const AssembledSystem sys = assemble(mesh, make);
            if (sys.dimension() == 0) continue;
            if (n <= 8) pool_system(make.name + " small " + std::to_string(n), sys);
            const InverseCheck check = inverse_nonnegative_oracle(sys.A, 1e-12);
            worst = std::min(worst, check.min_entry);
            if (!check.pass) pass = false;
        }
    }
    const double elapsed = seconds_since(start);
    report(3, "inverse nonnegativity oracle (meshes up to 10x10)", pass && elapsed < 5.0,
           "min inverse entry " + format_sig6(worst) + " >= -1e-12, " + format_sig6(elapsed) + " s");
}

// --- criterion 4: randomized discrete maximum principle trials

void criterion_dmp() {
    bool pass = true;
    std::string detail;
    for (const auto& problem : {paper_sec6_problem(1.0), poisson_sine_problem()}) {
        const Mesh mesh = uniform_mesh(16, 16, problem.domain);
        const AssembledSystem sys = assemble(mesh, problem);
        if (!check_m_matrix(sys.A).certified) {
            pass = false;
            detail += problem.name + ": not certified; ";
            continue;
        }
        const DmpReport rep = dmp_test(mesh, problem, 100, 20260808, 1e-10);
        if (!rep.pass) pass = false;
        detail += problem.name + ": nonneg " + format_sig6(rep.worst_nonneg_violation) + ", bounds " +
                  format_sig6(rep.worst_bounds_violation) + "; ";
    }
    report(4, "discrete maximum principle (100 seeded trials, 16x16)", pass, detail + "tol 1e-10");
}

// --- criterion 5: quadrature kernel equivalence

void criterion_quadrature_kernel() {
    std::mt19937_64 gen(5150);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_diff = 0.0, worst_row = 0.0, worst_sign = 0.0;
    bool pass = true;

    for (int t = 0; t < 1000; ++t) {
        const Sym2 a = testsupport::random_spd(gen, false);
        const double l1 = unit(gen), l2 = unit(gen);
        const LocalMatrix closed = local_stiffness(a, l1, l2);
        const LocalMatrix brute = testsupport::quadrature_local_stiffness(a, l1, l2);
        worst_diff = std::max(worst_diff, testsupport::max_abs_diff(closed, brute));
        for (int r = 0; r < 4; ++r) {
            double row = 0.0;
            for (int c = 0; c < 4; ++c) row += closed[r][c];
            worst_row = std::max(worst_row, std::abs(row));
        }
    }
    if (worst_diff > 1e-12 || worst_row > 1e-12) pass = false;

    for (int t = 0; t < 1000; ++t) {
        const Sym2 a = testsupport::random_spd(gen, true);
        const double low = std::abs(a.a11 - a.a22) / a.trace();
        const double high = 1.0 - 2.0 * std::abs(a.a12) / a.trace();
        const double lambda = high <= low ? high : low + (high - low) * std::max(unit(gen), 1e-12);
        const LocalMatrix s = local_stiffness(a, lambda, lambda);
        const double tol = 1e-12 * std::max({s[0][0], s[1][1], s[2][2], s[3][3]});
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                if (r != c) worst_sign = std::max(worst_sign, s[r][c] - tol);
    }
    if (worst_sign > 0.0) pass = false;

    report(5, "quadrature kernel equivalence (1000 randomized pairs)", pass,
           "closed form vs 9-point quadrature: max diff " + format_sig6(worst_diff) + ", max row sum " +
               format_sig6(worst_row) + ", sign excess " + format_sig6(worst_sign));
}

// --- criterion 6: exact 5-point recovery for the Poisson problem

void criterion_five_point() {
    bool pass = true;
    std::string detail;
    for (int n : {4, 8, 16}) {
        const Mesh mesh = uniform_mesh(n, n, {0.0, 1.0, 0.0, 1.0});
        const AssembledSystem sys = assemble(mesh, poisson_sine_problem());
        pool_system("poisson-5pt " + std::to_string(n), sys);
        const SparseMatrix expected = testsupport::five_point_laplacian(n - 1);
        bool equal = sys.A.nnz() == expected.nnz();
        for (int i = 0; equal && i < sys.A.rows; ++i)
            for (int j = 0; j < sys.A.cols; ++j)
                if (sys.A.at(i, j) != expected.at(i, j)) {
                    equal = false;
                    break;
                }
        if (!equal) {
            pass = false;
            detail += " n=" + std::to_string(n) + " differs;";
        }
    }
    report(6, "five-point recovery (Poisson, lambda = (1,1))", pass,
           pass ? "assembled matrix equals the classical stencil entrywise" : detail);
}

// --- criterion 7: quadrilateral admissibility and the aspect-ratio cure

void criterion_quadrilateral_admissibility() {
    const Sym2 a{4.0, 1.9, 1.0};
    bool pass = true;
    std::string detail;

    const double ratio = recommend_aspect_ratio(a);
    if (ratio != 2.0) {
        pass = false;
        detail += "recommended ratio " + format_sig6(ratio) + " != 2; ";
    }

    const ProblemSpec square_problem = constant_tensor_problem(a, {0.0, 1.0, 0.0, 1.0});
    const Mesh square = uniform_mesh(8, 8, {0.0, 1.0, 0.0, 1.0});
    if (mesh_condition_check(square, square_problem).pass) {
        pass = false;
        detail += "square cells unexpectedly pass; ";
    }

    const ProblemSpec rect_problem = constant_tensor_problem(a, {0.0, 2.0, 0.0, 1.0});
    const Mesh rect = uniform_mesh(8, 8, {0.0, 2.0, 0.0, 1.0});
    if (!mesh_condition_check(rect, rect_problem).pass) {
        pass = false;
        detail += "ratio-2 rectangles fail the mesh condition; ";
    }

    bool certified = true;
    std::vector<double> linf;
    for (int n : {8, 16, 32}) {
        const Mesh mesh = uniform_mesh(n, n, {0.0, 2.0, 0.0, 1.0});
        const AssembledSystem sys = assemble(mesh, rect_problem);
        pool_system("rect-aniso " + std::to_string(n), sys);
        if (!check_m_matrix(sys.A).certified) certified = false;
        const SolveResult sol = solve_system(sys, SolveMethod::cg, {1e-12, 0});
        linf.push_back(nodal_errors(mesh, sol, rect_problem.u_exact).linf);
    }
    if (!certified) {
        pass = false;
        detail += "rectangle assembly not certified; ";
    }
    for (std::size_t k = 1; k < linf.size(); ++k) {
        const double order = std::log2(linf[k - 1] / linf[k]);
        detail += "order " + format_sig6(order) + "; ";
        if (!(order >= 1.9)) pass = false;
    }

    report(7, "quadrilateral admissibility and aspect-ratio cure (a12 = 1.9)", pass, detail);
}

// --- criterion 8: cg / dense cross-check over every pooled system

void criterion_solver_cross_check() {
    bool pass = true;
    double worst = 0.0;
    int checked = 0, skipped = 0;
    for (const auto& entry : cross_check_pool) {
        const AssembledSystem& sys = entry.system;
        if (sys.dimension() == 0 || sys.dimension() > 4096) {
            ++skipped;
            continue;
        }
        const LinearSolveResult it = cg_solve(sys.A, sys.b, {1e-12, 0});
        const LinearSolveResult direct = dense_solve(sys.A, sys.b);
        double diff = 0.0, scale = 0.0;
        for (int i = 0; i < sys.dimension(); ++i) {
            diff += (it.x[i] - direct.x[i]) * (it.x[i] - direct.x[i]);
            scale += direct.x[i] * direct.x[i];
        }
        const double rel = scale > 0.0 ? std::sqrt(diff / scale) : std::sqrt(diff);
        worst = std::max(worst, rel);
        ++checked;
        if (rel > 1e-9) {
            pass = false;
        }
    }
    report(8, "cg vs dense cross-check on all assembled systems", pass,
           std::to_string(checked) + " systems under the dense cap (" + std::to_string(skipped) +
               " skipped), worst relative difference " + format_sig6(worst));
}

}  // namespace

int main() {
    std::printf("monofem acceptance suite\n");
    const auto start = std::chrono::steady_clock::now();
    criterion_convergence_and_certification();
    criterion_inverse_nonnegativity();
    criterion_dmp();
    criterion_quadrature_kernel();
    criterion_five_point();
    criterion_quadrilateral_admissibility();
    criterion_solver_cross_check();
    std::printf("%d criterion(s) failed, total %.1f s\n", failures, seconds_since(start));
    return failures;
}
