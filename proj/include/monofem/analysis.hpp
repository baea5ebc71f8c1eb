#pragma once

// Error norms, convergence studies, and the quadrilateral mesh-condition
// check with its aspect-ratio recommendation.

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "monofem/assembly.hpp"
#include "monofem/errors.hpp"
#include "monofem/lambda.hpp"
#include "monofem/mesh.hpp"
#include "monofem/monotone.hpp"
#include "monofem/problem.hpp"
#include "monofem/solve.hpp"

namespace monofem {

struct NodalErrors {
    double l2 = 0.0;
    double linf = 0.0;
};

namespace detail {

/// Mesh size entering the discrete l2 norm: geometric mean of the cell sides
/// on uniform meshes, square root of the mean cell area otherwise.
inline double l2_mesh_size(const Mesh& mesh) {
    if (mesh.uniform) return std::sqrt(mesh.uniform->h1 * mesh.uniform->h2);
    double area = 0.0;
    for (int e = 0; e < mesh.element_count(); ++e) area += element_geometry(mesh, e).jac_det;
    return std::sqrt(area / mesh.element_count());
}

}  // namespace detail

/// Interior-node errors: linf = max |e_i|, l2 = h * sqrt(sum e_i^2).
inline NodalErrors nodal_errors(const Mesh& mesh, std::span<const double> nodal_u, const ScalarField& exact) {
    if (!exact) throw ParameterError("nodal_errors: no exact solution available");
    if (nodal_u.size() != static_cast<std::size_t>(mesh.vertex_count()))
        throw ParameterError("nodal_errors: expected one value per mesh node");
    NodalErrors err;
    double sq = 0.0;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (mesh.boundary[v]) continue;
        const double e = nodal_u[v] - exact(mesh.vertices[v]);
        err.linf = std::max(err.linf, std::abs(e));
        sq += e * e;
    }
    err.l2 = detail::l2_mesh_size(mesh) * std::sqrt(sq);
    return err;
}

inline NodalErrors nodal_errors(const Mesh& mesh, const SolveResult& result, const ScalarField& exact) {
    return nodal_errors(mesh, std::span<const double>(result.u), exact);
}

struct ConvergenceRow {
    int n = 0;
    int dof = 0;
    double l2 = 0.0;
    double l2_order = std::numeric_limits<double>::quiet_NaN();
    double linf = 0.0;
    double linf_order = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    std::string problem;
    LambdaPolicy policy = LambdaPolicy::upper;
    std::string c_note;

    std::string to_csv() const {
        std::ostringstream out;
        out << "# problem = " << problem << "\n";
        out << "# lambda_policy = " << to_string(policy) << "\n";
        if (!c_note.empty()) out << "# c = " << c_note << "\n";
        out << "n,dof,l2,l2_order,linf,linf_order\n";
        for (const auto& r : rows) {
            out << r.n << ',' << r.dof << ',' << format_sig6(r.l2) << ','
                << (std::isnan(r.l2_order) ? std::string("-") : format_sig6(r.l2_order)) << ','
                << format_sig6(r.linf) << ','
                << (std::isnan(r.linf_order) ? std::string("-") : format_sig6(r.linf_order)) << "\n";
        }
        return out.str();
    }
};

struct StudyOptions {
    LambdaPolicy policy = LambdaPolicy::upper;
    double solver_tol = 1e-12;
    bool certify = true;
    std::string c_note;
};

/// Assembles, certifies, solves and measures errors over a series of uniform
/// n x n meshes. Orders are log2 ratios between successive doubling levels.
inline ConvergenceTable convergence_study(const ProblemSpec& problem, const std::vector<int>& levels,
                                          StudyOptions opts = {}) {
    if (levels.empty()) throw ParameterError("convergence_study: no levels given");
    if (!problem.has_exact()) throw ParameterError("convergence_study: problem has no exact solution");

    ConvergenceTable table;
    table.problem = problem.name;
    table.policy = opts.policy;
    table.c_note = opts.c_note;

    for (std::size_t k = 0; k < levels.size(); ++k) {
        const int n = levels[k];
        const Mesh mesh = uniform_mesh(n, n, problem.domain);
        const AssembledSystem sys = assemble(mesh, problem, {opts.policy, {}});
        if (opts.certify) {
            const MmatrixReport rep = check_m_matrix(sys.A);
            if (!rep.certified)
                throw CertificationError("convergence_study: level n = " + std::to_string(n) +
                                         " failed M-matrix certification\n" + rep.to_text());
        }
        const SolveResult sol = solve_system(sys, SolveMethod::cg, {opts.solver_tol, 0});
        const NodalErrors err = nodal_errors(mesh, sol, problem.u_exact);

        ConvergenceRow row;
        row.n = n;
        row.dof = sys.dimension();
        row.l2 = err.l2;
        row.linf = err.linf;
        if (k > 0 && levels[k] == 2 * levels[k - 1]) {
            const auto& prev = table.rows.back();
            if (prev.l2 > 0.0 && err.l2 > 0.0) row.l2_order = std::log2(prev.l2 / err.l2);
            if (prev.linf > 0.0 && err.linf > 0.0) row.linf_order = std::log2(prev.linf / err.linf);
        }
        table.rows.push_back(row);
    }
    return table;
}

struct ElementCondition {
    /// The four edge-vector quadratic forms; the element is admissible iff all
    /// are positive (non-negative in boundary-tolerant mode).
    std::array<double, 4> forms{};
    Sym2 atilde;
    /// min(atilde11, atilde22) - |atilde12|; the equivalent coefficient test.
    double margin = 0.0;
    bool pass = false;
};

struct MeshConditionReport {
    std::vector<ElementCondition> elements;
    bool pass = false;
    int first_failing = -1;
    int failing_count = 0;
    bool strict = false;
    /// Aspect ratio h1/h2 that would satisfy the rectangle condition for the
    /// coefficient at the worst element.
    double recommended_aspect = std::numeric_limits<double>::quiet_NaN();

    std::string to_text() const {
        std::ostringstream out;
        out << "Mesh condition check (" << elements.size() << " elements, "
            << (strict ? "strict" : "boundary-tolerant") << ")\n"
            << "  failing elements: " << failing_count << "\n";
        if (first_failing >= 0) {
            const auto& el = elements[first_failing];
            out << "  first failing:    element " << first_failing << ", forms ("
                << format_sig6(el.forms[0]) << ", " << format_sig6(el.forms[1]) << ", "
                << format_sig6(el.forms[2]) << ", " << format_sig6(el.forms[3]) << "), margin "
                << format_sig6(el.margin) << "\n";
        }
        if (!std::isnan(recommended_aspect))
            out << "  recommended aspect ratio h1/h2 = " << format_sig6(recommended_aspect) << "\n";
        out << "  verdict:          " << (pass ? "pass" : "FAIL") << "\n";
        return out.str();
    }
};

/// Aspect ratio h1/h2 = sqrt(a11/a22); with it the rectangle condition
/// |a12| <= min((h2/h1) a11, (h1/h2) a22) = sqrt(a11 a22) holds for SPD a.
inline double recommend_aspect_ratio(const Sym2& abar) {
    if (!abar.spd()) throw ParameterError("recommend_aspect_ratio: coefficient must be positive definite");
    return std::sqrt(abar.a11 / abar.a22);
}

/// Evaluates the four edge-vector inequalities per element, together with the
/// equivalent effective-coefficient test |atilde12| <= min(atilde11, atilde22).
inline MeshConditionReport mesh_condition_check(const Mesh& mesh, const ProblemSpec& problem, bool strict = false) {
    MeshConditionReport rep;
    rep.strict = strict;
    rep.pass = true;
    rep.elements.reserve(mesh.elements.size());

    double worst_margin = std::numeric_limits<double>::infinity();
    Sym2 worst_abar{1.0, 0.0, 1.0};

    for (int e = 0; e < mesh.element_count(); ++e) {
        const ElementGeometry geom = element_geometry(mesh, e);
        const CoefficientSample sample = sample_center(problem, geom, e);
        const Sym2 ainv = sample.abar.inverse();

        const Vec2 p = geom.edges[0] + geom.edges[2];  // c0 + c2
        const Vec2 q = geom.edges[1] + geom.edges[3];  // c1 + c3
        const Vec2 d = geom.edges[0] + geom.edges[3];  // c0 + c3
        const Vec2 s = geom.edges[0] - geom.edges[1];  // c0 - c1

        ElementCondition cond;
        cond.forms = {quad_form(ainv, p, d), quad_form(ainv, p, s), quad_form(ainv, q, d),
                      quad_form(ainv, q, -1.0 * s)};
        cond.atilde = effective_coefficient(geom, sample).atilde;
        cond.margin = std::min(cond.atilde.a11, cond.atilde.a22) - std::abs(cond.atilde.a12);

        const double tol = strict ? 0.0 : 1e-12 * (quad_form(ainv, p, p) + quad_form(ainv, q, q));
        cond.pass = true;
        for (double v : cond.forms)
            if (strict ? !(v > 0.0) : !(v >= -tol)) cond.pass = false;

        if (!cond.pass) {
            rep.pass = false;
            ++rep.failing_count;
            if (rep.first_failing < 0) rep.first_failing = e;
        }
        if (cond.margin < worst_margin) {
            worst_margin = cond.margin;
            worst_abar = sample.abar;
        }
        rep.elements.push_back(cond);
    }

    if (!rep.elements.empty()) rep.recommended_aspect = recommend_aspect_ratio(worst_abar);
    return rep;
}

}  // namespace monofem
