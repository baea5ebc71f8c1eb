#pragma once

// Problem definition: coefficient fields, manufactured solutions, element
// center sampling, and the effective coefficient on general quadrilaterals.

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "monofem/errors.hpp"
#include "monofem/mesh.hpp"
#include "monofem/types.hpp"

namespace monofem {

using ScalarField = std::function<double(Vec2)>;
using MatrixField = std::function<Sym2(Vec2)>;

struct ProblemSpec {
    std::string name;
    Rect domain;
    MatrixField a;        // diffusion tensor, symmetric positive definite
    ScalarField c;        // reaction coefficient, >= 0
    ScalarField f;        // load
    ScalarField g;        // Dirichlet data on the boundary
    ScalarField u_exact;  // empty when no exact solution is known

    bool has_exact() const { return static_cast<bool>(u_exact); }
};

struct CoefficientSample {
    Sym2 abar;
};

struct EffectiveCoefficient {
    Sym2 atilde;
};

namespace detail {
inline std::string element_label(int e) {
    return e < 0 ? std::string("element") : "element " + std::to_string(e);
}
}  // namespace detail

/// Diffusion tensor at the element center; the per-element constant the
/// scheme assembles with.
inline CoefficientSample sample_center(const ProblemSpec& problem, const ElementGeometry& geom, int element = -1) {
    const Sym2 a = problem.a(geom.center);
    if (!a.spd())
        throw CoefficientError(detail::element_label(element) + ": coefficient not positive definite at center (" +
                               format_exact(geom.center.x) + ", " + format_exact(geom.center.y) +
                               "): a11 = " + format_exact(a.a11) + ", det = " + format_exact(a.det()));
    return {a};
}

/// atilde = det(DF) * DF^-1 * abar * DF^-T, the pullback of the diffusion
/// tensor through the element's center Jacobian. Symmetric by construction.
inline EffectiveCoefficient effective_coefficient(const ElementGeometry& geom, const CoefficientSample& sample) {
    if (!(geom.jac_det > 0.0))
        throw GeometryError("effective_coefficient: singular mapping, det(DF) = " + format_exact(geom.jac_det));
    const Mat2 inv = geom.jacobian.inverse();
    const Vec2 r0 = inv.row(0);
    const Vec2 r1 = inv.row(1);
    Sym2 atilde;
    atilde.a11 = geom.jac_det * quad_form(sample.abar, r0, r0);
    atilde.a12 = geom.jac_det * quad_form(sample.abar, r0, r1);
    atilde.a22 = geom.jac_det * quad_form(sample.abar, r1, r1);
    return {atilde};
}

// ---------------------------------------------------------------------------
// Built-in problems
// ---------------------------------------------------------------------------

namespace builtin {

// The "paper-sec6" test case: on [0,pi]^2,
//   a11 = a12 = a21 = 1 + 10 x2^2 + x1 cos(x2) + x2,  a22 = a11 + 1,
//   u = -sin(x1)^2 sin(x2) cos(x2),
// so |a12| = min(a11, a22) everywhere: the admissibility boundary case.

inline double sec6_p(Vec2 x) { return 1.0 + 10.0 * x.y * x.y + x.x * std::cos(x.y) + x.y; }

inline double sec6_u(Vec2 x) {
    const double sx = std::sin(x.x);
    return -sx * sx * std::sin(x.y) * std::cos(x.y);
}

/// -div(a grad u) for the fields above, written out from the product rule:
/// with q = a grad u, div q = (p_x1 + p_x2)(u_x1 + u_x2)
///                          + p (u_x1x1 + 2 u_x1x2 + u_x2x2) + u_x2x2.
inline double sec6_diffusion_load(Vec2 x) {
    const double s2x = std::sin(2.0 * x.x);
    const double c2x = std::cos(2.0 * x.x);
    const double s2y = std::sin(2.0 * x.y);
    const double c2y = std::cos(2.0 * x.y);
    const double sx = std::sin(x.x);

    const double p = sec6_p(x);
    const double px1 = std::cos(x.y);
    const double px2 = 20.0 * x.y - x.x * std::sin(x.y) + 1.0;

    const double ux1 = -0.5 * s2x * s2y;
    const double ux2 = -sx * sx * c2y;
    const double ux1x1 = -c2x * s2y;
    const double ux1x2 = -s2x * c2y;
    const double ux2x2 = 2.0 * sx * sx * s2y;

    return -((px1 + px2) * (ux1 + ux2) + p * (ux1x1 + 2.0 * ux1x2 + ux2x2) + ux2x2);
}

}  // namespace builtin

/// The anisotropic variable-coefficient benchmark; the reaction coefficient
/// is a free constant (default 1) and folds into the manufactured load.
inline ProblemSpec paper_sec6_problem(double c_value = 1.0) {
    if (c_value < 0.0) throw ParameterError("paper_sec6_problem: c must be >= 0");
    constexpr double pi = std::numbers::pi;
    ProblemSpec s;
    s.name = "paper-sec6";
    s.domain = {0.0, pi, 0.0, pi};
    s.a = [](Vec2 x) {
        const double p = builtin::sec6_p(x);
        return Sym2{p, p, p + 1.0};
    };
    s.c = [c_value](Vec2) { return c_value; };
    s.u_exact = builtin::sec6_u;
    s.g = builtin::sec6_u;  // vanishes on the boundary of [0,pi]^2
    s.f = [c_value](Vec2 x) { return builtin::sec6_diffusion_load(x) + c_value * builtin::sec6_u(x); };
    return s;
}

/// Poisson with u = sin(pi x1) sin(pi x2) on the unit square.
inline ProblemSpec poisson_sine_problem() {
    constexpr double pi = std::numbers::pi;
    ProblemSpec s;
    s.name = "poisson-sine";
    s.domain = {0.0, 1.0, 0.0, 1.0};
    s.a = [](Vec2) { return Sym2{1.0, 0.0, 1.0}; };
    s.c = [](Vec2) { return 0.0; };
    s.u_exact = [](Vec2 x) { return std::sin(pi * x.x) * std::sin(pi * x.y); };
    s.g = s.u_exact;
    s.f = [](Vec2 x) { return 2.0 * pi * pi * std::sin(pi * x.x) * std::sin(pi * x.y); };
    return s;
}

/// Constant tensor with eigenvalues (ratio, 1) rotated by theta, with the
/// sine manufactured solution on the unit square.
inline ProblemSpec constant_anisotropic_problem(double theta = std::numbers::pi / 6.0, double ratio = 10.0) {
    if (!(ratio > 0.0)) throw ParameterError("constant_anisotropic_problem: ratio must be positive");
    constexpr double pi = std::numbers::pi;
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const Sym2 a{ratio * ct * ct + st * st, (ratio - 1.0) * st * ct, ratio * st * st + ct * ct};

    ProblemSpec s;
    s.name = "constant-anisotropic";
    s.domain = {0.0, 1.0, 0.0, 1.0};
    s.a = [a](Vec2) { return a; };
    s.c = [](Vec2) { return 0.0; };
    s.u_exact = [](Vec2 x) { return std::sin(pi * x.x) * std::sin(pi * x.y); };
    s.g = s.u_exact;
    s.f = [a](Vec2 x) {
        const double u = std::sin(pi * x.x) * std::sin(pi * x.y);
        const double uxy = pi * pi * std::cos(pi * x.x) * std::cos(pi * x.y);
        return pi * pi * (a.a11 + a.a22) * u - 2.0 * a.a12 * uxy;
    };
    return s;
}

/// Constant tensor with an explicit matrix and a manufactured sine solution
/// scaled to an arbitrary rectangle domain.
inline ProblemSpec constant_tensor_problem(const Sym2& a, Rect domain = {0.0, 1.0, 0.0, 1.0}) {
    if (!a.spd()) throw ParameterError("constant_tensor_problem: tensor must be positive definite");
    if (domain.degenerate()) throw ParameterError("constant_tensor_problem: degenerate domain");
    constexpr double pi = std::numbers::pi;
    const double k1 = pi / domain.width();
    const double k2 = pi / domain.height();
    const double ox = domain.x0;
    const double oy = domain.y0;

    ProblemSpec s;
    s.name = "constant-tensor";
    s.domain = domain;
    s.a = [a](Vec2) { return a; };
    s.c = [](Vec2) { return 0.0; };
    s.u_exact = [=](Vec2 x) { return std::sin(k1 * (x.x - ox)) * std::sin(k2 * (x.y - oy)); };
    s.g = s.u_exact;
    s.f = [=](Vec2 x) {
        const double u = std::sin(k1 * (x.x - ox)) * std::sin(k2 * (x.y - oy));
        const double uxy = k1 * k2 * std::cos(k1 * (x.x - ox)) * std::cos(k2 * (x.y - oy));
        return (a.a11 * k1 * k1 + a.a22 * k2 * k2) * u - 2.0 * a.a12 * uxy;
    };
    return s;
}

/// Resolve a builtin problem name. Accepts "paper-sec6", "poisson-sine",
/// "constant-anisotropic" and "constant-anisotropic(theta,ratio)".
inline ProblemSpec builtin_problem(const std::string& name, std::optional<double> c_override = {}) {
    const auto paren = name.find('(');
    const std::string base = paren == std::string::npos ? name : name.substr(0, paren);

    if (base == "paper-sec6") {
        if (paren != std::string::npos) throw ParameterError("builtin_problem: '" + base + "' takes no arguments");
        return paper_sec6_problem(c_override.value_or(1.0));
    }
    if (c_override)
        throw ParameterError("builtin_problem: c_override is only meaningful for paper-sec6");
    if (base == "poisson-sine") {
        if (paren != std::string::npos) throw ParameterError("builtin_problem: '" + base + "' takes no arguments");
        return poisson_sine_problem();
    }
    if (base == "constant-anisotropic") {
        if (paren == std::string::npos) return constant_anisotropic_problem();
        if (name.back() != ')') throw ParameterError("builtin_problem: missing ')' in '" + name + "'");
        const std::string args = name.substr(paren + 1, name.size() - paren - 2);
        const auto comma = args.find(',');
        if (comma == std::string::npos)
            throw ParameterError("builtin_problem: expected 'constant-anisotropic(theta,ratio)'");
        try {
            const double theta = std::stod(args.substr(0, comma));
            const double ratio = std::stod(args.substr(comma + 1));
            return constant_anisotropic_problem(theta, ratio);
        } catch (const std::logic_error&) {
            throw ParameterError("builtin_problem: malformed arguments in '" + name + "'");
        }
    }
    throw ParameterError("builtin_problem: unknown problem '" + name + "'");
}

}  // namespace monofem
