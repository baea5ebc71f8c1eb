#pragma once

// Per-element quadrature-parameter admissibility and selection. The stiffness
// matrix is an M-matrix when every element draws its parameters from
//   ( |a11-a22|/(a11+a22) , 1 - 2|a12|/(a11+a22) ]
// evaluated on the effective coefficient; at |a12| = min(a11,a22) the
// interval collapses and the upper bound is the only choice.

#include <algorithm>
#include <cmath>
#include <string>

#include "monofem/errors.hpp"
#include "monofem/problem.hpp"
#include "monofem/reference.hpp"
#include "monofem/types.hpp"

namespace monofem {

enum class Admissibility { strict, boundary, inadmissible };

enum class LambdaPolicy { upper, midpoint };

inline const char* to_string(LambdaPolicy p) { return p == LambdaPolicy::upper ? "upper" : "midpoint"; }

struct QuadParams {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double interval_low = 0.0;
    double interval_high = 1.0;
    bool forced = false;  // equality boundary case: the interval is a point
};

/// Scale-invariant tolerance for the |a12| = min(a11,a22) equality test.
inline double equality_tol(const Sym2& atilde) { return 1e-12 * (atilde.a11 + atilde.a22); }

inline Admissibility admissible(const Sym2& atilde) {
    const double lo = std::min(atilde.a11, atilde.a22);
    const double off = std::abs(atilde.a12);
    const double tol = equality_tol(atilde);
    if (off < lo - tol) return Admissibility::strict;
    if (off <= lo + tol) return Admissibility::boundary;
    return Admissibility::inadmissible;
}

inline Admissibility admissible(const EffectiveCoefficient& a) { return admissible(a.atilde); }

inline QuadParams select_lambda(const Sym2& atilde, LambdaPolicy policy = LambdaPolicy::upper, int element = -1) {
    const Admissibility adm = admissible(atilde);
    if (adm == Admissibility::inadmissible)
        throw AdmissibilityError(detail::element_label(element) + ": |atilde12| = " +
                                 format_exact(std::abs(atilde.a12)) + " exceeds min(atilde11, atilde22) = " +
                                 format_exact(std::min(atilde.a11, atilde.a22)) +
                                 "; no quadrature parameter yields an M-matrix");

    QuadParams p;
    const double tr = atilde.a11 + atilde.a22;
    p.interval_low = std::abs(atilde.a11 - atilde.a22) / tr;
    p.interval_high = 1.0 - 2.0 * std::abs(atilde.a12) / tr;
    p.forced = (adm == Admissibility::boundary);

    double lambda;
    if (p.forced || policy == LambdaPolicy::upper) {
        lambda = p.interval_high;
    } else {
        lambda = 0.5 * (p.interval_low + p.interval_high);
        if (!(lambda > p.interval_low)) lambda = p.interval_high;
    }
    // interval_high = 0 would need a11 = a22 = |a12|, impossible for SPD atilde
    if (!(lambda > 0.0))
        throw AdmissibilityError(detail::element_label(element) +
                                 ": selected lambda = " + format_exact(lambda) +
                                 " <= 0 breaks ellipticity (degenerate coefficient)");
    p.lambda1 = lambda;
    p.lambda2 = lambda;
    return p;
}

inline QuadParams select_lambda(const EffectiveCoefficient& a, LambdaPolicy policy = LambdaPolicy::upper,
                                int element = -1) {
    return select_lambda(a.atilde, policy, element);
}

inline LocalMatrix local_stiffness(const Sym2& abar, const QuadParams& params) {
    return local_stiffness(abar, params.lambda1, params.lambda2);
}

}  // namespace monofem
