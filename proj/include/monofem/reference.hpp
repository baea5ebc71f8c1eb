#pragma once

// Reference-element kernel: the Q1 Lagrangian basis on [0,1]^2 and the mixed
// trapezoid/midpoint quadrature family.

#include <array>
#include <cmath>

#include "monofem/errors.hpp"
#include "monofem/types.hpp"

namespace monofem {

/// One-dimensional rule on [0,1]: lambda * trapezoid + (1 - lambda) * midpoint.
/// Nodes are fixed at (0, 1/2, 1) with weights (lambda/2, 1-lambda, lambda/2).
/// Exact on polynomials of degree <= 1 for every lambda.
struct QuadRule1D {
    double lambda = 1.0;
    std::array<double, 3> nodes{0.0, 0.5, 1.0};
    std::array<double, 3> weights{0.5, 0.0, 0.5};

    template <class F>
    double integrate(F&& f) const {
        return weights[0] * f(nodes[0]) + weights[1] * f(nodes[1]) + weights[2] * f(nodes[2]);
    }
};

inline QuadRule1D mixed_rule_1d(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw ParameterError("mixed_rule_1d: lambda = " + format_exact(lambda) + " outside [0,1]");
    QuadRule1D rule;
    rule.lambda = lambda;
    rule.weights = {0.5 * lambda, 1.0 - lambda, 0.5 * lambda};
    return rule;
}

/// Tensor product of two 1D mixed rules; point index is p-major, so
/// points[3*p + q] = (node1[p], node2[q]) and weights[3*p + q] = w1[p] * w2[q].
struct QuadRule2D {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    std::array<Vec2, 9> points{};
    std::array<double, 9> weights{};

    template <class F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (int k = 0; k < 9; ++k) acc += weights[k] * f(points[k]);
        return acc;
    }
};

inline QuadRule2D tensor_rule(double lambda1, double lambda2) {
    const QuadRule1D r1 = mixed_rule_1d(lambda1);
    const QuadRule1D r2 = mixed_rule_1d(lambda2);
    QuadRule2D rule;
    rule.lambda1 = lambda1;
    rule.lambda2 = lambda2;
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) {
            rule.points[3 * p + q] = {r1.nodes[p], r2.nodes[q]};
            rule.weights[3 * p + q] = r1.weights[p] * r2.weights[q];
        }
    return rule;
}

// Q1 nodal basis on the reference square. The corner order
//   0:(0,0)  1:(0,1)  2:(1,1)  3:(1,0)
// is the ABI of every 4x4 local matrix and of mesh element connectivity.
namespace basis {

inline constexpr int count = 4;

inline constexpr std::array<Vec2, 4> corners{{{0.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {1.0, 0.0}}};

inline double value(int k, Vec2 p) {
    switch (k) {
        case 0: return (1.0 - p.x) * (1.0 - p.y);
        case 1: return (1.0 - p.x) * p.y;
        case 2: return p.x * p.y;
        case 3: return p.x * (1.0 - p.y);
        default: throw ParameterError("basis::value: index out of range");
    }
}

inline Vec2 gradient(int k, Vec2 p) {
    switch (k) {
        case 0: return {-(1.0 - p.y), -(1.0 - p.x)};
        case 1: return {-p.y, 1.0 - p.x};
        case 2: return {p.y, p.x};
        case 3: return {1.0 - p.y, -p.x};
        default: throw ParameterError("basis::gradient: index out of range");
    }
}

}  // namespace basis

using LocalMatrix = std::array<std::array<double, 4>, 4>;

/// <abar grad(phi_r), grad(phi_s)> under the mixed rule with parameters
/// (lambda1, lambda2), in the corner order above. Off-diagonal entries use the
/// closed forms of the mixed quadrature applied to the bilinear basis; diagonal
/// entries are negated off-diagonal row sums, so constants are in the kernel
/// exactly, not just to rounding.
inline LocalMatrix local_stiffness(const Sym2& abar, double lambda1, double lambda2) {
    const double edge = 0.25 * (lambda2 * abar.a11 + lambda1 * abar.a22);
    const double skew = 0.25 * (abar.a11 - abar.a22);
    const double diag = 0.25 * ((1.0 - lambda2) * abar.a11 + (1.0 - lambda1) * abar.a22);

    LocalMatrix s{};
    s[0][1] = s[1][0] = s[2][3] = s[3][2] = -edge + skew;  // pairs along the x2 axis
    s[0][3] = s[3][0] = s[1][2] = s[2][1] = -edge - skew;  // pairs along the x1 axis
    s[0][2] = s[2][0] = -diag - 0.5 * abar.a12;            // main diagonal pair
    s[1][3] = s[3][1] = -diag + 0.5 * abar.a12;            // anti-diagonal pair
    for (int r = 0; r < 4; ++r) {
        double off = 0.0;
        for (int c = 0; c < 4; ++c)
            if (c != r) off += s[r][c];
        s[r][r] = -off;
    }
    return s;
}

}  // namespace monofem
