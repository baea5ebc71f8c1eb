#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <monofem/problem.hpp>

#include "test_support.hpp"

using namespace monofem;

namespace {
constexpr double pi = std::numbers::pi;

ElementGeometry square_geometry_at(Vec2 center, double h = 0.1) {
    const Vec2 o{center.x - h / 2, center.y - h / 2};
    const Mesh m = testsupport::single_element_mesh(
        {o, o + Vec2{0, h}, o + Vec2{h, h}, o + Vec2{h, 0}});
    return element_geometry(m, 0);
}
}  // namespace

TEST_CASE("sample_center evaluates at the element center") {
    SUBCASE("identity field") {
        ProblemSpec p = poisson_sine_problem();
        const CoefficientSample s = sample_center(p, square_geometry_at({0.3, 0.4}));
        CHECK(s.abar.a11 == 1.0);
        CHECK(s.abar.a12 == 0.0);
        CHECK(s.abar.a22 == 1.0);
    }
    SUBCASE("paper-sec6 field at (pi/2, pi/2)") {
        ProblemSpec p = paper_sec6_problem();
        const CoefficientSample s = sample_center(p, square_geometry_at({pi / 2, pi / 2}));
        const double expected = 1.0 + 2.5 * pi * pi + (pi / 2) * std::cos(pi / 2) + pi / 2;
        CHECK(s.abar.a11 == doctest::Approx(expected).epsilon(1e-14));
        CHECK(s.abar.a12 == s.abar.a11);
        CHECK(s.abar.a22 == doctest::Approx(expected + 1.0).epsilon(1e-14));
    }
    SUBCASE("indefinite field is rejected with the element id") {
        ProblemSpec p = poisson_sine_problem();
        p.a = [](Vec2) { return Sym2{1.0, 2.0, 1.0}; };
        CHECK_THROWS_WITH_AS(sample_center(p, square_geometry_at({0.5, 0.5}), 3),
                             doctest::Contains("element 3"), CoefficientError);
    }
}

TEST_CASE("effective coefficient on canonical elements") {
    SUBCASE("unit square leaves the tensor unchanged") {
        const Sym2 a{2.0, 0.5, 3.0};
        const ElementGeometry g = element_geometry(
            testsupport::single_element_mesh({Vec2{0, 0}, Vec2{0, 1}, Vec2{1, 1}, Vec2{1, 0}}), 0);
        const Sym2 t = effective_coefficient(g, {a}).atilde;
        CHECK(t.a11 == doctest::Approx(a.a11).epsilon(1e-15));
        CHECK(t.a12 == doctest::Approx(a.a12).epsilon(1e-15));
        CHECK(t.a22 == doctest::Approx(a.a22).epsilon(1e-15));
    }
    SUBCASE("rectangle rescales the diagonal and keeps a12") {
        const double h1 = 0.5, h2 = 0.125;
        const Sym2 a{2.0, 0.7, 3.0};
        const ElementGeometry g = element_geometry(
            testsupport::single_element_mesh({Vec2{0, 0}, Vec2{0, h2}, Vec2{h1, h2}, Vec2{h1, 0}}), 0);
        const Sym2 t = effective_coefficient(g, {a}).atilde;
        CHECK(t.a11 == doctest::Approx((h2 / h1) * a.a11).epsilon(1e-15));
        CHECK(t.a12 == doctest::Approx(a.a12).epsilon(1e-15));
        CHECK(t.a22 == doctest::Approx((h1 / h2) * a.a22).epsilon(1e-15));
    }
    SUBCASE("sheared parallelogram with the identity tensor") {
        const double s = 0.4;
        const ElementGeometry g = element_geometry(
            testsupport::single_element_mesh({Vec2{0, 0}, Vec2{s, 1}, Vec2{1 + s, 1}, Vec2{1, 0}}), 0);
        const Sym2 t = effective_coefficient(g, {Sym2{1.0, 0.0, 1.0}}).atilde;
        CHECK(t.a11 == doctest::Approx(1.0 + s * s).epsilon(1e-14));
        CHECK(t.a12 == doctest::Approx(-s).epsilon(1e-14));
        CHECK(t.a22 == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("effective coefficient matches the edge-vector quadratic forms") {
    std::mt19937_64 gen(31);
    for (int t = 0; t < 200; ++t) {
        const Mesh m = testsupport::single_element_mesh(testsupport::random_convex_quad(gen));
        const ElementGeometry g = element_geometry(m, 0);
        const Sym2 a = testsupport::random_spd(gen, false);
        const Sym2 tilde = effective_coefficient(g, {a}).atilde;

        const Sym2 ainv = a.inverse();
        const Vec2 p = g.edges[0] + g.edges[2];
        const Vec2 q = g.edges[1] + g.edges[3];
        // quadratic forms in the inverse tensor with constant det(a) / (4 J)
        const double factor = a.det() / (4.0 * g.jac_det);
        const double t11 = factor * quad_form(ainv, p, p);
        const double t12 = -factor * quad_form(ainv, p, q);
        const double t22 = factor * quad_form(ainv, q, q);

        CHECK(tilde.a11 == doctest::Approx(t11).epsilon(1e-12));
        CHECK(tilde.a12 == doctest::Approx(t12).epsilon(1e-12));
        CHECK(tilde.a22 == doctest::Approx(t22).epsilon(1e-12));
        CHECK(tilde.spd());
    }
}

TEST_CASE("paper-sec6 problem") {
    const ProblemSpec p = paper_sec6_problem();

    SUBCASE("exact solution values") {
        CHECK(p.u_exact(Vec2{pi / 2, pi / 4}) == doctest::Approx(-0.5).epsilon(1e-14));
        for (double t : {0.0, 0.3, 1.1, pi}) {
            CHECK(std::abs(p.u_exact(Vec2{0.0, t})) <= 1e-15);
            CHECK(std::abs(p.u_exact(Vec2{pi, t})) <= 1e-14);
            CHECK(std::abs(p.u_exact(Vec2{t, 0.0})) <= 1e-15);
            CHECK(std::abs(p.u_exact(Vec2{t, pi})) <= 1e-14);
        }
    }
    SUBCASE("a12 equals a11 exactly and a22 = a11 + 1") {
        for (double x : {0.1, 1.0, 2.5})
            for (double y : {0.2, 1.4, 3.0}) {
                const Sym2 a = p.a(Vec2{x, y});
                CHECK(a.a12 == a.a11);
                CHECK(a.a22 == a.a11 + 1.0);
                CHECK(a.spd());
            }
    }
    SUBCASE("load matches finite differences of the flux at second order") {
        const ProblemSpec pc = paper_sec6_problem(1.0);
        double worst_coarse = 0.0, worst_fine = 0.0;
        for (double x = 0.4; x < pi; x += 0.57)
            for (double y = 0.3; y < pi; y += 0.49) {
                const double exact = pc.f(Vec2{x, y});
                worst_coarse = std::max(worst_coarse, std::abs(testsupport::fd_operator(pc, {x, y}, 2e-3) - exact));
                worst_fine = std::max(worst_fine, std::abs(testsupport::fd_operator(pc, {x, y}, 1e-3) - exact));
            }
        CHECK(worst_coarse <= 1e-2);
        // halving the step cuts the defect ~4x; roundoff keeps it from exact 4
        CHECK(worst_fine <= worst_coarse / 2.5);
    }
    SUBCASE("c folds into the load") {
        const ProblemSpec p0 = paper_sec6_problem(0.0);
        const ProblemSpec p2 = paper_sec6_problem(2.0);
        const Vec2 x{1.0, 2.0};
        CHECK(p2.f(x) - p0.f(x) == doctest::Approx(2.0 * p0.u_exact(x)).epsilon(1e-13));
        CHECK(p2.c(x) == 2.0);
    }
}

TEST_CASE("poisson-sine problem") {
    const ProblemSpec p = poisson_sine_problem();
    CHECK(p.f(Vec2{0.5, 0.5}) == doctest::Approx(2.0 * pi * pi).epsilon(1e-14));
    CHECK(p.u_exact(Vec2{0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.c(Vec2{0.1, 0.9}) == 0.0);
}

TEST_CASE("constant anisotropic problem") {
    const ProblemSpec p = constant_anisotropic_problem(pi / 6, 10.0);
    const Sym2 a = p.a(Vec2{0.5, 0.5});
    CHECK(a.spd());
    CHECK(a.a11 == doctest::Approx(1.0 + 9.0 * 0.75).epsilon(1e-14));
    CHECK(a.a22 == doctest::Approx(1.0 + 9.0 * 0.25).epsilon(1e-14));
    CHECK(a.a12 == doctest::Approx(9.0 * std::sqrt(3.0) / 4.0).epsilon(1e-14));

    double worst = 0.0;
    for (double x = 0.21; x < 1.0; x += 0.26)
        for (double y = 0.17; y < 1.0; y += 0.31)
            worst = std::max(worst, std::abs(testsupport::fd_operator(p, {x, y}, 1e-3) - p.f(Vec2{x, y})));
    CHECK(worst <= 1e-3);
}

TEST_CASE("constant tensor problem with explicit matrix") {
    const Sym2 a{4.0, 1.9, 1.0};
    const ProblemSpec p = constant_tensor_problem(a, {0.0, 2.0, 0.0, 1.0});
    CHECK(p.u_exact(Vec2{1.0, 0.5}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(p.u_exact(Vec2{0.0, 0.3})) <= 1e-15);
    CHECK(std::abs(p.u_exact(Vec2{2.0, 0.3})) <= 1e-14);
    double worst = 0.0;
    for (double x = 0.3; x < 2.0; x += 0.37)
        for (double y = 0.11; y < 1.0; y += 0.23)
            worst = std::max(worst, std::abs(testsupport::fd_operator(p, {x, y}, 1e-3) - p.f(Vec2{x, y})));
    CHECK(worst <= 1e-3);
    CHECK_THROWS_AS(constant_tensor_problem(Sym2{1.0, 2.0, 1.0}), ParameterError);
}

TEST_CASE("builtin problem lookup") {
    CHECK(builtin_problem("paper-sec6").name == "paper-sec6");
    CHECK(builtin_problem("poisson-sine").name == "poisson-sine");
    CHECK(builtin_problem("constant-anisotropic").name == "constant-anisotropic");
    const ProblemSpec p = builtin_problem("constant-anisotropic(0.1,5)");
    CHECK(p.a(Vec2{0, 0}).a11 == doctest::Approx(5.0 * std::cos(0.1) * std::cos(0.1) +
                                                 std::sin(0.1) * std::sin(0.1)).epsilon(1e-14));
    CHECK_THROWS_AS(builtin_problem("no-such"), ParameterError);
    CHECK_THROWS_AS(builtin_problem("constant-anisotropic(1)"), ParameterError);
    CHECK_THROWS_AS(builtin_problem("poisson-sine", 2.0), ParameterError);
    CHECK(builtin_problem("paper-sec6", 0.5).c(Vec2{1, 1}) == 0.5);
}
