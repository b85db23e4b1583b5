#include "ncalc/numeric.hpp"
#include "ncalc/expr_parse.hpp"

#include <doctest.h>

#include "helpers.hpp"

#include <cmath>

using namespace ncalc;

namespace {

using E = Element<double>;

AlgebraPtr<double> quatd() { return builtin_algebra<double>("quaternions"); }
AlgebraPtr<double> cplxd() { return builtin_algebra<double>("complex"); }

} // namespace

TEST_CASE("finite-difference differential") {
    SUBCASE("x^2 along j at i gives ji + ij = 0") {
        auto H = quatd();
        auto f = numeric_map(parse_expr(H, "x*x"));
        FdResult r = fd_differential(f, E::basis(H, 1), E::basis(H, 2));
        CHECK(r.converged);
        CHECK(r.value.norm() < 1e-9);
    }
    SUBCASE("constants have zero differential") {
        auto H = quatd();
        auto f = numeric_map(parse_expr(H, "j"));
        FdResult r = fd_differential(f, E::basis(H, 1), E::basis(H, 3));
        CHECK(r.value.norm() == 0.0);
    }
    SUBCASE("inverse map at 1+i along 1") {
        auto C = cplxd();
        auto f = numeric_map(parse_expr(C, "inv(x)"));
        E x(C, {1.0, 1.0});
        FdResult r = fd_differential(f, x, E::basis(C, 0));
        // -(1+i)^-2 = i/2
        CHECK(r.value[0] == doctest::Approx(0.0).epsilon(1e-8));
        CHECK(r.value[1] == doctest::Approx(0.5));
    }
}

TEST_CASE("jacobian matrices") {
    auto C = cplxd();
    SUBCASE("x^2 over the complex numbers") {
        auto f = numeric_map(parse_expr(C, "x*x"));
        double a = 0.7, b = -0.4;
        auto m = jacobian(f, E(C, {a, b}));
        CHECK(m[0][0] == doctest::Approx(2 * a).epsilon(1e-7));
        CHECK(m[0][1] == doctest::Approx(-2 * b).epsilon(1e-7));
        CHECK(m[1][0] == doctest::Approx(2 * b).epsilon(1e-7));
        CHECK(m[1][1] == doctest::Approx(2 * a).epsilon(1e-7));
    }
    SUBCASE("identity map") {
        auto f = numeric_map(parse_expr(C, "x"));
        auto m = jacobian(f, E(C, {0.3, 0.9}));
        CHECK(m[0][0] == doctest::Approx(1.0));
        CHECK(m[0][1] == doctest::Approx(0.0));
        CHECK(m[1][0] == doctest::Approx(0.0));
        CHECK(m[1][1] == doctest::Approx(1.0));
    }
    SUBCASE("conjugation is diag(1,-1)") {
        NumericMap conj = [&](const E& z) { return E(C, {z[0], -z[1]}); };
        auto m = jacobian(conj, E(C, {0.2, 0.4}));
        CHECK(m[0][0] == doctest::Approx(1.0));
        CHECK(m[1][1] == doctest::Approx(-1.0));
        CHECK(std::fabs(m[0][1]) + std::fabs(m[1][0]) < 1e-9);
    }
    SUBCASE("jacobian applied to coords matches the directional differential") {
        auto H = quatd();
        auto f = numeric_map(parse_expr(H, "x*i*x + j*x"));
        DirectionSampler rng(99);
        E x = rng.unit_vector(H);
        auto m = jacobian(f, x);
        for (int s = 0; s < 4; ++s) {
            E h = rng.unit_vector(H);
            FdResult direct = fd_differential(f, x, h);
            std::vector<double> via(4, 0.0);
            for (int k = 0; k < 4; ++k)
                for (int j = 0; j < 4; ++j) via[k] += m[k][j] * h[j];
            for (int k = 0; k < 4; ++k) CHECK(via[k] == doctest::Approx(direct.value[k]).epsilon(1e-5));
        }
    }
}

TEST_CASE("derivative cross-check reports") {
    auto H = quatd();
    SUBCASE("x^2 passes over 100 seeded samples") {
        auto r = check_derivative(H, parse_expr(H, "x*x"), 100, 42);
        CHECK(r.pass);
        CHECK(r.max_error < 1e-6);
        CHECK(r.errors.size() == 100);
        CHECK(r.seed == 42);
    }
    SUBCASE("constants are exact") {
        auto r = check_derivative(H, parse_expr(H, "j"), 10, 1);
        CHECK(r.pass);
        CHECK(r.max_error == 0.0);
    }
    SUBCASE("a fifth-degree word passes") {
        auto r = check_derivative(H, parse_expr(H, "x*i*x*j*x"), 100, 7);
        CHECK(r.pass);
    }
    SUBCASE("inverse maps pass with resampling") {
        auto r = check_derivative(H, parse_expr(H, "inv(x)"), 50, 11);
        CHECK(r.pass);
    }
    SUBCASE("reports are reproducible from the seed") {
        auto a = check_derivative(H, parse_expr(H, "x*x*x"), 20, 5);
        auto b = check_derivative(H, parse_expr(H, "x*x*x"), 20, 5);
        CHECK(a.errors == b.errors);
    }
}

TEST_CASE("sum and product rules hold numerically") {
    auto H = quatd();
    auto f = parse_expr(H, "x*i*x");
    auto g = parse_expr(H, "j*x*x + x");
    auto nf = numeric_map(f);
    auto ng = numeric_map(g);
    DirectionSampler rng(3);
    for (int s = 0; s < 4; ++s) {
        E x = rng.unit_vector(H);
        E h = rng.unit_vector(H);
        E dsum = fd_differential([&](const E& v) { return nf(v) + ng(v); }, x, h).value;
        E df = fd_differential(nf, x, h).value;
        E dg = fd_differential(ng, x, h).value;
        CHECK((dsum - (df + dg)).norm() < 1e-7);

        E dprod = fd_differential([&](const E& v) { return nf(v) * ng(v); }, x, h).value;
        E leibniz = df * ng(x) + nf(x) * dg;
        CHECK((dprod - leibniz).norm() < 1e-6);
    }
}

TEST_CASE("central differences converge at second order") {
    auto H = quatd();
    auto p = parse_expr(H, "x*i*x*x");
    auto f = numeric_map(p);
    DirectionSampler rng(17);
    E x = rng.unit_vector(H);
    E h = rng.unit_vector(H);
    // Exact reference from the symbolic form.
    auto Hq = builtin_algebra<Rational>("quaternions");
    auto sym = derivative(H, p, 1);
    E exact = eval_form(sym, x, {h});
    double e1 = (central_difference(f, x, h, 1e-2) - exact).norm();
    double e2 = (central_difference(f, x, h, 1e-3) - exact).norm();
    double observed_order = std::log10(e1 / e2);
    CHECK(observed_order >= 1.9);
}
