#include "ncalc/form.hpp"
#include "ncalc/expr_parse.hpp"

#include <doctest.h>

#include "helpers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

using namespace ncalc;
using test::cplx;
using test::quat;
using test::Q;

namespace {

using Form = MultilinearForm<Rational>;

FormWord<Rational> make_word(Rational pre, const std::vector<Q>& segs,
                             const std::vector<int>& slots) {
    FormWord<Rational> w;
    w.prefactor = std::move(pre);
    for (const auto& s : segs) w.segs.push_back(expr_const(s));
    for (int d : slots) w.slots.push_back(Slot{d});
    return w;
}

Form make_form(const AlgebraPtr<Rational>& alg, int order,
               std::vector<FormWord<Rational>> words) {
    Form f;
    f.alg = alg;
    f.order = order;
    f.words = std::move(words);
    return f;
}

} // namespace

TEST_CASE("derivative table") {
    auto H = quat();
    Q one = Q::unit(H);
    SUBCASE("d(x^2) = h x + x h") {
        Form got = derivative(H, parse_expr(H, "x*x"), 1);
        CHECK(got.words.size() == 2);
        Form expect = make_form(H, 1,
                                {make_word(Rational(1), {one, one, one}, {1, 0}),
                                 make_word(Rational(1), {one, one, one}, {0, 1})});
        CHECK(form_equal(got, expect));
        CHECK(form_to_string(got) == "h x + x h");
    }
    SUBCASE("d(b x c) = b h c") {
        Form got = derivative(H, parse_expr(H, "i*x*j"), 1);
        Form expect = make_form(H, 1, {make_word(Rational(1), {test::qe(1), test::qe(2)}, {1})});
        CHECK(form_equal(got, expect));
    }
    SUBCASE("constants differentiate to zero") {
        CHECK(derivative(H, parse_expr(H, "j"), 1).structurally_zero());
    }
    SUBCASE("d2(x^2) = h1 h2 + h2 h1") {
        Form got = derivative(H, parse_expr(H, "x*x"), 2);
        Form expect = make_form(H, 2,
                                {make_word(Rational(1), {one, one, one}, {1, 2}),
                                 make_word(Rational(1), {one, one, one}, {2, 1})});
        CHECK(form_equal(got, expect));
    }
    SUBCASE("d3(x^2) vanishes on every route") {
        CHECK(derivative(H, parse_expr(H, "x*x"), 3).structurally_zero());
        CHECK(derivative_recursive(H, parse_expr(H, "x*x"), 3).structurally_zero());
        Form once = derivative(H, parse_expr(H, "x*x"), 2);
        CHECK(form_partial(once, 3).structurally_zero());
    }
    SUBCASE("d(x^-1)(h) = -x^-1 h x^-1, checked at exact points") {
        auto C = cplx();
        Form got = derivative(C, parse_expr(C, "inv(x)"), 1);
        Q x(C, {Rational(0), Rational(2)}); // 2i
        Q h = Q::unit(C);
        Q expect = -(x.inverse() * h * x.inverse());
        CHECK(eval_form(got, x, {h}) == expect);
        CHECK(expect == Q(C, {Rational(1, 4), Rational(0)}));
        SampleRng rng(3);
        auto Hq = quat();
        Form gotH = derivative(Hq, parse_expr(Hq, "inv(x)"), 1);
        for (int s = 0; s < 8; ++s) {
            Q xs = test::random_element(Hq, rng);
            Q hs = test::random_element(Hq, rng);
            // x (d inv)(h) x = -h clears the inverses away.
            CHECK(xs * eval_form(gotH, xs, {hs}) * xs == -hs);
        }
    }
    SUBCASE("d(x a x^-1)(h) = h a x^-1 - x a x^-1 h x^-1") {
        auto p = parse_expr(H, "x*i*inv(x)");
        Form got = derivative(H, p, 1);
        CHECK(got.words.size() == 2);
        SampleRng rng(5);
        for (int s = 0; s < 8; ++s) {
            Q x = test::random_element(H, rng);
            Q h = test::random_element(H, rng);
            Q xi = x.inverse();
            Q a = test::qe(1);
            Q expect = h * a * xi - x * a * xi * h * xi;
            CHECK(eval_form(got, x, {h}) == expect);
        }
    }
    SUBCASE("second derivative of the inverse map") {
        auto p = parse_expr(H, "inv(x)");
        Form got = derivative(H, p, 2);
        SampleRng rng(7);
        for (int s = 0; s < 6; ++s) {
            Q x = test::random_element(H, rng);
            Q h1 = test::random_element(H, rng);
            Q h2 = test::random_element(H, rng);
            Q xi = x.inverse();
            Q expect = xi * h1 * xi * h2 * xi + xi * h2 * xi * h1 * xi;
            CHECK(eval_form(got, x, {h1, h2}) == expect);
        }
    }
}

TEST_CASE("the two polynomial derivative routes coincide") {
    auto H = quat();
    SUBCASE("x^3, all orders") {
        auto p = parse_expr(H, "x*x*x");
        for (int m = 1; m <= 3; ++m)
            CHECK(form_equal(derivative(H, p, m), derivative_recursive(H, p, m)));
        Form d3 = derivative(H, p, 3);
        CHECK(d3.words.size() == 6);
    }
    SUBCASE("a0 x a1 at order 1 equals the constant-sandwich rule") {
        auto p = parse_expr(H, "j*x*k");
        CHECK(form_equal(derivative(H, p, 1), derivative_recursive(H, p, 1)));
    }
    SUBCASE("random monomials up to degree 5") {
        SampleRng rng(11);
        for (int s = 0; s < 10; ++s) {
            int deg = 1 + static_cast<int>(rng.range(0, 4));
            auto p = test::random_monomial(H, rng, deg);
            int m = 1 + static_cast<int>(rng.range(0, deg - 1));
            CHECK(form_equal(derivative(H, p, m), derivative_recursive(H, p, m)));
        }
    }
    SUBCASE("iterated rule route agrees too") {
        SampleRng rng(13);
        for (int s = 0; s < 6; ++s) {
            auto p = test::random_polynomial(H, rng, 3);
            Form injected = derivative(H, p, 2);
            Form iterated = form_partial(expr_partial(H, p, 1), 2);
            CHECK(form_equal(injected, iterated));
        }
    }
}

TEST_CASE("symmetry of higher derivatives") {
    auto H = quat();
    SUBCASE("classified symmetric") {
        CHECK(symmetry_class(derivative(H, parse_expr(H, "x*x"), 2)) == SymmetryClass::symmetric);
        CHECK(symmetry_class(derivative(H, parse_expr(H, "x*x*x"), 3)) ==
              SymmetryClass::symmetric);
    }
    SUBCASE("commutator form is skew") {
        Q one = Q::unit(H);
        Form f = make_form(H, 2,
                           {make_word(Rational(1), {one, one, one}, {1, 2}),
                            make_word(Rational(-1), {one, one, one}, {2, 1})});
        CHECK(symmetry_class(f) == SymmetryClass::skew);
    }
    SUBCASE("a lopsided form is neither") {
        Q one = Q::unit(H);
        Form f = make_form(H, 2,
                           {make_word(Rational(3), {one, one, one, one}, {2, 0, 1}),
                            make_word(Rational(3), {one, one, one, one}, {0, 2, 1})});
        CHECK(symmetry_class(f) == SymmetryClass::neither);
    }
    SUBCASE("eval under every permutation of the slots") {
        SampleRng rng(17);
        for (int s = 0; s < 6; ++s) {
            int deg = 2 + static_cast<int>(rng.range(0, 2));
            auto p = test::random_monomial(H, rng, deg);
            int m = 2 + static_cast<int>(rng.range(0, deg - 2));
            Form f = derivative(H, p, m);
            Q x = test::random_element(H, rng);
            std::vector<Q> hs;
            for (int t = 0; t < m; ++t) hs.push_back(test::random_element(H, rng));
            Q base = eval_form(f, x, hs);
            std::vector<int> idx(m);
            for (int t = 0; t < m; ++t) idx[t] = t;
            do {
                std::vector<Q> permuted;
                for (int t = 0; t < m; ++t) permuted.push_back(hs[idx[t]]);
                CHECK(eval_form(f, x, permuted) == base);
            } while (std::next_permutation(idx.begin(), idx.end()));
        }
    }
}

namespace {

/// Terms of a coordinate polynomial with keys cut to the x and h1 blocks,
/// for comparisons across different block counts. Asserts nothing was
/// lost in the cut.
std::map<std::vector<std::uint16_t>, Rational> first_blocks(const CoordPoly& p, int dim) {
    std::map<std::vector<std::uint16_t>, Rational> out;
    for (const auto& [key, v] : p.terms()) {
        std::vector<std::uint16_t> cut(key.begin(),
                                       key.begin() + std::min<std::size_t>(key.size(), 2 * dim));
        for (std::size_t i = 2 * dim; i < key.size(); ++i) REQUIRE(key[i] == 0);
        cut.resize(2 * dim, 0);
        out[cut] = v;
    }
    return out;
}

} // namespace

TEST_CASE("vanishing and diagonal identities") {
    auto H = quat();
    SampleRng rng(19);
    for (int s = 0; s < 6; ++s) {
        int deg = 1 + static_cast<int>(rng.range(0, 4));
        auto p = test::random_monomial(H, rng, deg);
        CAPTURE(deg);

        // Above the degree everything vanishes.
        CHECK(derivative(H, p, deg + 1).structurally_zero());
        CHECK(form_partial(derivative(H, p, deg), deg + 1).structurally_zero());

        // Below the degree, the derivative at x = 0 vanishes: every word
        // keeps at least one X slot.
        if (deg >= 2) {
            Form f = derivative(H, p, deg - 1);
            for (const auto& w : f.words) {
                bool has_x = false;
                for (const auto& z : w.slots) has_x = has_x || z.dir == 0;
                CHECK(has_x);
            }
            std::vector<Q> hs(deg - 1, test::random_element(H, rng));
            CHECK(eval_form(f, Q::zero(H), hs).is_zero());
        }

        // On the diagonal the order-deg derivative restores deg! copies.
        Form top = derivative(H, p, deg);
        SymbolicElement diag = expand_form(top);
        std::vector<int> collapse(deg + 1, 1);
        collapse[0] = 0;
        for (auto& c : diag.coords) c = c.permute_blocks(collapse, H->dim());

        SymbolicElement expect = expand_expr(H, p, 1);
        std::vector<int> xtoh{1};
        for (auto& c : expect.coords) {
            c = c.permute_blocks(xtoh, H->dim());
            c.scale(factorial(static_cast<unsigned>(deg)));
        }
        REQUIRE(diag.coords.size() == expect.coords.size());
        for (std::size_t k = 0; k < diag.coords.size(); ++k)
            CHECK(first_blocks(diag.coords[k], H->dim()) == first_blocks(expect.coords[k], H->dim()));
    }
}

TEST_CASE("taylor reconstruction") {
    auto H = quat();
    SUBCASE("x^3 at zero is x^3") {
        auto p = parse_expr(H, "x^3");
        auto t = taylor(p, Q::zero(H));
        CHECK(expr_equal(H, t, p));
    }
    SUBCASE("constants reproduce themselves") {
        auto p = parse_expr(H, "k");
        CHECK(expr_equal(H, taylor(p, test::make_q(1, 2, 0, 0)), p));
    }
    SUBCASE("i x j x at the point k") {
        auto p = parse_expr(H, "i*x*j*x");
        CHECK(expr_equal(H, taylor(p, test::qe(3)), p));
    }
    SUBCASE("random polynomials over both algebras") {
        for (auto alg : {cplx(), quat()}) {
            SampleRng rng(23);
            for (int s = 0; s < 5; ++s) {
                auto p = test::random_polynomial(alg, rng, 4);
                Q x0 = test::random_element(alg, rng);
                CHECK(expr_equal(alg, taylor(p, x0), p));
            }
        }
    }
}

TEST_CASE("chain rule under canonical expansion") {
    auto H = quat();
    SampleRng rng(29);
    for (int s = 0; s < 4; ++s) {
        auto f = test::random_polynomial(H, rng, 2);
        auto g = test::random_polynomial(H, rng, 2);
        auto composed = expr_substitute(g, f);

        SymbolicElement lhs = expand_form(derivative(H, composed, 1));

        // Right side: words of dg with X slots fed the expansion of f and
        // the direction slot fed the expansion of df.
        int d = H->dim();
        std::size_t nvars = 2 * static_cast<std::size_t>(d);
        SymbolicElement fx = expand_expr(H, f, 1);
        SymbolicElement dfx = expand_form(derivative(H, f, 1));
        Form dg = derivative(H, g, 1);
        SymbolicElement rhs = sym_zero(d, nvars);
        for (const auto& w : dg.words) {
            SymbolicElement cur = expand_expr(H, w.segs[0], 1);
            for (std::size_t i = 0; i < w.slots.size(); ++i) {
                cur = sym_mul(*H, cur, w.slots[i].dir == 0 ? fx : dfx);
                cur = sym_mul(*H, cur, expand_expr(H, w.segs[i + 1], 1));
            }
            for (auto& c : cur.coords) c.scale(w.prefactor);
            rhs += cur;
        }
        SymbolicElement diff = lhs;
        diff -= rhs;
        CHECK(diff.is_zero());
    }
}

TEST_CASE("linearity and arity of form evaluation") {
    auto H = quat();
    auto p = parse_expr(H, "i*x*j*x");
    Form f = derivative(H, p, 2);
    SampleRng rng(31);
    Q x = test::random_element(H, rng);
    Q h1 = test::random_element(H, rng);
    Q h2 = test::random_element(H, rng);
    Q k = test::random_element(H, rng);
    Rational alpha(5, 2);
    CHECK(eval_form(f, x, {alpha * h1 + k, h2}) ==
          alpha * eval_form(f, x, {h1, h2}) + eval_form(f, x, {k, h2}));
    CHECK(eval_form(f, x, {Q::zero(H), h2}).is_zero());
    CHECK_THROWS(eval_form(f, x, {h1}));
}

TEST_CASE("derivative values at specific points") {
    auto H = quat();
    Form f = derivative(H, parse_expr(H, "x*x"), 1);
    CHECK(eval_form(f, test::qe(1), {test::qe(2)}).is_zero()); // ji + ij = 0
    Form f2 = derivative(H, parse_expr(H, "x*x"), 2);
    Q h = test::make_q(1, 2, 0, 1);
    CHECK(eval_form(f2, test::qe(1), {h, h}) == Rational(2) * (h * h));
}

TEST_CASE("maps with all low-order derivatives zero are high-order small") {
    auto H = quat();
    auto Hd = to_double_algebra(H);
    // p(x) = x^3 has d p(0) = d^2 p(0) = 0, so |p(t h)| = o(t^2).
    auto p = parse_expr(Hd, "x^3");
    auto h = Element<double>::basis(Hd, 1) + Element<double>::basis(Hd, 2);
    double prev_ratio = -1;
    for (double t : {1e-1, 1e-2, 1e-3}) {
        double ratio = eval(p, t * h).norm() / (t * t);
        if (prev_ratio > 0) CHECK(ratio < prev_ratio / 5);
        prev_ratio = ratio;
    }
}
