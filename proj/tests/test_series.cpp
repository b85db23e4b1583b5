#include "ncalc/numeric.hpp"
#include "ncalc/series.hpp"

#include <doctest.h>

#include "helpers.hpp"

#include <cmath>
#include <set>

using namespace ncalc;
using test::quat;
using test::Q;

namespace {

using E = Element<double>;

AlgebraPtr<double> quatd() { return builtin_algebra<double>("quaternions"); }
AlgebraPtr<double> cplxd() { return builtin_algebra<double>("complex"); }

} // namespace

TEST_CASE("exponential series") {
    SUBCASE("exp(0) = 1 at any order") {
        auto H = quatd();
        for (int n : {0, 1, 10}) CHECK((exp_series(E::zero(H), n).value - E::unit(H)).norm() == 0.0);
    }
    SUBCASE("exp(i pi) = -1") {
        auto C = cplxd();
        auto r = exp_series(E(C, {0.0, 3.14159265358979323846}), 30);
        CHECK(std::fabs(r.value[0] + 1.0) < 1e-12);
        CHECK(std::fabs(r.value[1]) < 1e-12);
        CHECK(r.remainder_bound < 1e-10);
    }
    SUBCASE("axis-angle closed form on the quaternions") {
        auto H = quatd();
        double inv = 1.0 / std::sqrt(2.0);
        E u(H, {0.0, inv, inv, 0.0}); // unit pure imaginary
        double theta = 3.14159265358979323846 / 3.0;
        auto r = exp_series(theta * u, 30);
        E expect = std::cos(theta) * E::unit(H) + std::sin(theta) * u;
        CHECK((r.value - expect).norm() < 1e-12);
    }
    SUBCASE("exact path for small orders") {
        auto H = quat();
        auto r = exp_series(Q::unit(H), 6);
        // 1 + 1 + 1/2 + 1/6 + 1/24 + 1/120 + 1/720 = 1957/720
        CHECK(r.value[0] == Rational(1957, 720));
    }
    SUBCASE("consecutive truncations shrink by |x|/(N+1)") {
        auto C = cplxd();
        E x(C, {0.4, 1.1});
        double nx = x.norm();
        for (int n = 4; n < 12; ++n) {
            double dn = (exp_series(x, n + 1).value - exp_series(x, n).value).norm();
            double dp = (exp_series(x, n).value - exp_series(x, n - 1).value).norm();
            // Absolute slack covers accumulator rounding in the small tail.
            if (dp > 1e-15) CHECK(dn <= nx / (n + 1) * dp + 1e-13);
        }
    }
    SUBCASE("remainder bound dominates the actual tail") {
        auto C = cplxd();
        E x(C, {0.3, -1.2});
        auto r10 = exp_series(x, 10);
        auto r40 = exp_series(x, 40);
        CHECK((r10.value - r40.value).norm() <= r10.remainder_bound);
    }
}

TEST_CASE("exponent of a sum versus the product") {
    SUBCASE("commuting quaternions agree") {
        auto H = quatd();
        auto r = exp_sum_check(E(H, {0, 1, 0, 0}), E(H, {0, 2, 0, 0}), 30, 1e-10);
        CHECK(r.equal);
        CHECK(r.commutator_norm == 0.0);
    }
    SUBCASE("i and j disagree with a visible witness") {
        auto H = quatd();
        auto r = exp_sum_check(E(H, {0, 1, 0, 0}), E(H, {0, 0, 1, 0}), 30, 1e-10);
        CHECK_FALSE(r.equal);
        CHECK(r.difference > 0.1);
        CHECK(r.commutator_norm > 0.0);
    }
    SUBCASE("everything commutes over the complex numbers") {
        auto C = cplxd();
        DirectionSampler rng(5);
        for (int s = 0; s < 8; ++s) {
            auto r = exp_sum_check(rng.unit_vector(C), rng.unit_vector(C), 30, 1e-10);
            CHECK(r.equal);
        }
    }
    SUBCASE("insufficient truncation is refused") {
        auto H = quatd();
        CHECK_THROWS_AS(exp_sum_check(E(H, {0, 1, 0, 0}), E(H, {0, 0, 1, 0}), 3, 1e-10),
                        InsufficientTruncation);
    }
}

TEST_CASE("order-3 coefficient mismatch between exp(a)exp(b) and exp(a+b)") {
    auto H = quat();
    auto order3_mismatch = [&](const Q& a, const Q& b) {
        // Degree-3 part of exp(a)exp(b) minus that of exp(a+b).
        Q prod = Rational(1, 6) * (a * a * a) + Rational(1, 2) * ((a * a) * b) +
                 Rational(1, 2) * (a * (b * b)) + Rational(1, 6) * (b * b * b);
        Q apb = a + b;
        Q sum = Rational(1, 6) * (apb * (apb * apb));
        return prod - sum;
    };
    SampleRng rng(7);
    for (int s = 0; s < 8; ++s) {
        Q a = test::random_element(H, rng);
        Q b = test::random_element(H, rng);
        // Expanding (a+b)^3 by hand and cancelling the a^3, b^3 layers:
        // mismatch = (2a^2 b - aba - ba^2 + 2ab^2 - bab - b^2 a)/6.
        Q expect = Rational(1, 6) *
                   (Rational(2) * (a * a * b) - a * b * a - b * a * a +
                    Rational(2) * (a * (b * b)) - b * a * b - b * b * a);
        CHECK(order3_mismatch(a, b) == expect);
        if (commutator(a, b).is_zero()) CHECK(order3_mismatch(a, b).is_zero());
    }
    CHECK_FALSE(order3_mismatch(test::qe(1), test::qe(2)).is_zero());
    CHECK(order3_mismatch(test::qe(1), Rational(2) * test::qe(1)).is_zero());
}

TEST_CASE("shuffle words") {
    SUBCASE("order 1 is the defining pair") {
        auto ws = shuffle_words(1);
        REQUIRE(ws.size() == 2);
        CHECK(ws[0].to_string() == "y h1");
        CHECK(ws[1].to_string() == "h1 y");
    }
    SUBCASE("order 2 keeps the top index adjacent to y") {
        auto ws = shuffle_words(2);
        REQUIRE(ws.size() == 4);
        std::set<std::string> got;
        for (const auto& w : ws) got.insert(w.to_string());
        CHECK(got == std::set<std::string>{"y h2 h1", "h1 y h2", "h2 y h1", "h1 h2 y"});
    }
    SUBCASE("counts, distinctness, ordering and adjacency up to order 10") {
        for (int n = 1; n <= 10; ++n) {
            auto ws = shuffle_words(n);
            CHECK(ws.size() == (std::size_t{1} << n));
            std::set<std::string> seen;
            for (const auto& w : ws) {
                seen.insert(w.to_string());
                auto l = w.left();
                for (std::size_t i = 1; i < l.size(); ++i) CHECK(l[i - 1] < l[i]);
                auto r = w.right();
                for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i - 1] > r[i]);
                // Index n sits immediately before or after y.
                bool adjacent = (!l.empty() && l.back() == n) || (!r.empty() && r.front() == n);
                CHECK(adjacent);
            }
            CHECK(seen.size() == ws.size());
        }
    }
    SUBCASE("diagonal values collapse to 2^n h^n") {
        auto H = quat();
        CHECK(diagonal_shuffle_value(1, test::qe(1)) == Rational(2) * test::qe(1));
        CHECK(diagonal_shuffle_value(2, test::qe(1)) == Rational(-4) * Q::unit(H));
        CHECK(diagonal_shuffle_value(3, Q::zero(H)).is_zero());
        SampleRng rng(9);
        for (int n = 1; n <= 5; ++n) {
            Q h = test::random_element(H, rng);
            Q pow = Q::unit(H);
            for (int k = 0; k < n; ++k) pow = pow * h;
            CHECK(diagonal_shuffle_value(n, h) == Rational(1LL << n) * pow);
        }
    }
}

TEST_CASE("truncated series layers") {
    auto C = cplxd();
    auto ts = exp_truncated_series(C, 12);
    CHECK(ts.order() == 12);
    E x(C, {0.2, 0.7});
    CHECK((ts.eval_at(x) - exp_series(x, 12).value).norm() < 1e-14);
}
