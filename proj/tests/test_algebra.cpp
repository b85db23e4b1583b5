#include "ncalc/algebra.hpp"
#include "ncalc/algebra_io.hpp"
#include "ncalc/element.hpp"

#include <doctest.h>

#include "helpers.hpp"

#include <array>
#include <cmath>

using namespace ncalc;
using test::cplx;
using test::octo;
using test::quat;
using test::Q;

namespace {

// Independent quaternion multiplication oracle: products of basis vectors
// as (sign, index) pairs, from the defining relations.
constexpr std::array<std::array<std::pair<int, int>, 4>, 4> kQuatTable{{
    {{{1, 0}, {1, 1}, {1, 2}, {1, 3}}},
    {{{1, 1}, {-1, 0}, {1, 3}, {-1, 2}}},
    {{{1, 2}, {-1, 3}, {-1, 0}, {1, 1}}},
    {{{1, 3}, {1, 2}, {-1, 1}, {-1, 0}}},
}};

} // namespace

TEST_CASE("quaternion products match the defining relations") {
    auto H = quat();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            auto [sign, idx] = kQuatTable[a][b];
            Q expect = Rational(sign) * Q::basis(H, idx);
            CHECK(Q::basis(H, a) * Q::basis(H, b) == expect);
        }
}

TEST_CASE("unit acts as identity in every builtin") {
    for (const char* name : {"reals", "complex", "quaternions", "octonions", "mat2x2", "dual"}) {
        auto alg = builtin_algebra<Rational>(name);
        SampleRng rng(7);
        for (int s = 0; s < 4; ++s) {
            auto a = test::random_element(alg, rng);
            CHECK(Q::unit(alg) * a == a);
            CHECK(a * Q::unit(alg) == a);
        }
    }
}

TEST_CASE("complex product example") {
    auto C = cplx();
    Q one_plus_i(C, {Rational(1), Rational(1)});
    Q one_minus_i(C, {Rational(1), Rational(-1)});
    CHECK(one_plus_i * one_minus_i == Rational(2) * Q::unit(C));
}

TEST_CASE("algebra mismatch is an error") {
    CHECK_THROWS_AS(Q::unit(quat()) * Q::unit(cplx()), AlgebraMismatch);
    CHECK_THROWS_AS(Q::unit(quat()) + Q::unit(cplx()), AlgebraMismatch);
}

TEST_CASE("commutator and associator") {
    auto H = quat();
    CHECK(commutator(test::qe(1), test::qe(2)) == Rational(2) * test::qe(3)); // [i,j] = 2k
    CHECK(associator(test::qe(1), test::qe(2), test::qe(3)).is_zero());

    auto O = octo();
    Q e1 = Q::basis(O, 1), e2 = Q::basis(O, 2), e4 = Q::basis(O, 4);
    CHECK_FALSE(associator(e1, e2, e4).is_zero());
}

TEST_CASE("commutator antisymmetry on random pairs") {
    auto O = octo();
    SampleRng rng(11);
    for (int s = 0; s < 16; ++s) {
        auto a = test::random_element(O, rng);
        auto b = test::random_element(O, rng);
        CHECK(commutator(a, b) == -commutator(b, a));
    }
}

TEST_CASE("bilinearity of the product, exactly") {
    auto H = quat();
    SampleRng rng(13);
    for (int s = 0; s < 16; ++s) {
        auto a = test::random_element(H, rng);
        auto b = test::random_element(H, rng);
        auto c = test::random_element(H, rng);
        Rational alpha(rng.range(-3, 3), 2);
        CHECK((alpha * a + b) * c == alpha * (a * c) + b * c);
        CHECK(c * (alpha * a + b) == alpha * (c * a) + c * b);
    }
}

TEST_CASE("associator vanishes on associative-flagged algebras") {
    for (const char* name : {"quaternions", "mat2x2", "dual"}) {
        auto alg = builtin_algebra<Rational>(name);
        SampleRng rng(17);
        for (int s = 0; s < 12; ++s) {
            auto a = test::random_element(alg, rng);
            auto b = test::random_element(alg, rng);
            auto c = test::random_element(alg, rng);
            CHECK(associator(a, b, c).is_zero());
        }
    }
}

TEST_CASE("five-term associator identity holds on octonions") {
    auto O = octo();
    SampleRng rng(19);
    for (int s = 0; s < 32; ++s) {
        auto a = test::random_element(O, rng);
        auto b = test::random_element(O, rng);
        auto c = test::random_element(O, rng);
        auto d = test::random_element(O, rng);
        Q lhs = a * associator(b, c, d) - associator(a * b, c, d) + associator(a, b * c, d) -
                associator(a, b, c * d) + associator(a, b, c) * d;
        CHECK(lhs.is_zero());
    }
}

TEST_CASE("inverse") {
    auto H = quat();
    CHECK(test::qe(1).inverse() == -test::qe(1)); // i^-1 = -i
    CHECK(Q::unit(H).inverse() == Q::unit(H));

    auto C = cplx();
    Q z(C, {Rational(3), Rational(4)});
    Q zinv = z.inverse();
    CHECK(zinv == Q(C, {Rational(3, 25), Rational(-4, 25)}));
    CHECK(z * zinv == Q::unit(C));

    CHECK_THROWS_AS(Q::zero(H).inverse(), NotInvertible);
    auto D = builtin_algebra<Rational>("dual");
    CHECK_THROWS_AS(Q::basis(D, 1).inverse(), NotInvertible); // eps
    auto M = builtin_algebra<Rational>("mat2x2");
    CHECK_THROWS_AS(Q::basis(M, 1).inverse(), NotInvertible); // e12 is nilpotent
}

TEST_CASE("norms") {
    auto H = quat();
    CHECK(test::make_q(1, 1, 1, 1).norm() == doctest::Approx(2.0));
    CHECK(Q::zero(H).norm() == 0.0);

    auto C = cplx();
    Q a(C, {Rational(1), Rational(1)});
    Q b(C, {Rational(1), Rational(-1)});
    CHECK((a * b).norm() == doctest::Approx(a.norm() * b.norm()));

    SampleRng rng(23);
    SUBCASE("triangle inequality") {
        for (int s = 0; s < 16; ++s) {
            auto x = test::random_element(H, rng);
            auto y = test::random_element(H, rng);
            CHECK((x + y).norm() <= x.norm() + y.norm() + 1e-12);
        }
    }
    SUBCASE("multiplicativity on the division builtins") {
        for (const char* name : {"reals", "complex", "quaternions", "octonions"}) {
            auto alg = builtin_algebra<Rational>(name);
            for (int s = 0; s < 8; ++s) {
                auto x = test::random_element(alg, rng);
                auto y = test::random_element(alg, rng);
                CHECK(std::fabs((x * y).norm() - x.norm() * y.norm()) <=
                      1e-9 * (1 + x.norm() * y.norm()));
            }
        }
    }
}

TEST_CASE("builtin flags are as declared and verified") {
    auto H = quat();
    CHECK(H->dim() == 4);
    CHECK(H->flags().unital);
    CHECK(H->flags().associative);
    CHECK(H->flags().division);
    CHECK(H->flags().multiplicative_norm);

    auto O = octo();
    CHECK(O->dim() == 8);
    CHECK_FALSE(O->flags().associative);
    CHECK(O->flags().division);

    auto M = builtin_algebra<Rational>("mat2x2");
    CHECK(M->flags().associative);
    CHECK_FALSE(M->flags().division);

    CHECK_THROWS_AS(builtin_algebra<Rational>("nope"), ParseError);
}

TEST_CASE("flag contradictions are construction errors") {
    auto H = quat();
    SUBCASE("declaring the quaternions nonassociative fails") {
        Algebra<Rational>::Flags f{true, false, true, true};
        CHECK_THROWS_AS(
            Algebra<Rational>::create("bad", H->basis(), H->constants(), f),
            FlagContradiction);
    }
    SUBCASE("declaring the dual numbers a division algebra fails") {
        auto D = builtin_algebra<Rational>("dual");
        Algebra<Rational>::Flags f{true, true, true, false};
        CHECK_THROWS_AS(
            Algebra<Rational>::create("bad", D->basis(), D->constants(), f),
            FlagContradiction);
    }
    SUBCASE("declaring the octonions associative fails with a witness triple") {
        auto O = octo();
        Algebra<Rational>::Flags f{true, true, true, true};
        CHECK_THROWS_WITH_AS(
            Algebra<Rational>::create("bad", O->basis(), O->constants(), f),
            doctest::Contains("associator"), FlagContradiction);
    }
    SUBCASE("denying the unit fails when one exists") {
        Algebra<Rational>::Flags f{false, true, true, true};
        CHECK_THROWS_AS(
            Algebra<Rational>::create("bad", H->basis(), H->constants(), f),
            FlagContradiction);
    }
    SUBCASE("declaring mat2x2 multiplicative-norm fails") {
        auto M = builtin_algebra<Rational>("mat2x2");
        Algebra<Rational>::Flags f{true, true, false, true};
        CHECK_THROWS_AS(
            Algebra<Rational>::create("bad", M->basis(), M->constants(), f),
            FlagContradiction);
    }
}

TEST_CASE("algebra spec documents") {
    SUBCASE("one-dimensional spec gives the reals") {
        auto alg = load_algebra_json(R"({
            "dim": 1, "basis": ["1"],
            "flags": {"unital": true, "associative": true,
                      "division": true, "multiplicative_norm": true},
            "constants": [{"k":0, "l":0, "p":0, "v":"1"}]
        })");
        CHECK(alg->dim() == 1);
        CHECK(alg->flags().division);
        CHECK(Q::unit(alg) * Q::unit(alg) == Q::unit(alg));
    }
    SUBCASE("rational values parse bit-exactly") {
        auto alg = load_algebra_json(R"({
            "dim": 2, "basis": ["1","t"],
            "flags": {"unital": true, "associative": true},
            "constants": [{"k":0,"l":0,"p":0,"v":"1"},
                          {"k":0,"l":1,"p":1,"v":"1"},
                          {"k":1,"l":0,"p":1,"v":"1"},
                          {"k":1,"l":1,"p":0,"v":"3/2"}]
        })");
        CHECK(alg->c(1, 1, 0) == Rational(3, 2));
    }
    SUBCASE("malformed documents are rejected") {
        CHECK_THROWS_AS(load_algebra_json("not json"), ParseError);
        CHECK_THROWS_AS(load_algebra_json(R"({"basis": []})"), ParseError);
        CHECK_THROWS_AS(load_algebra_json(R"({"dim": 0})"), ParseError);
        CHECK_THROWS_AS(load_algebra_json(R"({"dim": 1, "what": 1})"), ParseError);
        CHECK_THROWS_AS(load_algebra_json(
                            R"({"dim": 1, "constants": [{"k":0,"l":0,"p":5,"v":"1"}]})"),
                        ParseError);
        CHECK_THROWS_AS(load_algebra_json(
                            R"({"dim": 1, "constants": [{"k":0,"l":0,"p":0,"v":"x"}]})"),
                        ParseError);
    }
    SUBCASE("emitted spec reloads to an identical algebra") {
        auto H = quat();
        auto reloaded = load_algebra_json(algebra_spec_json(*H));
        CHECK(reloaded->dim() == H->dim());
        CHECK(reloaded->constants() == H->constants());
        CHECK(reloaded->basis() == H->basis());
        CHECK(reloaded->generators().size() == H->generators().size());
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                CHECK(reloaded->mul_coords(reloaded->basis_coords(a), reloaded->basis_coords(b)) ==
                      H->mul_coords(H->basis_coords(a), H->basis_coords(b)));
    }
}

TEST_CASE("double-precision twin of an exact algebra") {
    auto Hd = to_double_algebra(quat());
    CHECK(Hd->dim() == 4);
    auto i = Element<double>::basis(Hd, 1);
    auto j = Element<double>::basis(Hd, 2);
    CHECK((i * j).coords()[3] == doctest::Approx(1.0));
    CHECK(Hd->flags().division);
}
