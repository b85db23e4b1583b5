#pragma once

#include "ncalc/algebra.hpp"
#include "ncalc/element.hpp"
#include "ncalc/expr.hpp"

#include <cstdint>
#include <vector>

namespace test {

using namespace ncalc;

using Q = Element<Rational>;

inline AlgebraPtr<Rational> quat() { return builtin_algebra<Rational>("quaternions"); }
inline AlgebraPtr<Rational> cplx() { return builtin_algebra<Rational>("complex"); }
inline AlgebraPtr<Rational> octo() { return builtin_algebra<Rational>("octonions"); }

inline Q qe(int k) { return Q::basis(quat(), k); }

inline Q make_q(long long a, long long b, long long c, long long d) {
    return Q(quat(), {Rational(a), Rational(b), Rational(c), Rational(d)});
}

/// Deterministic rational element with small numerators and denominator 1
/// or 2, never all-zero unless allow_zero.
template <class Rng>
Element<Rational> random_element(const AlgebraPtr<Rational>& alg, Rng& rng,
                                 bool allow_zero = false) {
    std::vector<Rational> c(alg->dim());
    bool nonzero = false;
    for (auto& v : c) {
        long long num = rng.range(-3, 3);
        long long den = rng.range(0, 3) == 0 ? 2 : 1;
        v = Rational(num, den);
        nonzero = nonzero || num != 0;
    }
    if (!nonzero && !allow_zero) c[0] = Rational(1);
    return Element<Rational>(alg, std::move(c));
}

/// Deterministic random monomial coeff * a_0 x a_1 ... x a_deg.
template <class Rng>
ExprPtr<Rational> random_monomial(const AlgebraPtr<Rational>& alg, Rng& rng, int deg) {
    std::vector<ExprPtr<Rational>> factors;
    factors.push_back(expr_const(random_element(alg, rng)));
    for (int i = 0; i < deg; ++i) {
        factors.push_back(expr_var<Rational>());
        factors.push_back(expr_const(random_element(alg, rng)));
    }
    return expr_prod(std::move(factors));
}

/// Deterministic random polynomial with terms of degree 0..deg.
template <class Rng>
ExprPtr<Rational> random_polynomial(const AlgebraPtr<Rational>& alg, Rng& rng, int deg) {
    std::vector<ExprPtr<Rational>> terms;
    for (int d = 0; d <= deg; ++d) terms.push_back(random_monomial(alg, rng, d));
    return expr_sum(std::move(terms));
}

} // namespace test
