#pragma once

#include "ncalc/element.hpp"
#include "ncalc/errors.hpp"
#include "ncalc/expr.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace ncalc {

/// Tail bound for the exponential series truncated after degree N at an
/// argument of norm r: r^{N+1}/(N+1)! * e^r.
inline double exp_remainder_bound(double r, int order) {
    double t = 1.0;
    for (int k = 1; k <= order + 1; ++k) t *= r / k;
    return t * std::exp(r);
}

template <class S>
struct ExpResult {
    Element<S> value;
    int order = 0;
    double remainder_bound = 0;
};

/// Truncated exponential sum_{k<=N} x^k / k! by iterated multiplication,
/// degree by degree in a fixed order. Exact when S is rational.
template <class S>
ExpResult<S> exp_series(const Element<S>& x, int order = 30) {
    if (order < 0) throw Error("exp: truncation order must be >= 0");
    const AlgebraPtr<S>& alg = x.algebra();
    if (!alg->flags().unital) throw Error("exp: algebra must be unital");
    Element<S> term = Element<S>::unit(alg);
    Element<S> acc = term;
    for (int k = 1; k <= order; ++k) {
        S inv = scalar_traits<S>::one();
        inv /= scalar_traits<S>::from_int(k);
        term = inv * (term * x);
        acc = acc + term;
    }
    return {acc, order, exp_remainder_bound(x.norm(), order)};
}

struct ExpSumReport {
    bool equal = false;
    double difference = 0;      ///< |exp(a+b) - exp(a) exp(b)| at the truncation
    double commutator_norm = 0; ///< |ab - ba|
    int order = 0;
    double tolerance = 0;
    double remainder_sum = 0;  ///< tail bound of exp(a+b)
    double remainder_prod = 0; ///< tail bound of exp(a) exp(b)
};

/// Compare exp(a+b) against exp(a) exp(b) at truncation order N. The
/// verdict is only issued when both tail bounds are below tol/4, otherwise
/// InsufficientTruncation is raised.
template <class S>
ExpSumReport exp_sum_check(const Element<S>& a, const Element<S>& b, int order = 30,
                           double tol = 1e-10) {
    double na = a.norm(), nb = b.norm();
    ExpSumReport r;
    r.order = order;
    r.tolerance = tol;
    r.remainder_sum = exp_remainder_bound((a + b).norm(), order);
    double ra = exp_remainder_bound(na, order), rb = exp_remainder_bound(nb, order);
    r.remainder_prod = ra * std::exp(nb) + rb * std::exp(na) + ra * rb;
    if (r.remainder_sum >= tol / 4 || r.remainder_prod >= tol / 4)
        throw InsufficientTruncation("exp_sum_check: truncation order " + std::to_string(order) +
                                     " too small for tolerance " + std::to_string(tol));
    Element<S> lhs = exp_series(a + b, order).value;
    Element<S> rhs = exp_series(a, order).value * exp_series(b, order).value;
    r.difference = (lhs - rhs).norm();
    r.commutator_norm = commutator(a, b).norm();
    r.equal = r.difference <= tol;
    return r;
}

// --- shuffle words -------------------------------------------------------------

/// One of the 2^n arrangements of y, h_1..h_n appearing in the order-n
/// derivative of the exponential solution: the chosen subset ascends on
/// the left of y, the complement descends away from y on the right, so
/// index n always ends up adjacent to y.
struct ShuffleWord {
    int n = 0;
    std::uint32_t left_mask = 0; ///< bit k-1 set: index k sits left of y

    std::vector<int> left() const {
        std::vector<int> v;
        for (int k = 1; k <= n; ++k)
            if (left_mask & (1u << (k - 1))) v.push_back(k);
        return v;
    }
    std::vector<int> right() const {
        std::vector<int> v;
        for (int k = n; k >= 1; --k)
            if (!(left_mask & (1u << (k - 1)))) v.push_back(k);
        return v;
    }

    std::string to_string() const {
        std::string s;
        for (int k : left()) s += "h" + std::to_string(k) + " ";
        s += "y";
        for (int k : right()) s += " h" + std::to_string(k);
        return s;
    }

    /// Substitute concrete values and multiply left to right.
    template <class S>
    Element<S> realize(const Element<S>& y, const std::vector<Element<S>>& hs) const {
        Element<S> acc = Element<S>::unit(y.algebra());
        bool first = true;
        auto mul_in = [&](const Element<S>& v) {
            acc = first ? v : acc * v;
            first = false;
        };
        for (int k : left()) mul_in(hs[k - 1]);
        mul_in(y);
        for (int k : right()) mul_in(hs[k - 1]);
        return acc;
    }
};

/// All 2^n shuffle words of order n, ordered by subset bitmask.
inline std::vector<ShuffleWord> shuffle_words(int n) {
    if (n < 1) throw Error("shuffle_words: order must be >= 1");
    if (n > 30) throw Error("shuffle_words: order too large");
    std::vector<ShuffleWord> out;
    out.reserve(std::size_t{1} << n);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) out.push_back({n, mask});
    return out;
}

/// Sum of all order-n shuffle words with y = 1 and every slot = h;
/// each word collapses to h^n, so the total is 2^n h^n.
template <class S>
Element<S> diagonal_shuffle_value(int n, const Element<S>& h) {
    const AlgebraPtr<S>& alg = h.algebra();
    if (!alg->flags().unital) throw Error("diagonal_shuffle_value: algebra must be unital");
    std::vector<Element<S>> hs(n, h);
    Element<S> acc = Element<S>::zero(alg);
    for (const auto& w : shuffle_words(n)) acc = acc + w.realize(Element<S>::unit(alg), hs);
    return acc;
}

// --- truncated series ------------------------------------------------------------

/// A power series cut at a fixed order, stored as one expression layer per
/// total degree. Evaluation sums layers 0..N in order.
template <class S>
struct TruncatedSeries {
    AlgebraPtr<S> alg;
    std::vector<ExprPtr<S>> layers;

    int order() const { return static_cast<int>(layers.size()) - 1; }

    Element<S> eval_at(const Element<S>& x) const {
        Element<S> acc = Element<S>::zero(alg);
        for (const auto& layer : layers) acc = acc + eval(layer, x);
        return acc;
    }
};

/// The exponential as a truncated series: layer k is x^k/k!.
template <class S>
TruncatedSeries<S> exp_truncated_series(const AlgebraPtr<S>& alg, int order) {
    TruncatedSeries<S> ts;
    ts.alg = alg;
    S kfact = scalar_traits<S>::one();
    for (int k = 0; k <= order; ++k) {
        if (k > 0) kfact *= scalar_traits<S>::from_int(k);
        S inv = scalar_traits<S>::one();
        inv /= kfact;
        ts.layers.push_back(
            expr_prod(expr_scalar(alg, inv), expr_pow(expr_var<S>(), static_cast<unsigned>(k), alg)));
    }
    return ts;
}

} // namespace ncalc
