#pragma once

#include "ncalc/form.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ncalc {

/// A differential specification: the prescribed first derivative of an
/// unknown map y as an order-1 form (one direction slot per word, X slots
/// carrying the x-dependence), with initial data y(x0) = y0.
struct DifferentialSpec {
    AlgebraPtr<Rational> alg;
    MultilinearForm<Rational> rhs;
    Element<Rational> x0;
    Element<Rational> y0;
};

struct IntegrabilityWitness {
    int order = 0;                              ///< derivative order where symmetry fails
    std::pair<int, int> transposition{0, 0};    ///< minimal failing slot swap
    MultilinearForm<Rational> difference;       ///< relabeled minus original; expands nonzero
};

struct IntegrationResult {
    bool integrable = false;
    ExprPtr<Rational> solution;                 ///< set when integrable
    std::optional<IntegrabilityWitness> witness;
};

namespace detail {

inline void validate_spec(const DifferentialSpec& spec) {
    if (spec.rhs.order != 1) throw Error("differential spec: right-hand side must have order 1");
    for (const auto& w : spec.rhs.words) {
        int hcount = 0;
        for (const auto& z : w.slots)
            if (z.dir != 0) ++hcount;
        if (hcount != 1)
            throw Error("differential spec: every word needs exactly one direction slot");
        for (const auto& seg : w.segs)
            if (!is_polynomial(seg))
                throw Error("differential spec: inverse nodes are not supported");
    }
    if (spec.x0.algebra() != spec.alg || spec.y0.algebra() != spec.alg)
        throw AlgebraMismatch("differential spec: initial data in the wrong algebra");
}

inline int form_x_degree(const MultilinearForm<Rational>& f) {
    int deg = 0;
    for (const auto& w : f.words) {
        int d = 0;
        for (const auto& z : w.slots)
            if (z.dir == 0) ++d;
        for (const auto& seg : w.segs)
            if (seg->has_var) d += poly_degree(f.alg, seg);
        deg = std::max(deg, d);
    }
    return deg;
}

/// First slot transposition (lexicographic) under which the form is not
/// invariant, together with the nonzero difference.
inline std::optional<IntegrabilityWitness> asymmetry_witness(const MultilinearForm<Rational>& f,
                                                             int order) {
    for (int i = 1; i <= f.order; ++i)
        for (int j = i + 1; j <= f.order; ++j) {
            std::vector<int> perm(f.order + 1);
            for (int k = 1; k <= f.order; ++k) perm[k] = k;
            std::swap(perm[i], perm[j]);
            MultilinearForm<Rational> relabeled = form_relabel(f, perm);
            MultilinearForm<Rational> diff = relabeled;
            for (const auto& w : f.words) {
                FormWord<Rational> neg = w;
                neg.prefactor = -neg.prefactor;
                diff.words.push_back(std::move(neg));
            }
            if (!form_is_zero(diff)) {
                normalize_form(diff);
                return IntegrabilityWitness{order, {i, j}, std::move(diff)};
            }
        }
    return std::nullopt;
}

} // namespace detail

/// The order-m derivative the specification induces on its unknown:
/// the right-hand side differentiated m-1 more times in x, each time with
/// a fresh direction label.
inline MultilinearForm<Rational> induced_derivative(const DifferentialSpec& spec, int m) {
    detail::validate_spec(spec);
    if (m < 1) throw Error("induced_derivative: order must be >= 1");
    MultilinearForm<Rational> f = spec.rhs;
    normalize_form(f);
    for (int j = 2; j <= m; ++j) {
        f = form_partial(f, j);
        normalize_form(f);
    }
    return f;
}

/// Verify a candidate solution exactly: its derivative must expand to the
/// right-hand side and it must meet the initial value.
inline bool verify_solution(const ExprPtr<Rational>& y, const DifferentialSpec& spec) {
    detail::validate_spec(spec);
    if (!is_polynomial(y)) return false;
    MultilinearForm<Rational> dy = derivative(spec.alg, y, 1);
    if (!form_equal(dy, spec.rhs)) return false;
    return eval(y, spec.x0) == spec.y0;
}

/// Integrate by power-series reconstruction. Every induced derivative up
/// to degree+1 must be slot-symmetric; the first asymmetry rejects the
/// specification with a witness. A produced solution is always verified
/// against the right-hand side before it is returned.
inline IntegrationResult integrate(const DifferentialSpec& spec) {
    detail::validate_spec(spec);
    IntegrationResult result;

    MultilinearForm<Rational> f = spec.rhs;
    normalize_form(f);
    int deg = detail::form_x_degree(f);

    std::vector<MultilinearForm<Rational>> chain;
    chain.push_back(f);
    for (int m = 2; m <= deg + 1; ++m) {
        MultilinearForm<Rational> next = form_partial(chain.back(), m);
        normalize_form(next);
        if (symmetry_class(next) != SymmetryClass::symmetric) {
            auto witness = detail::asymmetry_witness(next, m);
            if (!witness) throw Error("integrate: asymmetric derivative without witness");
            result.integrable = false;
            result.witness = std::move(witness);
            return result;
        }
        chain.push_back(std::move(next));
    }

    std::vector<ExprPtr<Rational>> terms;
    terms.push_back(expr_const(spec.y0));
    Rational mfact(1);
    for (std::size_t idx = 0; idx < chain.size(); ++idx) {
        int m = static_cast<int>(idx) + 1;
        mfact *= Rational(m);
        Rational inv = Rational(1) / mfact;
        for (const auto& w : chain[idx].words)
            terms.push_back(word_at_point(w, spec.x0, inv));
    }
    ExprPtr<Rational> y = expr_sum(std::move(terms));
    y = monomials_to_expr(spec.alg, to_monomials(spec.alg, y));

    if (!verify_solution(y, spec))
        throw Error("integrate: symmetric derivative chain produced a non-solution");
    result.integrable = true;
    result.solution = y;
    return result;
}

} // namespace ncalc
