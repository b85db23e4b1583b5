#pragma once

#include "ncalc/coordpoly.hpp"
#include "ncalc/expr.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ncalc {

/// One slot of an interleaved word: dir == 0 is the variable x itself,
/// dir == j >= 1 is the labelled direction h_j.
struct Slot {
    int dir = 0;
    friend bool operator==(const Slot&, const Slot&) = default;
};

/// A word a_0 z_1 a_1 z_2 ... z_n a_n with a scalar prefactor. Each z_i is
/// a slot; the a_i are expressions in x (plain constants for polynomial
/// forms, general subtrees once inverses are involved). Products evaluate
/// left to right.
template <class S>
struct FormWord {
    S prefactor;
    std::vector<ExprPtr<S>> segs; // slots.size() + 1 entries
    std::vector<Slot> slots;
};

/// Derivative form of some order m: a finite sum of interleaved words in
/// which every direction label 1..m appears exactly once per word.
/// Evaluation is linear in each direction.
template <class S>
struct MultilinearForm {
    AlgebraPtr<S> alg;
    int order = 0;
    std::vector<FormWord<S>> words;

    bool structurally_zero() const { return words.empty(); }
};

// --- basic word/form utilities ----------------------------------------------

namespace detail {

template <class S>
bool word_has_const_segs(const FormWord<S>& w) {
    for (const auto& s : w.segs)
        if (s->kind != Expr<S>::Kind::Const) return false;
    return true;
}

/// Rescale every constant segment to leading coordinate 1, folding the
/// factors into the prefactor. Returns false when the word is zero.
/// Opaque (non-constant) segments are left alone.
template <class S>
bool normalize_word(FormWord<S>& w) {
    if (scalar_traits<S>::is_zero(w.prefactor)) return false;
    if (!word_has_const_segs(w)) return true;
    for (auto& seg : w.segs) {
        const Element<S>& v = *seg->value;
        const S* lead = nullptr;
        for (int i = 0; i < v.dim(); ++i)
            if (!scalar_traits<S>::is_zero(v[i])) {
                lead = &v[i];
                break;
            }
        if (!lead) return false; // zero segment annihilates the word
        if (scalar_traits<S>::is_zero(*lead - scalar_traits<S>::one())) continue;
        S factor = *lead;
        S inv = scalar_traits<S>::one();
        inv /= factor;
        w.prefactor *= factor;
        seg = expr_const(inv * v);
    }
    return !scalar_traits<S>::is_zero(w.prefactor);
}

/// Comparable key of a normalized constant-segment word: segments and slot
/// pattern, optionally with the prefactor.
template <class S>
std::optional<std::string> word_key(const FormWord<S>& w, bool with_prefactor) {
    if (!word_has_const_segs(w)) return std::nullopt;
    std::ostringstream os;
    if (with_prefactor) os << scalar_traits<S>::to_string(w.prefactor) << "|";
    for (std::size_t i = 0; i < w.segs.size(); ++i) {
        const Element<S>& v = *w.segs[i]->value;
        os << "[";
        for (int c = 0; c < v.dim(); ++c) os << scalar_traits<S>::to_string(v[c]) << ",";
        os << "]";
        // Direction slots sort before X so that h-leading words print first.
        if (i < w.slots.size()) {
            if (w.slots[i].dir == 0)
                os << "x ";
            else
                os << "h" << w.slots[i].dir << " ";
        }
    }
    return os.str();
}

} // namespace detail

/// Merge identical constant-segment words (prefactors add) and drop zero
/// words; the word list ends in a deterministic order.
template <class S>
void normalize_form(MultilinearForm<S>& f) {
    std::vector<std::pair<std::string, FormWord<S>>> keyed;
    std::vector<FormWord<S>> opaque;
    for (auto& w : f.words) {
        if (!detail::normalize_word(w)) continue;
        auto key = detail::word_key(w, false);
        if (key)
            keyed.emplace_back(std::move(*key), std::move(w));
        else
            opaque.push_back(std::move(w));
    }
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<FormWord<S>> out;
    std::size_t i = 0;
    while (i < keyed.size()) {
        FormWord<S> acc = std::move(keyed[i].second);
        std::size_t j = i + 1;
        for (; j < keyed.size() && keyed[j].first == keyed[i].first; ++j)
            acc.prefactor += keyed[j].second.prefactor;
        if (!scalar_traits<S>::is_zero(acc.prefactor)) out.push_back(std::move(acc));
        i = j;
    }
    for (auto& w : opaque) out.push_back(std::move(w));
    f.words = std::move(out);
}

template <class S>
Element<S> eval_word(const FormWord<S>& w, const Element<S>& x,
                     const std::vector<Element<S>>& hs) {
    Element<S> acc = eval(w.segs[0], x);
    for (std::size_t i = 0; i < w.slots.size(); ++i) {
        const Element<S>& z = w.slots[i].dir == 0 ? x : hs[w.slots[i].dir - 1];
        acc = acc * z;
        acc = acc * eval(w.segs[i + 1], x);
    }
    return w.prefactor * acc;
}

/// Evaluate the form at x with directions h_1..h_m.
template <class S>
Element<S> eval_form(const MultilinearForm<S>& f, const Element<S>& x,
                     const std::vector<Element<S>>& hs) {
    if (static_cast<int>(hs.size()) != f.order)
        throw Error("eval_form: expected " + std::to_string(f.order) + " directions, got " +
                    std::to_string(hs.size()));
    Element<S> acc = Element<S>::zero(f.alg);
    for (const auto& w : f.words) acc = acc + eval_word(w, x, hs);
    return acc;
}

/// Relabel slots: `perm[j]` is the new label of direction j (1-indexed,
/// perm[0] unused). X slots are untouched.
template <class S>
MultilinearForm<S> form_relabel(const MultilinearForm<S>& f, const std::vector<int>& perm) {
    MultilinearForm<S> out = f;
    for (auto& w : out.words)
        for (auto& z : w.slots)
            if (z.dir != 0) z.dir = perm[z.dir];
    return out;
}

// --- derivative: injection enumeration (polynomial route) --------------------

namespace detail {

template <class S>
void enumerate_injections(const Monomial<S>& mono, const AlgebraPtr<S>& alg, int m,
                          std::vector<int>& positions, std::vector<bool>& used,
                          std::vector<FormWord<S>>& out) {
    int n = mono.degree();
    if (static_cast<int>(positions.size()) == m) {
        FormWord<S> w;
        w.prefactor = mono.coeff;
        w.segs.reserve(mono.seps.size());
        for (const auto& sep : mono.seps) w.segs.push_back(expr_const(sep));
        w.slots.assign(n, Slot{0});
        for (int j = 0; j < m; ++j) w.slots[positions[j]].dir = j + 1;
        out.push_back(std::move(w));
        return;
    }
    for (int pos = 0; pos < n; ++pos) {
        if (used[pos]) continue;
        used[pos] = true;
        positions.push_back(pos);
        enumerate_injections(mono, alg, m, positions, used, out);
        positions.pop_back();
        used[pos] = false;
    }
}

} // namespace detail

template <class S>
MultilinearForm<S> expr_partial(const AlgebraPtr<S>& alg, const ExprPtr<S>& e, int dir);

template <class S>
MultilinearForm<S> form_partial(const MultilinearForm<S>& f, int fresh_dir);

/// Derivative of order m as a multilinear form. Polynomial expressions use
/// the direct sum over injective slot assignments (position j of the word
/// carries direction phi(j), the rest stay x); this convention makes the
/// order-n derivative of a degree-n monomial restore n! copies of the
/// monomial on the diagonal. Expressions with inverses fall back to the
/// iterated rule-based route.
template <class S>
MultilinearForm<S> derivative(const AlgebraPtr<S>& alg, const ExprPtr<S>& e, int m) {
    if (m < 1) throw Error("derivative: order must be >= 1");
    if (is_polynomial(e)) {
        MultilinearForm<S> f;
        f.alg = alg;
        f.order = m;
        for (const auto& mono : to_monomials(alg, e)) {
            if (mono.degree() < m) continue;
            std::vector<int> positions;
            std::vector<bool> used(mono.degree(), false);
            detail::enumerate_injections(mono, alg, m, positions, used, f.words);
        }
        normalize_form(f);
        return f;
    }
    MultilinearForm<S> f = expr_partial(alg, e, 1);
    for (int j = 2; j <= m; ++j) f = form_partial(f, j);
    f.order = m;
    return f;
}

// --- derivative: rule-based route ---------------------------------------------

/// Order-1 derivative of an arbitrary expression with direction label
/// `dir`, by the sum, product and inverse rules; the inverse rule is
/// d(u^-1) = -u^-1 du u^-1 applied recursively.
template <class S>
MultilinearForm<S> expr_partial(const AlgebraPtr<S>& alg, const ExprPtr<S>& e, int dir) {
    MultilinearForm<S> f;
    f.alg = alg;
    f.order = dir;
    switch (e->kind) {
    case Expr<S>::Kind::Const:
        break;
    case Expr<S>::Kind::Var: {
        FormWord<S> w;
        w.prefactor = scalar_traits<S>::one();
        w.segs = {expr_const(Element<S>::unit(alg)), expr_const(Element<S>::unit(alg))};
        w.slots = {Slot{dir}};
        f.words.push_back(std::move(w));
        break;
    }
    case Expr<S>::Kind::Sum:
        for (const auto& c : e->children) {
            MultilinearForm<S> part = expr_partial(alg, c, dir);
            f.words.insert(f.words.end(), part.words.begin(), part.words.end());
        }
        break;
    case Expr<S>::Kind::Prod: {
        const auto& cs = e->children;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            MultilinearForm<S> part = expr_partial(alg, cs[i], dir);
            if (part.words.empty()) continue;
            ExprPtr<S> left, right;
            if (i > 0) left = expr_prod(std::vector<ExprPtr<S>>(cs.begin(), cs.begin() + i));
            if (i + 1 < cs.size())
                right = expr_prod(std::vector<ExprPtr<S>>(cs.begin() + i + 1, cs.end()));
            for (auto& w : part.words) {
                if (left) w.segs.front() = expr_prod(left, w.segs.front());
                if (right) w.segs.back() = expr_prod(w.segs.back(), right);
                f.words.push_back(std::move(w));
            }
        }
        break;
    }
    case Expr<S>::Kind::Inverse: {
        ExprPtr<S> inv = e; // e is already inv(u)
        MultilinearForm<S> part = expr_partial(alg, e->children[0], dir);
        for (auto& w : part.words) {
            w.prefactor = -w.prefactor;
            w.segs.front() = expr_prod(inv, w.segs.front());
            w.segs.back() = expr_prod(w.segs.back(), inv);
            f.words.push_back(std::move(w));
        }
        break;
    }
    }
    return f;
}

/// Differentiate a form once more in x, with a fresh direction label:
/// every X slot in turn becomes the new direction, and every segment with
/// x-dependence is differentiated and spliced in place.
template <class S>
MultilinearForm<S> form_partial(const MultilinearForm<S>& f, int fresh_dir) {
    MultilinearForm<S> out;
    out.alg = f.alg;
    out.order = std::max(f.order + 1, fresh_dir);
    for (const auto& w : f.words) {
        for (std::size_t i = 0; i < w.slots.size(); ++i) {
            if (w.slots[i].dir != 0) continue;
            FormWord<S> nw = w;
            nw.slots[i].dir = fresh_dir;
            out.words.push_back(std::move(nw));
        }
        for (std::size_t si = 0; si < w.segs.size(); ++si) {
            if (!w.segs[si]->has_var) continue;
            MultilinearForm<S> dseg = expr_partial(f.alg, w.segs[si], fresh_dir);
            for (const auto& iw : dseg.words) {
                FormWord<S> nw;
                nw.prefactor = w.prefactor * iw.prefactor;
                nw.segs.assign(w.segs.begin(), w.segs.begin() + si);
                nw.segs.insert(nw.segs.end(), iw.segs.begin(), iw.segs.end());
                nw.segs.insert(nw.segs.end(), w.segs.begin() + si + 1, w.segs.end());
                nw.slots.assign(w.slots.begin(), w.slots.begin() + si);
                nw.slots.insert(nw.slots.end(), iw.slots.begin(), iw.slots.end());
                nw.slots.insert(nw.slots.end(), w.slots.begin() + si, w.slots.end());
                out.words.push_back(std::move(nw));
            }
        }
    }
    return out;
}

/// Independent construction of the order-m derivative of a polynomial by
/// the recursion on the last factor of each monomial:
/// d^m (f(x) x a) = d^m f . x . a + sum_l d^{m-1} f(labels minus l) . h_l . a.
/// Used to cross-check the injection route.
template <class S>
MultilinearForm<S> derivative_recursive(const AlgebraPtr<S>& alg, const ExprPtr<S>& e, int m) {
    if (m < 1) throw Error("derivative_recursive: order must be >= 1");
    if (!is_polynomial(e)) throw Error("derivative_recursive: polynomial expressions only");

    struct Rec {
        const AlgebraPtr<S>& alg;
        // Words of the order-|labels| derivative of a_0 x ... x a_n.
        std::vector<FormWord<S>> run(const std::vector<Element<S>>& seps,
                                     const std::vector<int>& labels) {
            std::vector<FormWord<S>> out;
            int n = static_cast<int>(seps.size()) - 1;
            if (labels.empty()) {
                FormWord<S> w;
                w.prefactor = scalar_traits<S>::one();
                for (const auto& s : seps) w.segs.push_back(expr_const(s));
                w.slots.assign(n, Slot{0});
                out.push_back(std::move(w));
                return out;
            }
            if (n == 0) return out; // derivative of a constant vanishes
            std::vector<Element<S>> head(seps.begin(), seps.end() - 1);
            ExprPtr<S> tail = expr_const(seps.back());
            for (auto& w : run(head, labels)) {
                w.segs.push_back(tail);
                w.slots.push_back(Slot{0});
                out.push_back(std::move(w));
            }
            for (std::size_t li = 0; li < labels.size(); ++li) {
                std::vector<int> rest = labels;
                rest.erase(rest.begin() + li);
                for (auto& w : run(head, rest)) {
                    w.segs.push_back(tail);
                    w.slots.push_back(Slot{labels[li]});
                    out.push_back(std::move(w));
                }
            }
            return out;
        }
    } rec{alg};

    std::vector<int> labels(m);
    for (int j = 0; j < m; ++j) labels[j] = j + 1;

    MultilinearForm<S> f;
    f.alg = alg;
    f.order = m;
    for (const auto& mono : to_monomials(alg, e)) {
        for (auto& w : rec.run(mono.seps, labels)) {
            w.prefactor *= mono.coeff;
            f.words.push_back(std::move(w));
        }
    }
    normalize_form(f);
    return f;
}

// --- canonical expansion and symmetry -----------------------------------------

/// Expand the form into coordinate polynomials over the x block and one
/// block per direction. Exact path; segments must be polynomial.
inline SymbolicElement expand_form(const MultilinearForm<Rational>& f) {
    int d = f.alg->dim();
    std::size_t nvars = static_cast<std::size_t>(f.order + 1) * d;
    SymbolicElement acc = sym_zero(d, nvars);
    for (const auto& w : f.words) {
        SymbolicElement cur = expand_expr(f.alg, w.segs[0], f.order);
        for (std::size_t i = 0; i < w.slots.size(); ++i) {
            cur = sym_mul(*f.alg, cur, sym_block(d, nvars, w.slots[i].dir));
            cur = sym_mul(*f.alg, cur, expand_expr(f.alg, w.segs[i + 1], f.order));
        }
        for (auto& p : cur.coords) p.scale(w.prefactor);
        acc += cur;
    }
    return acc;
}

inline bool form_equal(const MultilinearForm<Rational>& a, const MultilinearForm<Rational>& b) {
    SymbolicElement d = expand_form(a);
    d -= expand_form(b);
    return d.is_zero();
}

inline bool form_is_zero(const MultilinearForm<Rational>& f) {
    if (f.structurally_zero()) return true;
    return expand_form(f).is_zero();
}

enum class SymmetryClass { symmetric, skew, neither };

namespace detail {

inline std::optional<std::vector<std::string>> sorted_word_keys(
    const MultilinearForm<Rational>& f) {
    std::vector<std::string> keys;
    keys.reserve(f.words.size());
    for (auto w : f.words) {
        if (!normalize_word(w)) continue;
        auto k = word_key(w, true);
        if (!k) return std::nullopt;
        keys.push_back(std::move(*k));
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

} // namespace detail

/// Decide symmetry under slot exchange, exactly. A fast structural pass
/// (word multiset invariance) certifies symmetric forms without expansion;
/// anything else is settled by comparing canonical expansions under every
/// transposition, with signs for the skew test.
inline SymmetryClass symmetry_class(const MultilinearForm<Rational>& f) {
    if (f.order <= 1) return SymmetryClass::symmetric;

    std::vector<std::pair<int, int>> transpositions;
    for (int i = 1; i <= f.order; ++i)
        for (int j = i + 1; j <= f.order; ++j) transpositions.emplace_back(i, j);

    auto base_keys = detail::sorted_word_keys(f);
    bool all_structural = base_keys.has_value();
    if (all_structural) {
        for (const auto& [i, j] : transpositions) {
            std::vector<int> perm(f.order + 1);
            for (int k = 1; k <= f.order; ++k) perm[k] = k;
            std::swap(perm[i], perm[j]);
            auto keys = detail::sorted_word_keys(form_relabel(f, perm));
            if (!keys || *keys != *base_keys) {
                all_structural = false;
                break;
            }
        }
        if (all_structural) return SymmetryClass::symmetric;
    }

    SymbolicElement base = expand_form(f);
    int d = f.alg->dim();
    bool symmetric = true, skew = true;
    for (const auto& [i, j] : transpositions) {
        std::vector<int> block_map(f.order + 1);
        for (int k = 0; k <= f.order; ++k) block_map[k] = k;
        std::swap(block_map[i], block_map[j]);
        SymbolicElement permuted = base;
        for (auto& p : permuted.coords) p = p.permute_blocks(block_map, d);
        SymbolicElement diff = permuted;
        diff -= base;
        if (!diff.is_zero()) symmetric = false;
        SymbolicElement sum = permuted;
        sum += base;
        if (!sum.is_zero()) skew = false;
        if (!symmetric && !skew) return SymmetryClass::neither;
    }
    if (symmetric) return SymmetryClass::symmetric;
    return skew ? SymmetryClass::skew : SymmetryClass::neither;
}

// --- Taylor reconstruction -----------------------------------------------------

/// The expression of one form word with x frozen at x0 and every direction
/// replaced by (x - x0).
template <class S>
ExprPtr<S> word_at_point(const FormWord<S>& w, const Element<S>& x0, const S& scale) {
    const AlgebraPtr<S>& alg = x0.algebra();
    ExprPtr<S> x0c = expr_const(x0);
    ExprPtr<S> hexpr = expr_sum(std::vector<ExprPtr<S>>{
        expr_var<S>(), expr_const(-x0)});
    std::vector<ExprPtr<S>> factors;
    factors.push_back(expr_scalar(alg, w.prefactor * scale));
    factors.push_back(expr_substitute(w.segs[0], x0c));
    for (std::size_t i = 0; i < w.slots.size(); ++i) {
        factors.push_back(w.slots[i].dir == 0 ? x0c : hexpr);
        factors.push_back(expr_substitute(w.segs[i + 1], x0c));
    }
    return expr_prod(std::move(factors));
}

/// Taylor polynomial of p at x0: sum over m of (1/m!) d^m p(x0) with every
/// slot set to (x - x0). For polynomials this reproduces p exactly.
template <class S>
ExprPtr<S> taylor(const ExprPtr<S>& p, const Element<S>& x0) {
    const AlgebraPtr<S>& alg = x0.algebra();
    if (!is_polynomial(p)) throw Error("taylor: polynomial expressions only");
    int deg = poly_degree(alg, p);
    std::vector<ExprPtr<S>> terms;
    terms.push_back(expr_const(eval(p, x0)));
    S mfact = scalar_traits<S>::one();
    for (int m = 1; m <= deg; ++m) {
        mfact *= scalar_traits<S>::from_int(m);
        S inv = scalar_traits<S>::one();
        inv /= mfact;
        MultilinearForm<S> f = derivative(alg, p, m);
        for (const auto& w : f.words) terms.push_back(word_at_point(w, x0, inv));
    }
    return expr_sum(std::move(terms));
}

// --- printing -------------------------------------------------------------------

template <class S>
std::string form_to_string(const MultilinearForm<S>& f) {
    if (f.words.empty()) return "0";
    std::ostringstream os;
    for (std::size_t t = 0; t < f.words.size(); ++t) {
        const auto& w = f.words[t];
        if (t > 0) os << " + ";
        bool printed = false;
        std::ostringstream body;
        if (!(w.prefactor == scalar_traits<S>::one())) {
            body << scalar_traits<S>::to_string(w.prefactor);
            printed = true;
        }
        for (std::size_t i = 0; i < w.segs.size(); ++i) {
            const auto& seg = w.segs[i];
            bool unit_seg = seg->kind == Expr<S>::Kind::Const &&
                            *seg->value == Element<S>::unit(f.alg);
            if (!unit_seg) {
                std::string s = expr_to_string(seg);
                if (s.find(' ') != std::string::npos && s.find('(') != 0) s = "(" + s + ")";
                if (printed) body << " ";
                body << s;
                printed = true;
            }
            if (i < w.slots.size()) {
                if (printed) body << " ";
                if (w.slots[i].dir == 0)
                    body << "x";
                else if (f.order == 1)
                    body << "h";
                else
                    body << "h" << w.slots[i].dir;
                printed = true;
            }
        }
        std::string s = body.str();
        os << (s.empty() ? "1" : s);
    }
    return os.str();
}

} // namespace ncalc
