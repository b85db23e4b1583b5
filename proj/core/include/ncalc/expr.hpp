#pragma once

#include "ncalc/element.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ncalc {

/// Expression tree in one algebra variable. Immutable; subtrees are shared.
template <class S>
struct Expr {
    enum class Kind { Const, Var, Sum, Prod, Inverse };

    Kind kind;
    std::optional<Element<S>> value;                    // Const
    std::vector<std::shared_ptr<const Expr>> children;  // Sum, Prod, Inverse
    bool has_var = false;
};

template <class S>
using ExprPtr = std::shared_ptr<const Expr<S>>;

template <class S>
ExprPtr<S> expr_const(Element<S> value) {
    auto e = std::make_shared<Expr<S>>();
    e->kind = Expr<S>::Kind::Const;
    e->value = std::move(value);
    return e;
}

template <class S>
ExprPtr<S> expr_scalar(const AlgebraPtr<S>& alg, const S& s) {
    return expr_const(s * Element<S>::unit(alg));
}

template <class S>
ExprPtr<S> expr_var() {
    auto e = std::make_shared<Expr<S>>();
    e->kind = Expr<S>::Kind::Var;
    e->has_var = true;
    return e;
}

template <class S>
ExprPtr<S> expr_sum(std::vector<ExprPtr<S>> children) {
    std::vector<ExprPtr<S>> flat;
    for (auto& c : children) {
        if (c->kind == Expr<S>::Kind::Sum)
            flat.insert(flat.end(), c->children.begin(), c->children.end());
        else
            flat.push_back(std::move(c));
    }
    if (flat.size() == 1) return flat[0];
    auto e = std::make_shared<Expr<S>>();
    e->kind = Expr<S>::Kind::Sum;
    for (const auto& c : flat) e->has_var = e->has_var || c->has_var;
    e->children = std::move(flat);
    return e;
}

template <class S>
ExprPtr<S> expr_prod(std::vector<ExprPtr<S>> children) {
    std::vector<ExprPtr<S>> flat;
    for (auto& c : children) {
        if (c->kind == Expr<S>::Kind::Prod)
            flat.insert(flat.end(), c->children.begin(), c->children.end());
        else
            flat.push_back(std::move(c));
    }
    // Unit constants are neutral; keep them only when nothing else remains.
    std::vector<ExprPtr<S>> kept;
    for (auto& c : flat) {
        bool is_unit = c->kind == Expr<S>::Kind::Const && c->value->algebra()->flags().unital &&
                       *c->value == Element<S>::unit(c->value->algebra());
        if (!is_unit) kept.push_back(std::move(c));
    }
    if (kept.empty() && !flat.empty()) return flat[0];
    if (kept.size() == 1) return kept[0];
    auto e = std::make_shared<Expr<S>>();
    e->kind = Expr<S>::Kind::Prod;
    for (const auto& c : kept) e->has_var = e->has_var || c->has_var;
    e->children = std::move(kept);
    return e;
}

template <class S>
ExprPtr<S> expr_prod(ExprPtr<S> a, ExprPtr<S> b) {
    std::vector<ExprPtr<S>> cs{std::move(a), std::move(b)};
    return expr_prod(std::move(cs));
}

template <class S>
ExprPtr<S> expr_inv(ExprPtr<S> child) {
    auto e = std::make_shared<Expr<S>>();
    e->kind = Expr<S>::Kind::Inverse;
    e->has_var = child->has_var;
    e->children.push_back(std::move(child));
    return e;
}

template <class S>
ExprPtr<S> expr_pow(const ExprPtr<S>& base, unsigned n, const AlgebraPtr<S>& alg) {
    if (n == 0) return expr_const(Element<S>::unit(alg));
    std::vector<ExprPtr<S>> cs(n, base);
    return expr_prod(std::move(cs));
}

template <class S>
bool is_polynomial(const ExprPtr<S>& e) {
    if (e->kind == Expr<S>::Kind::Inverse) return false;
    for (const auto& c : e->children)
        if (!is_polynomial(c)) return false;
    return true;
}

template <class S>
std::string expr_to_string(const ExprPtr<S>& e);

template <class S>
Element<S> eval(const ExprPtr<S>& e, const Element<S>& x) {
    switch (e->kind) {
    case Expr<S>::Kind::Const:
        if (e->value->algebra() != x.algebra())
            throw AlgebraMismatch("expression constant belongs to a different algebra");
        return *e->value;
    case Expr<S>::Kind::Var:
        return x;
    case Expr<S>::Kind::Sum: {
        Element<S> acc = Element<S>::zero(x.algebra());
        for (const auto& c : e->children) acc = acc + eval(c, x);
        return acc;
    }
    case Expr<S>::Kind::Prod: {
        Element<S> acc = Element<S>::unit(x.algebra());
        bool first = true;
        for (const auto& c : e->children) {
            Element<S> v = eval(c, x);
            acc = first ? v : acc * v;
            first = false;
        }
        return acc;
    }
    case Expr<S>::Kind::Inverse:
        try {
            return eval(e->children[0], x).inverse();
        } catch (const NotInvertible& err) {
            throw NotInvertible(std::string(err.what()) + " while evaluating " +
                                expr_to_string(e));
        }
    }
    throw Error("eval: unreachable");
}

/// Replace the variable by another expression.
template <class S>
ExprPtr<S> expr_substitute(const ExprPtr<S>& e, const ExprPtr<S>& replacement) {
    if (!e->has_var) return e;
    switch (e->kind) {
    case Expr<S>::Kind::Var:
        return replacement;
    case Expr<S>::Kind::Sum: {
        std::vector<ExprPtr<S>> cs;
        for (const auto& c : e->children) cs.push_back(expr_substitute(c, replacement));
        return expr_sum(std::move(cs));
    }
    case Expr<S>::Kind::Prod: {
        std::vector<ExprPtr<S>> cs;
        for (const auto& c : e->children) cs.push_back(expr_substitute(c, replacement));
        return expr_prod(std::move(cs));
    }
    case Expr<S>::Kind::Inverse:
        return expr_inv(expr_substitute(e->children[0], replacement));
    default:
        return e;
    }
}

// --- polynomial normal form ---------------------------------------------------

/// A monomial a_0 x a_1 x ... x a_n with a scalar prefactor. seps.size() is
/// the degree plus one.
template <class S>
struct Monomial {
    S coeff;
    std::vector<Element<S>> seps;

    int degree() const { return static_cast<int>(seps.size()) - 1; }
};

namespace detail {

/// Pull the leading nonzero coordinate of each separator into the
/// prefactor, so that scaled copies of one word merge.
template <class S>
bool normalize_monomial(Monomial<S>& m) {
    if (scalar_traits<S>::is_zero(m.coeff)) return false;
    for (auto& sep : m.seps) {
        if (sep.is_zero()) return false;
        const S* lead = nullptr;
        for (int i = 0; i < sep.dim(); ++i)
            if (!scalar_traits<S>::is_zero(sep[i])) {
                lead = &sep[i];
                break;
            }
        S factor = *lead;
        m.coeff *= factor;
        S inv = scalar_traits<S>::one();
        inv /= factor;
        sep = inv * sep;
    }
    return !scalar_traits<S>::is_zero(m.coeff);
}

template <class S>
int compare_monomial_words(const Monomial<S>& a, const Monomial<S>& b) {
    if (a.seps.size() != b.seps.size()) return a.seps.size() < b.seps.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.seps.size(); ++i)
        for (int c = 0; c < a.seps[i].dim(); ++c) {
            if (a.seps[i][c] == b.seps[i][c]) continue;
            return a.seps[i][c] < b.seps[i][c] ? -1 : 1;
        }
    return 0;
}

template <class S>
void combine_monomials(std::vector<Monomial<S>>& ms) {
    std::vector<Monomial<S>> kept;
    for (auto& m : ms)
        if (normalize_monomial(m)) kept.push_back(std::move(m));
    std::sort(kept.begin(), kept.end(), [](const Monomial<S>& a, const Monomial<S>& b) {
        return compare_monomial_words(a, b) < 0;
    });
    std::vector<Monomial<S>> out;
    for (auto& m : kept) {
        if (!out.empty() && compare_monomial_words(out.back(), m) == 0)
            out.back().coeff += m.coeff;
        else
            out.push_back(std::move(m));
    }
    std::erase_if(out, [](const Monomial<S>& m) { return scalar_traits<S>::is_zero(m.coeff); });
    ms = std::move(out);
}

} // namespace detail

/// Expand a polynomial expression into normalized monomials. Inverse nodes
/// are rejected; the algebra must be unital.
template <class S>
std::vector<Monomial<S>> to_monomials(const AlgebraPtr<S>& alg, const ExprPtr<S>& e) {
    if (!alg->flags().unital) throw Error("monomial form requires a unital algebra");
    std::vector<Monomial<S>> out;
    switch (e->kind) {
    case Expr<S>::Kind::Const:
        if (e->value->algebra() != alg)
            throw AlgebraMismatch("expression constant belongs to a different algebra");
        out.push_back({scalar_traits<S>::one(), {*e->value}});
        break;
    case Expr<S>::Kind::Var:
        out.push_back({scalar_traits<S>::one(), {Element<S>::unit(alg), Element<S>::unit(alg)}});
        break;
    case Expr<S>::Kind::Sum:
        for (const auto& c : e->children) {
            auto part = to_monomials(alg, c);
            out.insert(out.end(), part.begin(), part.end());
        }
        break;
    case Expr<S>::Kind::Prod: {
        out.push_back({scalar_traits<S>::one(), {Element<S>::unit(alg)}});
        for (const auto& c : e->children) {
            auto part = to_monomials(alg, c);
            std::vector<Monomial<S>> next;
            for (const auto& m1 : out)
                for (const auto& m2 : part) {
                    Monomial<S> m;
                    m.coeff = m1.coeff * m2.coeff;
                    m.seps = m1.seps;
                    m.seps.back() = m.seps.back() * m2.seps.front();
                    m.seps.insert(m.seps.end(), m2.seps.begin() + 1, m2.seps.end());
                    next.push_back(std::move(m));
                }
            out = std::move(next);
        }
        break;
    }
    case Expr<S>::Kind::Inverse:
        throw Error("monomial form is defined for polynomial expressions only");
    }
    detail::combine_monomials(out);
    return out;
}

template <class S>
ExprPtr<S> monomials_to_expr(const AlgebraPtr<S>& alg, const std::vector<Monomial<S>>& ms) {
    std::vector<ExprPtr<S>> terms;
    for (const auto& m : ms) {
        std::vector<ExprPtr<S>> factors;
        factors.push_back(expr_const(m.coeff * m.seps[0]));
        for (std::size_t i = 1; i < m.seps.size(); ++i) {
            factors.push_back(expr_var<S>());
            factors.push_back(expr_const(m.seps[i]));
        }
        terms.push_back(expr_prod(std::move(factors)));
    }
    if (terms.empty()) return expr_const(Element<S>::zero(alg));
    return expr_sum(std::move(terms));
}

/// Structural degree in the variable (maximum over monomials); 0 for
/// constants. Polynomial expressions only.
template <class S>
int poly_degree(const AlgebraPtr<S>& alg, const ExprPtr<S>& e) {
    int deg = 0;
    for (const auto& m : to_monomials(alg, e)) deg = std::max(deg, m.degree());
    return deg;
}

// --- printing -----------------------------------------------------------------

namespace detail {

template <class S>
void print_element_factor(std::ostream& os, const Element<S>& v, bool& printed) {
    if (v.algebra()->flags().unital && v == Element<S>::unit(v.algebra())) return;
    std::string s = v.to_string();
    bool atom = s.find(' ') == std::string::npos && s.find('+') == std::string::npos;
    if (printed) os << " ";
    if (atom)
        os << s;
    else
        os << "(" << s << ")";
    printed = true;
}

} // namespace detail

/// Render monomials like "x^3", "2 i x j", "-1/2 x i x".
template <class S>
std::string monomials_to_string(const std::vector<Monomial<S>>& ms) {
    if (ms.empty()) return "0";
    std::ostringstream os;
    for (std::size_t t = 0; t < ms.size(); ++t) {
        Monomial<S> m = ms[t];
        m.seps[0] = m.coeff * m.seps[0];
        if (t > 0) os << " + ";
        // Tokens: separators (unit ones hidden) interleaved with x's;
        // runs of consecutive x collapse to a power.
        std::ostringstream body;
        bool printed = false;
        int pending_x = 0;
        auto flush_x = [&] {
            if (pending_x == 0) return;
            if (printed) body << " ";
            body << (pending_x == 1 ? "x" : "x^" + std::to_string(pending_x));
            printed = true;
            pending_x = 0;
        };
        for (std::size_t i = 0; i < m.seps.size(); ++i) {
            bool unit_sep = m.seps[i] == Element<S>::unit(m.seps[i].algebra());
            if (!unit_sep) {
                flush_x();
                detail::print_element_factor(body, m.seps[i], printed);
            }
            if (i + 1 < m.seps.size()) ++pending_x;
        }
        flush_x();
        std::string s = body.str();
        if (s.empty()) s = "1";
        os << s;
    }
    return os.str();
}

template <class S>
std::string expr_to_string(const ExprPtr<S>& e) {
    switch (e->kind) {
    case Expr<S>::Kind::Const: {
        std::string s = e->value->to_string();
        if (s.find(' ') != std::string::npos) return "(" + s + ")";
        return s;
    }
    case Expr<S>::Kind::Var:
        return "x";
    case Expr<S>::Kind::Sum: {
        std::string s;
        for (std::size_t i = 0; i < e->children.size(); ++i) {
            if (i) s += " + ";
            s += expr_to_string(e->children[i]);
        }
        return s;
    }
    case Expr<S>::Kind::Prod: {
        std::string s;
        for (std::size_t i = 0; i < e->children.size(); ++i) {
            if (i) s += "*";
            const auto& c = e->children[i];
            bool wrap = c->kind == Expr<S>::Kind::Sum;
            s += wrap ? "(" + expr_to_string(c) + ")" : expr_to_string(c);
        }
        return s;
    }
    case Expr<S>::Kind::Inverse:
        return "inv(" + expr_to_string(e->children[0]) + ")";
    }
    return "?";
}

/// Convert an exact expression to its double twin.
inline ExprPtr<double> to_double_expr(const ExprPtr<Rational>& e, const AlgebraPtr<double>& alg) {
    switch (e->kind) {
    case Expr<Rational>::Kind::Const:
        return expr_const(to_double_element(*e->value, alg));
    case Expr<Rational>::Kind::Var:
        return expr_var<double>();
    case Expr<Rational>::Kind::Sum: {
        std::vector<ExprPtr<double>> cs;
        for (const auto& c : e->children) cs.push_back(to_double_expr(c, alg));
        return expr_sum(std::move(cs));
    }
    case Expr<Rational>::Kind::Prod: {
        std::vector<ExprPtr<double>> cs;
        for (const auto& c : e->children) cs.push_back(to_double_expr(c, alg));
        return expr_prod(std::move(cs));
    }
    case Expr<Rational>::Kind::Inverse:
        return expr_inv(to_double_expr(e->children[0], alg));
    }
    throw Error("to_double_expr: unreachable");
}

} // namespace ncalc
