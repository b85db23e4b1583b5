#pragma once

#include "ncalc/expr.hpp"

#include <cstdint>
#include <map>
#include <sstream>
#include <vector>

namespace ncalc {

/// Sparse commutative polynomial over the rationals in (nblocks+1)*dim
/// variables: block 0 holds the coordinates of x, block j >= 1 the
/// coordinates of the j-th direction. This is the exact-equality oracle:
/// two noncommutative expressions denote the same map iff their expansions
/// through the structural constants coincide coordinatewise.
class CoordPoly {
public:
    using Key = std::vector<std::uint16_t>;

    CoordPoly() = default;
    explicit CoordPoly(std::size_t nvars) : nvars_(nvars) {}

    static CoordPoly constant(std::size_t nvars, const Rational& c) {
        CoordPoly p(nvars);
        if (!c.is_zero()) p.terms_[Key(nvars, 0)] = c;
        return p;
    }
    static CoordPoly variable(std::size_t nvars, std::size_t index) {
        CoordPoly p(nvars);
        Key k(nvars, 0);
        k[index] = 1;
        p.terms_[std::move(k)] = Rational(1);
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Key, Rational>& terms() const { return terms_; }

    CoordPoly& operator+=(const CoordPoly& o) {
        for (const auto& [k, v] : o.terms_) add_term(k, v);
        return *this;
    }
    CoordPoly& operator-=(const CoordPoly& o) {
        for (const auto& [k, v] : o.terms_) add_term(k, -v);
        return *this;
    }
    friend CoordPoly operator+(CoordPoly a, const CoordPoly& b) { return a += b; }
    friend CoordPoly operator-(CoordPoly a, const CoordPoly& b) { return a -= b; }

    friend CoordPoly operator*(const CoordPoly& a, const CoordPoly& b) {
        CoordPoly out(a.nvars_);
        for (const auto& [ka, va] : a.terms_)
            for (const auto& [kb, vb] : b.terms_) {
                Key k = ka;
                for (std::size_t i = 0; i < k.size(); ++i) k[i] += kb[i];
                out.add_term(k, va * vb);
            }
        return out;
    }

    CoordPoly& scale(const Rational& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, v] : terms_) v *= s;
        return *this;
    }

    friend bool operator==(const CoordPoly& a, const CoordPoly& b) {
        return a.terms_ == b.terms_;
    }

    /// Rename variable blocks: entry j of `block_map` is the new block of
    /// old block j (block size = dim). Used for slot permutations.
    CoordPoly permute_blocks(const std::vector<int>& block_map, int dim) const {
        CoordPoly out(nvars_);
        for (const auto& [k, v] : terms_) {
            Key nk(nvars_, 0);
            for (std::size_t i = 0; i < k.size(); ++i) {
                if (k[i] == 0) continue;
                int block = static_cast<int>(i) / dim;
                int coord = static_cast<int>(i) % dim;
                nk[static_cast<std::size_t>(block_map[block]) * dim + coord] += k[i];
            }
            out.add_term(nk, v);
        }
        return out;
    }

    std::string to_string(int dim) const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, v] : terms_) {
            if (!first) os << " + ";
            os << v.to_string();
            for (std::size_t i = 0; i < k.size(); ++i) {
                if (k[i] == 0) continue;
                int block = static_cast<int>(i) / dim;
                int coord = static_cast<int>(i) % dim;
                os << (block == 0 ? " x" : " h" + std::to_string(block));
                os << "[" << coord << "]";
                if (k[i] > 1) os << "^" << k[i];
            }
            first = false;
        }
        return os.str();
    }

private:
    void add_term(const Key& k, const Rational& v) {
        if (v.is_zero()) return;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, v);
        } else {
            it->second += v;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    std::size_t nvars_ = 0;
    std::map<Key, Rational> terms_;
};

/// A symbolic algebra element: one coordinate polynomial per basis vector.
struct SymbolicElement {
    std::vector<CoordPoly> coords;

    bool is_zero() const {
        for (const auto& p : coords)
            if (!p.is_zero()) return false;
        return true;
    }
    friend bool operator==(const SymbolicElement& a, const SymbolicElement& b) {
        return a.coords == b.coords;
    }
    SymbolicElement& operator+=(const SymbolicElement& o) {
        for (std::size_t i = 0; i < coords.size(); ++i) coords[i] += o.coords[i];
        return *this;
    }
    SymbolicElement& operator-=(const SymbolicElement& o) {
        for (std::size_t i = 0; i < coords.size(); ++i) coords[i] -= o.coords[i];
        return *this;
    }
};

inline SymbolicElement sym_zero(int dim, std::size_t nvars) {
    SymbolicElement s;
    s.coords.assign(dim, CoordPoly(nvars));
    return s;
}

inline SymbolicElement sym_constant(const Element<Rational>& e, std::size_t nvars) {
    SymbolicElement s = sym_zero(e.dim(), nvars);
    for (int i = 0; i < e.dim(); ++i)
        s.coords[i] = CoordPoly::constant(nvars, e[i]);
    return s;
}

/// The generic element of variable block `block` (0 = x, j >= 1 = h_j).
inline SymbolicElement sym_block(int dim, std::size_t nvars, int block) {
    SymbolicElement s = sym_zero(dim, nvars);
    for (int i = 0; i < dim; ++i)
        s.coords[i] = CoordPoly::variable(nvars, static_cast<std::size_t>(block) * dim + i);
    return s;
}

/// Product through the structural constants.
inline SymbolicElement sym_mul(const Algebra<Rational>& alg, const SymbolicElement& a,
                               const SymbolicElement& b) {
    std::size_t nvars = a.coords.empty() ? 0 : a.coords[0].nvars();
    SymbolicElement out = sym_zero(alg.dim(), nvars);
    for (const auto& t : alg.nonzero_constants()) {
        if (a.coords[t.k].is_zero() || b.coords[t.l].is_zero()) continue;
        CoordPoly prod = a.coords[t.k] * b.coords[t.l];
        prod.scale(t.v);
        out.coords[t.p] += prod;
    }
    return out;
}

/// Canonical expansion of a polynomial expression, products folded left to
/// right. `nblocks` reserves room for direction blocks (0 when expanding a
/// plain expression in x).
inline SymbolicElement expand_expr(const AlgebraPtr<Rational>& alg, const ExprPtr<Rational>& e,
                                   int nblocks = 0) {
    std::size_t nvars = static_cast<std::size_t>(nblocks + 1) * alg->dim();
    switch (e->kind) {
    case Expr<Rational>::Kind::Const:
        if (e->value->algebra() != alg)
            throw AlgebraMismatch("expression constant belongs to a different algebra");
        return sym_constant(*e->value, nvars);
    case Expr<Rational>::Kind::Var:
        return sym_block(alg->dim(), nvars, 0);
    case Expr<Rational>::Kind::Sum: {
        SymbolicElement acc = sym_zero(alg->dim(), nvars);
        for (const auto& c : e->children) acc += expand_expr(alg, c, nblocks);
        return acc;
    }
    case Expr<Rational>::Kind::Prod: {
        SymbolicElement acc;
        bool first = true;
        for (const auto& c : e->children) {
            SymbolicElement v = expand_expr(alg, c, nblocks);
            acc = first ? v : sym_mul(*alg, acc, v);
            first = false;
        }
        return acc;
    }
    case Expr<Rational>::Kind::Inverse:
        throw Error("canonical expansion is defined for polynomial expressions only");
    }
    throw Error("expand_expr: unreachable");
}

/// Exact map equality for polynomial expressions.
inline bool expr_equal(const AlgebraPtr<Rational>& alg, const ExprPtr<Rational>& p,
                       const ExprPtr<Rational>& q) {
    SymbolicElement d = expand_expr(alg, p);
    d -= expand_expr(alg, q);
    return d.is_zero();
}

} // namespace ncalc
