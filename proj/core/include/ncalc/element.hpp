#pragma once

#include "ncalc/algebra.hpp"

#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ncalc {

/// An element of a fixed algebra: a coordinate vector over the scalar
/// field bound to the algebra it lives in. Arithmetic between elements of
/// different algebras is an error.
template <class S>
class Element {
public:
    Element() = default;
    Element(AlgebraPtr<S> alg, std::vector<S> coords)
        : alg_(std::move(alg)), coords_(std::move(coords)) {
        if (coords_.size() != static_cast<std::size_t>(alg_->dim()))
            throw AlgebraMismatch("element: coordinate count differs from algebra dimension");
    }

    static Element zero(const AlgebraPtr<S>& alg) {
        return Element(alg, std::vector<S>(alg->dim(), scalar_traits<S>::zero()));
    }
    static Element unit(const AlgebraPtr<S>& alg) { return Element(alg, alg->unit_coords()); }
    static Element basis(const AlgebraPtr<S>& alg, int k) {
        return Element(alg, alg->basis_coords(k));
    }
    static Element from_label(const AlgebraPtr<S>& alg, std::string_view label) {
        int k = alg->basis_index(label);
        if (k < 0) throw ParseError("no basis vector named '" + std::string(label) + "'");
        return basis(alg, k);
    }

    const AlgebraPtr<S>& algebra() const { return alg_; }
    const std::vector<S>& coords() const { return coords_; }
    const S& operator[](int i) const { return coords_[i]; }
    int dim() const { return alg_->dim(); }

    bool is_zero() const {
        for (const S& v : coords_)
            if (!scalar_traits<S>::is_zero(v)) return false;
        return true;
    }

    friend Element operator+(const Element& a, const Element& b) {
        a.check_same(b);
        std::vector<S> c = a.coords_;
        for (int i = 0; i < a.dim(); ++i) c[i] += b.coords_[i];
        return Element(a.alg_, std::move(c));
    }
    friend Element operator-(const Element& a, const Element& b) {
        a.check_same(b);
        std::vector<S> c = a.coords_;
        for (int i = 0; i < a.dim(); ++i) c[i] -= b.coords_[i];
        return Element(a.alg_, std::move(c));
    }
    Element operator-() const {
        std::vector<S> c = coords_;
        for (auto& v : c) v = -v;
        return Element(alg_, std::move(c));
    }
    friend Element operator*(const S& s, const Element& a) {
        std::vector<S> c = a.coords_;
        for (auto& v : c) v = s * v;
        return Element(a.alg_, std::move(c));
    }
    friend Element operator*(const Element& a, const Element& b) {
        a.check_same(b);
        return Element(a.alg_, a.alg_->mul_coords(a.coords_, b.coords_));
    }

    friend bool operator==(const Element& a, const Element& b) {
        return a.alg_ == b.alg_ && a.coords_ == b.coords_;
    }

    /// Euclidean norm of the coordinate vector on the declared basis.
    double norm() const { return Algebra<S>::coords_norm(coords_); }

    Element inverse() const {
        auto inv = inverse_coords(*alg_, coords_);
        if (!inv) throw NotInvertible("element has no two-sided inverse: " + to_string());
        return Element(alg_, std::move(*inv));
    }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (int i = 0; i < dim(); ++i) {
            if (scalar_traits<S>::is_zero(coords_[i])) continue;
            std::string cs = scalar_traits<S>::to_string(coords_[i]);
            bool neg = !cs.empty() && cs[0] == '-';
            if (neg) cs = cs.substr(1);
            os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
            const std::string& label = alg_->basis()[i];
            if (i == 0 && alg_->flags().unital) {
                os << cs;
            } else if (cs == "1") {
                os << label;
            } else {
                os << cs << " " << label;
            }
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

private:
    void check_same(const Element& other) const {
        if (alg_ != other.alg_)
            throw AlgebraMismatch("elements belong to different algebras ('" + alg_->name() +
                                  "' vs '" + other.alg_->name() + "')");
    }

    AlgebraPtr<S> alg_;
    std::vector<S> coords_;
};

template <class S>
Element<S> commutator(const Element<S>& a, const Element<S>& b) {
    return a * b - b * a;
}

template <class S>
Element<S> associator(const Element<S>& a, const Element<S>& b, const Element<S>& c) {
    return (a * b) * c - a * (b * c);
}

inline Element<double> to_double_element(const Element<Rational>& e,
                                         const AlgebraPtr<double>& alg) {
    std::vector<double> c;
    c.reserve(e.coords().size());
    for (const auto& v : e.coords()) c.push_back(v.to_double());
    return Element<double>(alg, std::move(c));
}

} // namespace ncalc
