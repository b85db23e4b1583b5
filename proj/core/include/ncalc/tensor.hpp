#pragma once

#include "ncalc/element.hpp"
#include "ncalc/linalg.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ncalc {

/// Order of the two products when a term a (.) b acts on x. The two orders
/// agree on associative algebras and differ by the associator (a, x, b)
/// otherwise.
enum class MulOrder {
    LeftThenRight, ///< (a * x) * b  -- the default convention
    RightThenLeft, ///< a * (x * b)
};

/// Generator slot of a tensor term: kDelta is the identity map, other
/// values index the algebra's registered generators (e.g. conjugation).
inline constexpr int kDelta = -1;

template <class S>
struct TensorTerm {
    Element<S> left;
    Element<S> right;
    int gen = kDelta;
};

/// Standard components of an operator: one dim x dim array per generator,
/// g(i,j) multiplying e_i (gen x) e_j.
template <class S>
struct StandardComponents {
    struct Part {
        int gen = kDelta;
        std::vector<S> g; // g[i*dim + j]
    };
    AlgebraPtr<S> alg;
    std::vector<Part> parts;

    const S& at(const Part& part, int i, int j) const { return part.g[i * alg->dim() + j]; }

    const Part* find(int gen) const {
        for (const auto& p : parts)
            if (p.gen == gen) return &p;
        return nullptr;
    }

    bool delta_only() const {
        for (const auto& p : parts)
            if (p.gen != kDelta && !part_zero(p)) return false;
        return true;
    }

    static bool part_zero(const Part& p) {
        for (const S& v : p.g)
            if (!scalar_traits<S>::is_zero(v)) return false;
        return true;
    }
};

/// A finite sum of terms left (.) right, each optionally composed with a
/// registered generator; acts on elements as sum of left*(gen x)*right.
template <class S>
class TensorOperator {
public:
    TensorOperator(AlgebraPtr<S> alg, std::vector<TensorTerm<S>> terms)
        : alg_(std::move(alg)), terms_(std::move(terms)) {
        for (const auto& t : terms_)
            if (t.left.algebra() != alg_ || t.right.algebra() != alg_)
                throw AlgebraMismatch("tensor term does not belong to the operator's algebra");
    }

    static TensorOperator identity(const AlgebraPtr<S>& alg) {
        return single(alg, Element<S>::unit(alg), Element<S>::unit(alg));
    }
    static TensorOperator single(const AlgebraPtr<S>& alg, Element<S> left, Element<S> right,
                                 int gen = kDelta) {
        std::vector<TensorTerm<S>> t;
        t.push_back({std::move(left), std::move(right), gen});
        return TensorOperator(alg, std::move(t));
    }

    const AlgebraPtr<S>& algebra() const { return alg_; }
    const std::vector<TensorTerm<S>>& terms() const { return terms_; }

    Element<S> apply(const Element<S>& x, MulOrder order = MulOrder::LeftThenRight) const {
        if (x.algebra() != alg_) throw AlgebraMismatch("tensor operator applied across algebras");
        Element<S> acc = Element<S>::zero(alg_);
        for (const auto& t : terms_) {
            Element<S> gx = x;
            if (t.gen != kDelta)
                gx = Element<S>(alg_, alg_->apply_generator(alg_->generators()[t.gen], x.coords()));
            if (order == MulOrder::LeftThenRight)
                acc = acc + (t.left * gx) * t.right;
            else
                acc = acc + t.left * (gx * t.right);
        }
        return acc;
    }

    /// Composition product: the operator whose action is this after other,
    /// built termwise as (a (.) b)(c (.) d) = (ac) (.) (db). Requires an
    /// associative algebra and identity generators on both sides.
    TensorOperator compose(const TensorOperator& other) const {
        if (alg_ != other.alg_) throw AlgebraMismatch("composing operators over different algebras");
        if (!alg_->flags().associative)
            throw UnsupportedForNonassociative(
                "tensor composition requires an associative algebra");
        for (const auto& t : terms_)
            if (t.gen != kDelta)
                throw Error("tensor composition with non-identity generators is not supported");
        for (const auto& t : other.terms_)
            if (t.gen != kDelta)
                throw Error("tensor composition with non-identity generators is not supported");
        std::vector<TensorTerm<S>> out;
        out.reserve(terms_.size() * other.terms_.size());
        for (const auto& t1 : terms_)
            for (const auto& t2 : other.terms_)
                out.push_back({t1.left * t2.left, t2.right * t1.right, kDelta});
        return TensorOperator(alg_, std::move(out));
    }

    /// Merge terms into per-generator standard components:
    /// g(i,j) = sum over terms of left_i * right_j.
    StandardComponents<S> components() const {
        int d = alg_->dim();
        StandardComponents<S> sc;
        sc.alg = alg_;
        auto part_for = [&](int gen) -> typename StandardComponents<S>::Part& {
            for (auto& p : sc.parts)
                if (p.gen == gen) return p;
            sc.parts.push_back({gen, std::vector<S>(static_cast<std::size_t>(d) * d,
                                                    scalar_traits<S>::zero())});
            return sc.parts.back();
        };
        for (const auto& t : terms_) {
            auto& part = part_for(t.gen);
            for (int i = 0; i < d; ++i) {
                if (scalar_traits<S>::is_zero(t.left[i])) continue;
                for (int j = 0; j < d; ++j) {
                    if (scalar_traits<S>::is_zero(t.right[j])) continue;
                    part.g[i * d + j] += t.left[i] * t.right[j];
                }
            }
        }
        return sc;
    }

    /// Matrix of the operator as a linear map: column m holds the image of
    /// e_m (using the (a x) b convention).
    std::vector<S> to_matrix(MulOrder order = MulOrder::LeftThenRight) const {
        int d = alg_->dim();
        std::vector<S> f(static_cast<std::size_t>(d) * d, scalar_traits<S>::zero());
        for (int m = 0; m < d; ++m) {
            Element<S> img = apply(Element<S>::basis(alg_, m), order);
            for (int k = 0; k < d; ++k) f[k * d + m] = img[k];
        }
        return f;
    }

private:
    AlgebraPtr<S> alg_;
    std::vector<TensorTerm<S>> terms_;
};

/// Rebuild an operator from standard components, one term per nonzero
/// g(i,j) entry.
template <class S>
TensorOperator<S> components_to_operator(const StandardComponents<S>& sc) {
    int d = sc.alg->dim();
    std::vector<TensorTerm<S>> terms;
    for (const auto& p : sc.parts)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const S& v = p.g[i * d + j];
                if (scalar_traits<S>::is_zero(v)) continue;
                terms.push_back({v * Element<S>::basis(sc.alg, i), Element<S>::basis(sc.alg, j),
                                 p.gen});
            }
    return TensorOperator<S>(sc.alg, std::move(terms));
}

/// Component form of the composition product:
/// (g o h)(i,j) = sum g(k,l) h(p,q) c(k,p,i) c(q,l,j).
template <class S>
StandardComponents<S> standard_components_mul(const StandardComponents<S>& g,
                                              const StandardComponents<S>& h) {
    if (g.alg != h.alg) throw AlgebraMismatch("components over different algebras");
    if (!g.alg->flags().associative)
        throw UnsupportedForNonassociative("component product requires an associative algebra");
    const auto* gp = g.find(kDelta);
    const auto* hp = h.find(kDelta);
    int d = g.alg->dim();
    StandardComponents<S> out;
    out.alg = g.alg;
    out.parts.push_back({kDelta, std::vector<S>(static_cast<std::size_t>(d) * d,
                                                scalar_traits<S>::zero())});
    if (!gp || !hp) return out;
    auto& o = out.parts[0].g;
    const Algebra<S>& A = *g.alg;
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            const S& gv = gp->g[k * d + l];
            if (scalar_traits<S>::is_zero(gv)) continue;
            for (int p = 0; p < d; ++p)
                for (int q = 0; q < d; ++q) {
                    const S& hv = hp->g[p * d + q];
                    if (scalar_traits<S>::is_zero(hv)) continue;
                    S ghv = gv * hv;
                    for (int i = 0; i < d; ++i) {
                        const S& c1 = A.c(k, p, i);
                        if (scalar_traits<S>::is_zero(c1)) continue;
                        for (int j = 0; j < d; ++j) {
                            const S& c2 = A.c(q, l, j);
                            if (scalar_traits<S>::is_zero(c2)) continue;
                            o[i * d + j] += ghv * c1 * c2;
                        }
                    }
                }
        }
    return out;
}

// --- component solve (exact path only) --------------------------------------

/// Column block of the solve matrix for one generator: the column (i,j)
/// holds the matrix of x -> (e_i * gen(x)) * e_j, flattened by rows (k,m).
inline RationalMatrix component_block(const Algebra<Rational>& alg,
                                      const Algebra<Rational>::Generator* gen) {
    int d = alg.dim();
    RationalMatrix b(static_cast<std::size_t>(d) * d, static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int m = 0; m < d; ++m) {
                // image of e_m under x -> (e_i gen(x)) e_j
                std::vector<Rational> gm =
                    gen ? alg.apply_generator(*gen, alg.basis_coords(m)) : alg.basis_coords(m);
                std::vector<Rational> img =
                    alg.mul_coords(alg.mul_coords(alg.basis_coords(i), gm), alg.basis_coords(j));
                for (int k = 0; k < d; ++k)
                    b.at(static_cast<std::size_t>(k) * d + m, static_cast<std::size_t>(i) * d + j) =
                        img[k];
            }
    return b;
}

/// The dim^2 x dim^2 system relating a linear map's matrix to its standard
/// components over the identity generator.
inline RationalMatrix component_solve_matrix(const Algebra<Rational>& alg) {
    return component_block(alg, nullptr);
}

struct RepresentationBasis {
    std::vector<std::string> generators; ///< "delta" plus registered extras actually needed
    std::size_t rank_delta = 0;          ///< rank of the identity-generator block
    std::size_t spanned = 0;             ///< rank of the full retained block system
    bool complete = false;               ///< spanned == dim^2
};

/// Rank analysis of the solve matrix. Returns {delta} when the identity
/// block already spans all linear maps, otherwise greedily adds registered
/// generators that enlarge the span. An incomplete basis is reported, not
/// fatal.
inline RepresentationBasis representation_basis(const AlgebraPtr<Rational>& alg) {
    int d = alg->dim();
    std::size_t n = static_cast<std::size_t>(d) * d;
    RepresentationBasis out;
    RationalMatrix block = component_solve_matrix(*alg);
    out.rank_delta = block.rank();
    out.generators.push_back("delta");
    std::size_t rank = out.rank_delta;

    std::vector<RationalMatrix> kept;
    kept.push_back(std::move(block));
    for (const auto& g : alg->generators()) {
        if (rank == n) break;
        RationalMatrix gb = component_block(*alg, &g);
        RationalMatrix stacked(n, (kept.size() + 1) * n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t bidx = 0; bidx < kept.size(); ++bidx)
                for (std::size_t cc = 0; cc < n; ++cc)
                    stacked.at(r, bidx * n + cc) = kept[bidx].at(r, cc);
            for (std::size_t cc = 0; cc < n; ++cc) stacked.at(r, kept.size() * n + cc) = gb.at(r, cc);
        }
        std::size_t new_rank = stacked.rank();
        if (new_rank > rank) {
            rank = new_rank;
            kept.push_back(std::move(gb));
            out.generators.push_back(g.name);
        }
    }
    out.spanned = rank;
    out.complete = rank == n;
    return out;
}

/// Solve f = sum g(i,j) e_i x e_j for the standard components of the map
/// with matrix `fmat` (row-major, fmat[k*dim+m] = coefficient of e_k in the
/// image of e_m). When the identity block cannot represent f, registered
/// generators are added one at a time. Throws NoRepresentation when f lies
/// outside the span of every registered generator orbit.
inline StandardComponents<Rational> solve_components(const AlgebraPtr<Rational>& alg,
                                                     const std::vector<Rational>& fmat) {
    int d = alg->dim();
    std::size_t n = static_cast<std::size_t>(d) * d;
    if (fmat.size() != n) throw ParseError("solve_components: map matrix must be dim x dim");

    std::vector<Rational> rhs(n);
    for (int k = 0; k < d; ++k)
        for (int m = 0; m < d; ++m) rhs[static_cast<std::size_t>(k) * d + m] = fmat[k * d + m];

    std::vector<const typename Algebra<Rational>::Generator*> gens;
    gens.push_back(nullptr); // delta
    for (std::size_t extra = 0;; ++extra) {
        RationalMatrix sys(n, gens.size() * n);
        for (std::size_t bidx = 0; bidx < gens.size(); ++bidx) {
            RationalMatrix block = component_block(*alg, gens[bidx]);
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t cc = 0; cc < n; ++cc) sys.at(r, bidx * n + cc) = block.at(r, cc);
        }
        auto sol = solve_exact(sys, rhs);
        if (sol) {
            StandardComponents<Rational> sc;
            sc.alg = alg;
            for (std::size_t bidx = 0; bidx < gens.size(); ++bidx) {
                typename StandardComponents<Rational>::Part part;
                part.gen = gens[bidx] ? static_cast<int>(bidx) - 1 : kDelta;
                part.g.assign(sol->begin() + bidx * n, sol->begin() + (bidx + 1) * n);
                if (bidx == 0 || !StandardComponents<Rational>::part_zero(part))
                    sc.parts.push_back(std::move(part));
            }
            return sc;
        }
        if (extra >= alg->generators().size())
            throw NoRepresentation(
                "linear map is outside the span of all registered generator orbits");
        gens.push_back(&alg->generators()[extra]);
    }
}

// --- tensor product of algebras ----------------------------------------------

/// The algebra A1 (x) A2 on the product basis, with constants
/// c((i1,j1),(i2,j2),(p,q)) = c1(i1,i2,p) c2(j1,j2,q). Basis vector
/// (i,j) maps to index i*dim2 + j.
template <class S>
AlgebraPtr<S> tensor_algebra(const AlgebraPtr<S>& a1, const AlgebraPtr<S>& a2) {
    int d1 = a1->dim(), d2 = a2->dim();
    int d = d1 * d2;
    std::vector<S> cst(static_cast<std::size_t>(d) * d * d, scalar_traits<S>::zero());
    for (const auto& t1 : a1->nonzero_constants())
        for (const auto& t2 : a2->nonzero_constants()) {
            int k = t1.k * d2 + t2.k;
            int l = t1.l * d2 + t2.l;
            int p = t1.p * d2 + t2.p;
            cst[(static_cast<std::size_t>(k) * d + l) * d + p] = t1.v * t2.v;
        }
    std::vector<std::string> labels;
    labels.reserve(d);
    for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d2; ++j) labels.push_back(a1->basis()[i] + "." + a2->basis()[j]);

    typename Algebra<S>::Flags f;
    f.unital = a1->flags().unital && a2->flags().unital;
    // Associativity of the factors carries over; other flags only survive
    // a one-dimensional factor.
    f.associative = a1->flags().associative && a2->flags().associative;
    f.division = (d1 == 1 && a2->flags().division) || (d2 == 1 && a1->flags().division);
    f.multiplicative_norm =
        (d1 == 1 && a2->flags().multiplicative_norm) || (d2 == 1 && a1->flags().multiplicative_norm);
    return Algebra<S>::create(a1->name() + "(x)" + a2->name(), std::move(labels), std::move(cst), f);
}

} // namespace ncalc
