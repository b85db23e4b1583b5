#pragma once

#include "ncalc/errors.hpp"
#include "ncalc/linalg.hpp"
#include "ncalc/scalar.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace ncalc {

/// Deterministic generator for verification sampling (splitmix64).
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// Uniform integer in [lo, hi].
    long long range(long long lo, long long hi) {
        return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
private:
    std::uint64_t state_;
};

/// A finite-dimensional algebra given by its multiplication table on a
/// basis: e_k e_l = sum_p c(k,l,p) e_p. Immutable after construction and
/// safe to share across threads; every operation is a pure function.
///
/// Flags are declared by the caller and verified during construction:
/// a contradiction raises FlagContradiction. Unital and associative are
/// decidable exactly on the rational path (bilinearity reduces both to
/// basis checks); division and multiplicative_norm are checked against
/// basis vectors plus a deterministic sample.
template <class S>
class Algebra {
public:
    struct Flags {
        bool unital = false;
        bool associative = false;
        bool division = false;
        bool multiplicative_norm = false;
    };

    /// Extra linear map registered with the algebra (e.g. conjugation),
    /// used where tensors a (.) b alone do not span all linear maps.
    /// matrix(k,m) = coefficient of e_k in the image of e_m.
    struct Generator {
        std::string name;
        std::vector<S> matrix;
    };

    struct ConstTriple {
        int k, l, p;
        S v;
    };

    static std::shared_ptr<const Algebra> create(std::string name,
                                                 std::vector<std::string> basis,
                                                 std::vector<S> constants, Flags flags,
                                                 std::vector<Generator> generators = {}) {
        auto alg = std::shared_ptr<Algebra>(new Algebra(std::move(name), std::move(basis),
                                                        std::move(constants), flags,
                                                        std::move(generators)));
        alg->verify_flags();
        return alg;
    }

    int dim() const { return dim_; }
    const std::string& name() const { return name_; }
    const std::vector<std::string>& basis() const { return basis_; }
    const Flags& flags() const { return flags_; }
    const std::vector<Generator>& generators() const { return generators_; }

    const S& c(int k, int l, int p) const { return constants_[(k * dim_ + l) * dim_ + p]; }
    const std::vector<S>& constants() const { return constants_; }
    const std::vector<ConstTriple>& nonzero_constants() const { return sparse_; }

    const Generator* find_generator(std::string_view gname) const {
        for (const auto& g : generators_)
            if (g.name == gname) return &g;
        return nullptr;
    }

    int basis_index(std::string_view label) const {
        for (int i = 0; i < dim_; ++i)
            if (basis_[i] == label) return i;
        return -1;
    }

    // Coordinate-level arithmetic. Element wraps these with algebra checks.

    std::vector<S> mul_coords(const std::vector<S>& a, const std::vector<S>& b) const {
        std::vector<S> out(dim_, scalar_traits<S>::zero());
        for (const auto& t : sparse_) {
            if (scalar_traits<S>::is_zero(a[t.k]) || scalar_traits<S>::is_zero(b[t.l])) continue;
            out[t.p] += a[t.k] * b[t.l] * t.v;
        }
        return out;
    }

    std::vector<S> apply_generator(const Generator& g, const std::vector<S>& a) const {
        std::vector<S> out(dim_, scalar_traits<S>::zero());
        for (int k = 0; k < dim_; ++k)
            for (int m = 0; m < dim_; ++m) {
                const S& gm = g.matrix[k * dim_ + m];
                if (scalar_traits<S>::is_zero(gm) || scalar_traits<S>::is_zero(a[m])) continue;
                out[k] += gm * a[m];
            }
        return out;
    }

    std::vector<S> unit_coords() const {
        std::vector<S> u(dim_, scalar_traits<S>::zero());
        u[0] = scalar_traits<S>::one();
        return u;
    }

    std::vector<S> basis_coords(int k) const {
        std::vector<S> u(dim_, scalar_traits<S>::zero());
        u[k] = scalar_traits<S>::one();
        return u;
    }

    static double coords_norm(const std::vector<S>& a) {
        double s = 0;
        for (const S& v : a) {
            double d = scalar_traits<S>::to_double(v);
            s += d * d;
        }
        return std::sqrt(s);
    }

private:
    Algebra(std::string name, std::vector<std::string> basis, std::vector<S> constants,
            Flags flags, std::vector<Generator> generators)
        : name_(std::move(name)), basis_(std::move(basis)), constants_(std::move(constants)),
          flags_(flags), generators_(std::move(generators)) {
        dim_ = static_cast<int>(basis_.size());
        if (dim_ <= 0) throw ParseError("algebra: dimension must be positive");
        if (constants_.size() != static_cast<std::size_t>(dim_) * dim_ * dim_)
            throw ParseError("algebra: constants array must have shape dim^3");
        for (auto& g : generators_)
            if (g.matrix.size() != static_cast<std::size_t>(dim_) * dim_)
                throw ParseError("algebra: generator matrix must have shape dim^2");
        for (int k = 0; k < dim_; ++k)
            for (int l = 0; l < dim_; ++l)
                for (int p = 0; p < dim_; ++p)
                    if (!scalar_traits<S>::is_zero(c(k, l, p)))
                        sparse_.push_back({k, l, p, c(k, l, p)});
    }

    bool coords_zero(const std::vector<S>& a, double tol) const {
        if constexpr (scalar_traits<S>::is_exact) {
            for (const S& v : a)
                if (!scalar_traits<S>::is_zero(v)) return false;
            return true;
        } else {
            return coords_norm(a) <= tol;
        }
    }

    std::vector<S> associator_coords(int a, int b, int cidx) const {
        std::vector<S> ab_c = mul_coords(mul_coords(basis_coords(a), basis_coords(b)), basis_coords(cidx));
        std::vector<S> a_bc = mul_coords(basis_coords(a), mul_coords(basis_coords(b), basis_coords(cidx)));
        for (int p = 0; p < dim_; ++p) ab_c[p] -= a_bc[p];
        return ab_c;
    }

    std::vector<S> random_coords(SampleRng& rng) const {
        std::vector<S> v(dim_);
        bool all_zero = true;
        for (int i = 0; i < dim_; ++i) {
            long long n = rng.range(-3, 3);
            v[i] = scalar_traits<S>::from_int(n);
            all_zero = all_zero && n == 0;
        }
        if (all_zero) v[0] = scalar_traits<S>::one();
        return v;
    }

    bool two_sided_invertible(const std::vector<S>& a) const;

    void verify_flags() const {
        const double tol = 1e-9;

        if (flags_.unital) {
            for (int k = 0; k < dim_; ++k) {
                std::vector<S> left = mul_coords(basis_coords(0), basis_coords(k));
                std::vector<S> right = mul_coords(basis_coords(k), basis_coords(0));
                left[k] -= scalar_traits<S>::one();
                right[k] -= scalar_traits<S>::one();
                if (!coords_zero(left, tol) || !coords_zero(right, tol))
                    throw FlagContradiction("unital flag contradicted: e0*" + basis_[k] + " or " +
                                            basis_[k] + "*e0 differs from " + basis_[k]);
            }
        } else if constexpr (scalar_traits<S>::is_exact) {
            if (has_two_sided_unit())
                throw FlagContradiction("unital flag contradicted: algebra has a two-sided unit");
        }

        bool assoc_witness = false;
        int wa = 0, wb = 0, wc = 0;
        for (int a = 0; a < dim_ && !assoc_witness; ++a)
            for (int b = 0; b < dim_ && !assoc_witness; ++b)
                for (int cc = 0; cc < dim_ && !assoc_witness; ++cc)
                    if (!coords_zero(associator_coords(a, b, cc), tol)) {
                        assoc_witness = true;
                        wa = a; wb = b; wc = cc;
                    }
        if (flags_.associative && assoc_witness)
            throw FlagContradiction("associative flag contradicted: associator(" + basis_[wa] +
                                    ", " + basis_[wb] + ", " + basis_[wc] + ") is nonzero");
        if (!flags_.associative && !assoc_witness)
            throw FlagContradiction(
                "associative flag contradicted: associator vanishes on every basis triple");

        SampleRng rng(0x5eedULL + static_cast<std::uint64_t>(dim_));
        if (flags_.division) {
            for (int k = 0; k < dim_; ++k)
                if (!two_sided_invertible(basis_coords(k)))
                    throw FlagContradiction("division flag contradicted: basis vector " +
                                            basis_[k] + " is not invertible");
            for (int s = 0; s < 8; ++s) {
                std::vector<S> a = random_coords(rng);
                if (!two_sided_invertible(a))
                    throw FlagContradiction("division flag contradicted by a sampled element");
            }
        }
        // Declared-false division is witness-searched only; absence of a
        // witness in the sample is not treated as a contradiction.

        if (flags_.multiplicative_norm) {
            for (int s = 0; s < 32; ++s) {
                std::vector<S> a = random_coords(rng);
                std::vector<S> b = random_coords(rng);
                double lhs = coords_norm(mul_coords(a, b));
                double rhs = coords_norm(a) * coords_norm(b);
                if (std::fabs(lhs - rhs) > 1e-6 * (1.0 + rhs))
                    throw FlagContradiction(
                        "multiplicative_norm flag contradicted: |ab| != |a||b| on a sampled pair");
            }
        }
    }

    bool has_two_sided_unit() const;

    int dim_ = 0;
    std::string name_;
    std::vector<std::string> basis_;
    std::vector<S> constants_;
    Flags flags_;
    std::vector<Generator> generators_;
    std::vector<ConstTriple> sparse_;
};

template <class S>
using AlgebraPtr = std::shared_ptr<const Algebra<S>>;

// --- inverse / unit solves ------------------------------------------------

namespace detail {

/// Left-multiplication matrix of a: column m holds the coordinates of a*e_m.
template <class S>
std::vector<std::vector<S>> left_mul_matrix(const Algebra<S>& alg, const std::vector<S>& a) {
    int d = alg.dim();
    std::vector<std::vector<S>> m(d, std::vector<S>(d, scalar_traits<S>::zero()));
    for (const auto& t : alg.nonzero_constants()) {
        if (scalar_traits<S>::is_zero(a[t.k])) continue;
        m[t.p][t.l] += a[t.k] * t.v;
    }
    return m;
}

template <class S>
std::vector<S> coords_mul_scalar(std::vector<S> a, const S& s) {
    for (auto& v : a) v *= s;
    return a;
}

} // namespace detail

/// Two-sided inverse of `a` by solving the left-multiplication system and
/// checking the right product; nullopt when singular (or not two-sided).
template <class S>
std::optional<std::vector<S>> inverse_coords(const Algebra<S>& alg, const std::vector<S>& a) {
    int d = alg.dim();
    auto lm = detail::left_mul_matrix(alg, a);
    if constexpr (scalar_traits<S>::is_exact) {
        RationalMatrix m(d, d);
        for (int r = 0; r < d; ++r)
            for (int cc = 0; cc < d; ++cc) m.at(r, cc) = lm[r][cc];
        std::vector<Rational> rhs(d, Rational(0));
        rhs[0] = Rational(1);
        auto sol = solve_exact(m, rhs);
        if (!sol) return std::nullopt;
        // a * x = e0 solved; require x * a = e0 as well.
        std::vector<S> xa = alg.mul_coords(*sol, a);
        xa[0] -= scalar_traits<S>::one();
        for (const S& v : xa)
            if (!scalar_traits<S>::is_zero(v)) return std::nullopt;
        std::vector<S> ax = alg.mul_coords(a, *sol);
        ax[0] -= scalar_traits<S>::one();
        for (const S& v : ax)
            if (!scalar_traits<S>::is_zero(v)) return std::nullopt;
        return *sol;
    } else {
        std::vector<std::vector<double>> m(d, std::vector<double>(d));
        for (int r = 0; r < d; ++r)
            for (int cc = 0; cc < d; ++cc) m[r][cc] = lm[r][cc];
        std::vector<double> rhs(d, 0.0);
        rhs[0] = 1.0;
        auto sol = solve_double(m, rhs);
        if (!sol) return std::nullopt;
        std::vector<S> xa = alg.mul_coords(*sol, a);
        xa[0] -= 1.0;
        if (Algebra<S>::coords_norm(xa) > 1e-8 * (1.0 + Algebra<S>::coords_norm(a)))
            return std::nullopt;
        return *sol;
    }
}

template <class S>
bool Algebra<S>::two_sided_invertible(const std::vector<S>& a) const {
    return inverse_coords(*this, a).has_value();
}

template <class S>
bool Algebra<S>::has_two_sided_unit() const {
    if constexpr (!scalar_traits<S>::is_exact) return false;
    // Unknown u with u*e_m = e_m and e_m*u = e_m for all m.
    int d = dim_;
    RationalMatrix m(2 * d * d, d);
    std::vector<Rational> rhs(2 * d * d, Rational(0));
    for (int mm = 0; mm < d; ++mm)
        for (int p = 0; p < d; ++p) {
            for (int k = 0; k < d; ++k) {
                m.at(mm * d + p, k) = c(k, mm, p);
                m.at(d * d + mm * d + p, k) = c(mm, k, p);
            }
            if (p == mm) {
                rhs[mm * d + p] = Rational(1);
                rhs[d * d + mm * d + p] = Rational(1);
            }
        }
    return solve_exact(m, rhs).has_value();
}

// --- Cayley-Dickson doubling and builtins ----------------------------------

/// Double an algebra carrying a conjugation: on pairs,
/// (a,b)(c,d) = (ac - d*b, da + bc*) and (a,b)* = (a*, -b).
/// The base conjugation is taken from its "conj" generator (identity for
/// one-dimensional algebras).
template <class S>
AlgebraPtr<S> cayley_dickson(const AlgebraPtr<S>& base, std::string name,
                             std::vector<std::string> basis,
                             typename Algebra<S>::Flags flags) {
    int d = base->dim();
    int d2 = 2 * d;
    std::vector<S> conj_base(static_cast<std::size_t>(d) * d, scalar_traits<S>::zero());
    if (const auto* g = base->find_generator("conj")) {
        conj_base = g->matrix;
    } else if (d == 1) {
        conj_base[0] = scalar_traits<S>::one();
    } else {
        throw Error("cayley_dickson: base algebra has no registered conjugation");
    }

    auto conj_col = [&](int m) {
        std::vector<S> out(d, scalar_traits<S>::zero());
        for (int k = 0; k < d; ++k) out[k] = conj_base[k * d + m];
        return out;
    };

    std::vector<S> cst(static_cast<std::size_t>(d2) * d2 * d2, scalar_traits<S>::zero());
    auto put = [&](int k, int l, const std::vector<S>& first, const std::vector<S>& second) {
        for (int p = 0; p < d; ++p) {
            cst[(k * d2 + l) * d2 + p] = first[p];
            cst[(k * d2 + l) * d2 + d + p] = second[p];
        }
    };
    std::vector<S> zero(d, scalar_traits<S>::zero());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            std::vector<S> ei = base->basis_coords(i), ej = base->basis_coords(j);
            // (e_i,0)(e_j,0) = (e_i e_j, 0)
            put(i, j, base->mul_coords(ei, ej), zero);
            // (e_i,0)(0,e_j) = (0, e_j e_i)
            put(i, d + j, zero, base->mul_coords(ej, ei));
            // (0,e_i)(e_j,0) = (0, e_i e_j*)
            put(d + i, j, zero, base->mul_coords(ei, conj_col(j)));
            // (0,e_i)(0,e_j) = (-e_j* e_i, 0)
            std::vector<S> neg = base->mul_coords(conj_col(j), ei);
            for (auto& v : neg) v = -v;
            put(d + i, d + j, neg, zero);
        }

    std::vector<S> conj2(static_cast<std::size_t>(d2) * d2, scalar_traits<S>::zero());
    for (int k = 0; k < d; ++k)
        for (int m = 0; m < d; ++m) conj2[k * d2 + m] = conj_base[k * d + m];
    for (int k = 0; k < d; ++k) conj2[(d + k) * d2 + (d + k)] = -scalar_traits<S>::one();

    typename Algebra<S>::Generator conj_gen{"conj", std::move(conj2)};
    return Algebra<S>::create(std::move(name), std::move(basis), std::move(cst), flags,
                              {std::move(conj_gen)});
}

namespace detail {

template <class S>
AlgebraPtr<S> make_reals() {
    typename Algebra<S>::Flags f{true, true, true, true};
    return Algebra<S>::create("reals", {"1"}, {scalar_traits<S>::one()}, f);
}

template <class S>
AlgebraPtr<S> make_complex() {
    typename Algebra<S>::Flags f{true, true, true, true};
    return cayley_dickson<S>(make_reals<S>(), "complex", {"1", "i"}, f);
}

template <class S>
AlgebraPtr<S> make_quaternions() {
    typename Algebra<S>::Flags f{true, true, true, true};
    return cayley_dickson<S>(make_complex<S>(), "quaternions", {"1", "i", "j", "k"}, f);
}

template <class S>
AlgebraPtr<S> make_octonions() {
    typename Algebra<S>::Flags f{true, false, true, true};
    return cayley_dickson<S>(make_quaternions<S>(), "octonions",
                             {"1", "e1", "e2", "e3", "e4", "e5", "e6", "e7"}, f);
}

/// 2x2 real matrices on the basis {1, e12, e21, h} with h = E11 - E22,
/// so that index 0 is the unit as required.
template <class S>
AlgebraPtr<S> make_mat2x2() {
    auto s = [](long long n, long long d) { return scalar_traits<S>::from_ratio(n, d); };
    int dim = 4;
    std::vector<S> cst(static_cast<std::size_t>(dim) * dim * dim, scalar_traits<S>::zero());
    auto set = [&](int k, int l, std::initializer_list<std::pair<int, S>> entries) {
        for (auto& [p, v] : entries) cst[(k * dim + l) * dim + p] = v;
    };
    const S one = scalar_traits<S>::one();
    for (int k = 0; k < dim; ++k) {
        set(0, k, {{k, one}});
        if (k != 0) set(k, 0, {{k, one}});
    }
    set(1, 2, {{0, s(1, 2)}, {3, s(1, 2)}});   // e12*e21 = E11
    set(2, 1, {{0, s(1, 2)}, {3, s(-1, 2)}});  // e21*e12 = E22
    set(3, 3, {{0, one}});
    set(1, 3, {{1, -one}});
    set(3, 1, {{1, one}});
    set(2, 3, {{2, one}});
    set(3, 2, {{2, -one}});
    typename Algebra<S>::Flags f{true, true, false, false};
    return Algebra<S>::create("mat2x2", {"1", "e12", "e21", "h"}, std::move(cst), f);
}

template <class S>
AlgebraPtr<S> make_dual() {
    int dim = 2;
    std::vector<S> cst(8, scalar_traits<S>::zero());
    const S one = scalar_traits<S>::one();
    cst[(0 * 2 + 0) * 2 + 0] = one;
    cst[(0 * 2 + 1) * 2 + 1] = one;
    cst[(1 * 2 + 0) * 2 + 1] = one;
    // eps*eps = 0
    std::vector<S> conj{one, scalar_traits<S>::zero(), scalar_traits<S>::zero(), -one};
    typename Algebra<S>::Flags f{true, true, false, false};
    return Algebra<S>::create("dual", {"1", "eps"}, std::move(cst), f,
                              {typename Algebra<S>::Generator{"conj", std::move(conj)}});
}

} // namespace detail

/// Built-in algebras: reals, complex, quaternions, octonions, mat2x2, dual.
/// Instances are cached, so repeated lookups share one object.
template <class S>
AlgebraPtr<S> builtin_algebra(std::string_view name) {
    static std::map<std::string, AlgebraPtr<S>, std::less<>> cache;
    static std::mutex mutex;

    std::string key(name);
    if (key == "R" || key == "r" || key == "real") key = "reals";
    if (key == "C" || key == "c") key = "complex";
    if (key == "H" || key == "h" || key == "quat") key = "quaternions";
    if (key == "O" || key == "o") key = "octonions";
    if (key == "mat2") key = "mat2x2";

    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    AlgebraPtr<S> alg;
    if (key == "reals") alg = detail::make_reals<S>();
    else if (key == "complex") alg = detail::make_complex<S>();
    else if (key == "quaternions") alg = detail::make_quaternions<S>();
    else if (key == "octonions") alg = detail::make_octonions<S>();
    else if (key == "mat2x2") alg = detail::make_mat2x2<S>();
    else if (key == "dual") alg = detail::make_dual<S>();
    else throw ParseError("unknown builtin algebra '" + std::string(name) + "'");

    cache.emplace(key, alg);
    return alg;
}

/// Convert an exact algebra to its double-precision twin (same table,
/// same flags, same generators).
inline AlgebraPtr<double> to_double_algebra(const AlgebraPtr<Rational>& alg) {
    std::vector<double> cst;
    cst.reserve(alg->constants().size());
    for (const auto& v : alg->constants()) cst.push_back(v.to_double());
    std::vector<Algebra<double>::Generator> gens;
    for (const auto& g : alg->generators()) {
        std::vector<double> m;
        m.reserve(g.matrix.size());
        for (const auto& v : g.matrix) m.push_back(v.to_double());
        gens.push_back({g.name, std::move(m)});
    }
    Algebra<double>::Flags f;
    f.unital = alg->flags().unital;
    f.associative = alg->flags().associative;
    f.division = alg->flags().division;
    f.multiplicative_norm = alg->flags().multiplicative_norm;
    return Algebra<double>::create(alg->name(), alg->basis(), std::move(cst), f, std::move(gens));
}

} // namespace ncalc
