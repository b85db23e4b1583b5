#pragma once

#include "ncalc/expr.hpp"
#include "ncalc/form.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace ncalc {

/// Element-to-element map over one double-precision algebra.
using NumericMap = std::function<Element<double>(const Element<double>&)>;

inline NumericMap numeric_map(const ExprPtr<double>& e) {
    return [e](const Element<double>& x) { return eval(e, x); };
}

inline Element<double> central_difference(const NumericMap& f, const Element<double>& x,
                                          const Element<double>& h, double t) {
    Element<double> plus = f(x + t * h);
    Element<double> minus = f(x + (-t) * h);
    return (1.0 / (2.0 * t)) * (plus - minus);
}

struct FdResult {
    Element<double> value;
    double residual = 0; ///< |D(t2) - D(t1)|, the size of the Richardson correction
    bool converged = true;
};

/// Directional differential by Richardson-extrapolated central differences
/// over the step schedule {1e-3, 1e-4}. The result is flagged non-converged
/// when the two steps disagree beyond any plausible truncation error.
inline FdResult fd_differential(const NumericMap& f, const Element<double>& x,
                                const Element<double>& h) {
    const double t1 = 1e-3, t2 = 1e-4;
    Element<double> d1 = central_difference(f, x, h, t1);
    Element<double> d2 = central_difference(f, x, h, t2);
    // Central differences have error c t^2 + O(t^4); eliminate the t^2 term.
    double w = (t1 * t1) / (t1 * t1 - t2 * t2);
    Element<double> value = w * d2 + (1.0 - w) * d1;
    FdResult r{value, (d2 - d1).norm(), true};
    r.converged = r.residual <= 1e-3 * std::max(1.0, value.norm());
    return r;
}

/// Coordinate matrix of the differential at x: column j is the directional
/// differential along basis vector e_j.
inline std::vector<std::vector<double>> jacobian(const NumericMap& f, const Element<double>& x) {
    int d = x.dim();
    std::vector<std::vector<double>> m(d, std::vector<double>(d, 0.0));
    for (int j = 0; j < d; ++j) {
        FdResult col = fd_differential(f, x, Element<double>::basis(x.algebra(), j));
        for (int k = 0; k < d; ++k) m[k][j] = col.value[k];
    }
    return m;
}

// --- seeded sampling ------------------------------------------------------------

/// Deterministic unit-sphere sampler (splitmix64 + Box-Muller), so that
/// reports are reproducible across platforms from the seed alone.
class DirectionSampler {
public:
    explicit DirectionSampler(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ULL) {}

    double uniform() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return (static_cast<double>(z >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double gaussian() {
        double u1 = uniform(), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    Element<double> unit_vector(const AlgebraPtr<double>& alg) {
        std::vector<double> c(alg->dim());
        double n2 = 0;
        do {
            n2 = 0;
            for (auto& v : c) {
                v = gaussian();
                n2 += v * v;
            }
        } while (n2 < 1e-12);
        double inv = 1.0 / std::sqrt(n2);
        for (auto& v : c) v *= inv;
        return Element<double>(alg, std::move(c));
    }

private:
    std::uint64_t state_;
};

// --- derivative cross-check -------------------------------------------------------

struct DerivativeCheckReport {
    std::vector<double> errors; ///< per-sample relative error (absolute floor applied)
    double max_error = 0;
    double tolerance = 0;
    std::uint64_t seed = 0;
    bool pass = false;
};

/// Default numeric tolerance; NCALC_TOL overrides it in the CLI.
inline constexpr double kDefaultTolerance = 1e-6;
inline constexpr double kAbsoluteFloor = 1e-9;

/// Compare the symbolic first derivative of `p` with the finite-difference
/// oracle over seeded unit-sphere samples of (x, h). Points where the map
/// itself fails to evaluate (singular inverse) are resampled.
inline DerivativeCheckReport check_derivative(const AlgebraPtr<double>& alg,
                                              const ExprPtr<double>& p, int nsamples,
                                              std::uint64_t seed,
                                              double tol = kDefaultTolerance) {
    DerivativeCheckReport report;
    report.seed = seed;
    report.tolerance = tol;
    MultilinearForm<double> df = derivative(alg, p, 1);
    NumericMap f = numeric_map(p);
    DirectionSampler rng(seed);
    report.pass = true;
    for (int s = 0; s < nsamples; ++s) {
        for (int attempt = 0;; ++attempt) {
            Element<double> x = rng.unit_vector(alg);
            Element<double> h = rng.unit_vector(alg);
            try {
                Element<double> sym = eval_form(df, x, {h});
                FdResult fd = fd_differential(f, x, h);
                double denom = std::max(sym.norm(), kAbsoluteFloor / tol);
                double err = (sym - fd.value).norm() / denom;
                report.errors.push_back(err);
                report.max_error = std::max(report.max_error, err);
                if (err > tol || !fd.converged) report.pass = false;
                break;
            } catch (const NotInvertible&) {
                if (attempt > 32) throw;
            }
        }
    }
    return report;
}

} // namespace ncalc
