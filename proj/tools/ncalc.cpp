// ncalc: inspect finite-dimensional algebras, differentiate noncommutative
// expressions symbolically, reconstruct Taylor polynomials, evaluate the
// exponential series, integrate differential specifications, and solve for
// tensor components of linear maps.

#include "ncalc/algebra_io.hpp"
#include "ncalc/expr_parse.hpp"
#include "ncalc/form_io.hpp"
#include "ncalc/numeric.hpp"
#include "ncalc/ode.hpp"
#include "ncalc/series.hpp"
#include "ncalc/tensor.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace ncalc;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoSolution = 2;

double env_tolerance() {
    if (const char* s = std::getenv("NCALC_TOL")) {
        try {
            return std::stod(s);
        } catch (...) {
            throw ParseError("NCALC_TOL is not a number");
        }
    }
    return kDefaultTolerance;
}

bool has_decimal(const std::string& s) { return s.find('.') != std::string::npos; }

json coords_json(const Element<Rational>& e) {
    json a = json::array();
    for (int i = 0; i < e.dim(); ++i) a.push_back(e[i].to_string());
    return a;
}

json coords_json(const Element<double>& e) {
    json a = json::array();
    for (int i = 0; i < e.dim(); ++i) a.push_back(e[i]);
    return a;
}

struct AlgebraArgs {
    std::string builtin;
    std::string spec_path;

    void attach(CLI::App* cmd, bool required = true) {
        auto* a = cmd->add_option("-a,--algebra", builtin, "builtin algebra name");
        auto* s = cmd->add_option("--spec", spec_path, "algebra spec document (JSON)");
        a->excludes(s);
        if (required) {
            // one of the two must be present; checked at resolve time
        }
    }

    AlgebraPtr<Rational> resolve() const { return resolve_algebra(builtin, spec_path); }
};

// --- algebra -----------------------------------------------------------------

int run_algebra(const AlgebraArgs& src, bool check, bool as_json) {
    auto alg = src.resolve();
    auto rb = representation_basis(alg);

    if (as_json) {
        json doc;
        doc["name"] = alg->name();
        doc["dim"] = alg->dim();
        doc["basis"] = alg->basis();
        doc["flags"] = {{"unital", alg->flags().unital},
                        {"associative", alg->flags().associative},
                        {"division", alg->flags().division},
                        {"multiplicative_norm", alg->flags().multiplicative_norm}};
        doc["solve_matrix_rank"] = rb.rank_delta;
        doc["representation_basis"] = rb.generators;
        doc["representation_complete"] = rb.complete;
        doc["spec"] = json::parse(algebra_spec_json(*alg, 0));
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "algebra:  " << alg->name() << "\n";
        std::cout << "dim:      " << alg->dim() << "\n";
        std::cout << "basis:    ";
        for (int i = 0; i < alg->dim(); ++i) std::cout << (i ? " " : "") << alg->basis()[i];
        std::cout << "\n";
        auto onoff = [](bool b) { return b ? "yes" : "no"; };
        std::cout << "flags:    unital=" << onoff(alg->flags().unital)
                  << " associative=" << onoff(alg->flags().associative)
                  << " division=" << onoff(alg->flags().division)
                  << " multiplicative_norm=" << onoff(alg->flags().multiplicative_norm) << "\n";
        std::cout << "solve-matrix rank: " << rb.rank_delta << " of " << alg->dim() * alg->dim()
                  << "\n";
        std::cout << "representation basis: ";
        for (std::size_t i = 0; i < rb.generators.size(); ++i)
            std::cout << (i ? ", " : "") << rb.generators[i];
        if (!rb.complete)
            std::cout << "  (incomplete: spans " << rb.spanned << " of " << alg->dim() * alg->dim()
                      << ")";
        std::cout << "\n";
    }

    if (!check) return kExitOk;

    // Invariant suite over deterministic samples.
    bool ok = true;
    SampleRng rng(0xabcdefULL);
    auto sample = [&] {
        std::vector<Rational> c(alg->dim());
        for (auto& v : c) v = Rational(rng.range(-3, 3), rng.range(0, 1) ? 1 : 2);
        return Element<Rational>(alg, std::move(c));
    };
    auto report = [&](const char* name, bool pass) {
        ok = ok && pass;
        std::cout << (pass ? "PASS " : "FAIL ") << name << "\n";
    };

    bool bilinear = true, antisym = true, assoc = true, normtri = true, normmul = true;
    for (int s = 0; s < 32; ++s) {
        auto a = sample(), b = sample(), c = sample();
        Rational alpha(rng.range(-3, 3), 2);
        bilinear = bilinear && (alpha * a + b) * c == alpha * (a * c) + b * c &&
                   c * (alpha * a + b) == alpha * (c * a) + c * b;
        antisym = antisym && commutator(a, b) == -commutator(b, a);
        if (alg->flags().associative) assoc = assoc && associator(a, b, c).is_zero();
        normtri = normtri && (a + b).norm() <= a.norm() + b.norm() + 1e-9;
        if (alg->flags().multiplicative_norm)
            normmul = normmul &&
                      std::fabs((a * b).norm() - a.norm() * b.norm()) <= 1e-9 * (1 + a.norm() * b.norm());
    }
    report("bilinearity", bilinear);
    report("commutator antisymmetry", antisym);
    if (alg->flags().associative) report("associativity on samples", assoc);
    report("norm triangle inequality", normtri);
    if (alg->flags().multiplicative_norm) report("norm multiplicativity", normmul);
    if (alg->flags().unital) {
        bool unit_ok = true;
        for (int s = 0; s < 8; ++s) {
            auto a = sample();
            unit_ok = unit_ok && Element<Rational>::unit(alg) * a == a &&
                      a * Element<Rational>::unit(alg) == a;
        }
        report("unit element", unit_ok);
    }
    return ok ? kExitOk : kExitUsage;
}

// --- diff ---------------------------------------------------------------------

template <class S>
int run_diff_typed(const AlgebraPtr<S>& alg, const AlgebraPtr<double>& dalg,
                   const std::string& expr_text, int order, const std::string& at,
                   const std::vector<std::string>& dirs, bool as_json, double tol) {
    ExprPtr<S> p = parse_expr(alg, expr_text);
    MultilinearForm<S> f = derivative(alg, p, order);

    json doc;
    if (as_json) {
        if constexpr (scalar_traits<S>::is_exact)
            doc["form"] = json::parse(form_to_json(f, 0));
        else
            doc["form"] = form_to_string(f);
        doc["order"] = order;
        doc["expression"] = expr_text;
    } else {
        std::cout << "d^" << order << " " << expr_text << " = " << form_to_string(f) << "\n";
    }

    if (!at.empty()) {
        if (static_cast<int>(dirs.size()) != order)
            throw ParseError("need exactly " + std::to_string(order) +
                             " --dir options for an order-" + std::to_string(order) + " derivative");
        Element<S> x = parse_coords(alg, at);
        std::vector<Element<S>> hs;
        for (const auto& d : dirs) hs.push_back(parse_coords(alg, d));
        Element<S> value = eval_form(f, x, hs);

        if (as_json)
            doc["value"] = coords_json(value);
        else
            std::cout << "value at point: " << value.to_string() << "\n";

        if (order == 1) {
            // Cross-check against the finite-difference oracle.
            ExprPtr<double> pd;
            Element<double> xd = Element<double>::zero(dalg);
            Element<double> hd = xd;
            if constexpr (scalar_traits<S>::is_exact) {
                pd = to_double_expr(p, dalg);
                xd = to_double_element(x, dalg);
                hd = to_double_element(hs[0], dalg);
            } else {
                pd = p;
                xd = x;
                hd = hs[0];
            }
            FdResult fd = fd_differential(numeric_map(pd), xd, hd);
            double vnorm = 0;
            for (int k = 0; k < dalg->dim(); ++k) {
                double d = scalar_traits<S>::to_double(value[k]) - fd.value[k];
                vnorm += d * d;
            }
            double err = std::sqrt(vnorm);
            bool pass = err <= std::max(tol * fd.value.norm(), kAbsoluteFloor) && fd.converged;
            if (as_json) {
                doc["fd_residual"] = err;
                doc["fd_converged"] = fd.converged;
                doc["fd_pass"] = pass;
            } else {
                std::cout << "finite-difference residual: " << err << (pass ? " (ok)" : " (MISMATCH)")
                          << "\n";
            }
            if (!pass) {
                if (as_json) std::cout << doc.dump(2) << "\n";
                return kExitUsage;
            }
        }
    }
    if (as_json) std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

int run_diff(const AlgebraArgs& src, const std::string& expr_text, int order,
             const std::string& at, const std::vector<std::string>& dirs, int fd_samples,
             std::uint64_t seed, bool as_json) {
    double tol = env_tolerance();
    auto alg = src.resolve();
    auto dalg = to_double_algebra(alg);

    if (fd_samples > 0) {
        // Whole-report mode: symbolic first derivative against the
        // finite-difference oracle over seeded unit-sphere samples.
        auto r = check_derivative(dalg, parse_expr(dalg, expr_text), fd_samples, seed, tol);
        if (as_json) {
            json doc;
            doc["expression"] = expr_text;
            doc["errors"] = r.errors;
            doc["max_error"] = r.max_error;
            doc["tolerance"] = r.tolerance;
            doc["seed"] = r.seed;
            doc["pass"] = r.pass;
            std::cout << doc.dump(2) << "\n";
        } else {
            std::cout << "finite-difference check over " << fd_samples << " samples (seed " << seed
                      << "): max relative error " << r.max_error << (r.pass ? " PASS" : " FAIL")
                      << "\n";
        }
        return r.pass ? kExitOk : kExitUsage;
    }

    bool floating = has_decimal(expr_text) || has_decimal(at);
    for (const auto& d : dirs) floating = floating || has_decimal(d);
    if (floating)
        return run_diff_typed<double>(dalg, dalg, expr_text, order, at, dirs, as_json, tol);
    return run_diff_typed<Rational>(alg, dalg, expr_text, order, at, dirs, as_json, tol);
}

// --- taylor ---------------------------------------------------------------------

int run_taylor(const AlgebraArgs& src, const std::string& expr_text, const std::string& at,
               bool as_json) {
    auto alg = src.resolve();
    if (has_decimal(expr_text) || has_decimal(at))
        throw ParseError("taylor reconstruction runs on the exact path; use rationals");
    ExprPtr<Rational> p = parse_expr(alg, expr_text);
    Element<Rational> x0 =
        at.empty() ? Element<Rational>::zero(alg) : parse_coords(alg, at);
    ExprPtr<Rational> t = taylor(p, x0);
    auto monos = to_monomials(alg, t);
    bool equal = expr_equal(alg, t, p);
    if (as_json) {
        json doc;
        doc["expression"] = expr_text;
        doc["x0"] = coords_json(x0);
        doc["taylor"] = monomials_to_string(monos);
        doc["equal_to_input"] = equal;
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "taylor(" << expr_text << ") at " << x0.to_string() << " = "
                  << monomials_to_string(monos) << "\n";
        std::cout << (equal ? "verified: reconstruction equals the input exactly"
                            : "WARNING: reconstruction differs from the input")
                  << "\n";
    }
    return equal ? kExitOk : kExitUsage;
}

// --- exp -------------------------------------------------------------------------

int run_exp(const AlgebraArgs& src, const std::string& xs, int order,
            const std::string& sum_with, bool as_json) {
    double tol = env_tolerance() == kDefaultTolerance ? 1e-10 : env_tolerance();
    auto dalg = to_double_algebra(src.resolve());
    Element<double> x = parse_coords(dalg, xs);
    auto r = exp_series(x, order);
    json doc;
    doc["value"] = coords_json(r.value);
    doc["truncation"] = r.order;
    doc["remainder_bound"] = r.remainder_bound;
    if (!as_json) {
        std::cout << "exp(x) = " << r.value.to_string() << "\n";
        std::cout << "truncation N = " << r.order << ", remainder bound " << r.remainder_bound
                  << "\n";
    }
    if (!sum_with.empty()) {
        Element<double> b = parse_coords(dalg, sum_with);
        auto sc = exp_sum_check(x, b, order, tol);
        doc["sum_check"] = {{"equal", sc.equal},
                            {"difference", sc.difference},
                            {"commutator_norm", sc.commutator_norm},
                            {"tolerance", sc.tolerance}};
        if (!as_json) {
            std::cout << "exp(a+b) vs exp(a)exp(b): " << (sc.equal ? "equal" : "unequal")
                      << " (difference " << sc.difference << ", |[a,b]| = " << sc.commutator_norm
                      << ")\n";
        }
    }
    if (as_json) std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

// --- integrate ----------------------------------------------------------------------

int run_integrate(const std::string& path, bool as_json) {
    DifferentialSpec spec = load_differential_spec_file(path);
    IntegrationResult r = integrate(spec);
    if (r.integrable) {
        auto monos = to_monomials(spec.alg, r.solution);
        if (as_json) {
            json doc;
            doc["integrable"] = true;
            doc["solution"] = monomials_to_string(monos);
            doc["verified"] = true;
            std::cout << doc.dump(2) << "\n";
        } else {
            std::cout << "y = " << monomials_to_string(monos) << "\n";
        }
        return kExitOk;
    }
    const auto& w = *r.witness;
    if (as_json) {
        json doc;
        doc["integrable"] = false;
        doc["witness"] = {{"order", w.order},
                          {"transposition", {w.transposition.first, w.transposition.second}},
                          {"difference", json::parse(form_to_json(w.difference, 0))}};
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "not integrable: the induced order-" << w.order
                  << " derivative is asymmetric under slots (" << w.transposition.first << " "
                  << w.transposition.second << ")\n";
        std::cout << "witness difference: " << form_to_string(w.difference) << "\n";
    }
    return kExitNoSolution;
}

// --- solve-tensor ---------------------------------------------------------------------

int run_solve_tensor(const AlgebraArgs& src, const std::string& map_name,
                     const std::string& matrix_text, bool as_json) {
    auto alg = src.resolve();
    int d = alg->dim();
    std::vector<Rational> f;
    if (!map_name.empty()) {
        if (map_name == "identity" || map_name == "delta") {
            f.assign(static_cast<std::size_t>(d) * d, Rational(0));
            for (int k = 0; k < d; ++k) f[k * d + k] = Rational(1);
        } else if (const auto* g = alg->find_generator(map_name)) {
            f = g->matrix;
        } else {
            throw ParseError("algebra '" + alg->name() + "' has no map named '" + map_name + "'");
        }
    } else if (!matrix_text.empty()) {
        if (has_decimal(matrix_text))
            throw ParseError("component solving runs on the exact path; use rationals");
        std::size_t start = 0;
        while (start <= matrix_text.size()) {
            std::size_t comma = matrix_text.find(',', start);
            std::string item = matrix_text.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            f.push_back(Rational::parse(item));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (f.size() != static_cast<std::size_t>(d) * d)
            throw ParseError("matrix needs dim^2 = " + std::to_string(d * d) +
                             " entries (row-major)");
    } else {
        throw ParseError("give the map as --map NAME or --matrix entries");
    }

    auto sc = solve_components(alg, f);

    auto gen_name = [&](int gen) {
        return gen == kDelta ? std::string("delta") : alg->generators()[gen].name;
    };
    if (as_json) {
        json parts = json::array();
        for (const auto& part : sc.parts) {
            json g = json::array();
            for (int i = 0; i < d; ++i) {
                json row = json::array();
                for (int j = 0; j < d; ++j) row.push_back(part.g[i * d + j].to_string());
                g.push_back(std::move(row));
            }
            parts.push_back({{"generator", gen_name(part.gen)}, {"g", std::move(g)}});
        }
        std::cout << parts.dump(2) << "\n";
    } else {
        for (const auto& part : sc.parts) {
            if (sc.parts.size() > 1 && StandardComponents<Rational>::part_zero(part)) continue;
            std::cout << gen_name(part.gen) << ":";
            bool any = false;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    const Rational& v = part.g[i * d + j];
                    if (v.is_zero()) continue;
                    std::cout << (any ? " + " : " ") << v.to_string() << "*(" << alg->basis()[i]
                              << "(.)" << alg->basis()[j] << ")";
                    any = true;
                }
            if (!any) std::cout << " 0";
            std::cout << "\n";
        }
    }
    return kExitOk;
}

// --- selftest ------------------------------------------------------------------------

int run_selftest(std::uint64_t seed) {
    bool ok = true;
    auto report = [&](const char* name, bool pass) {
        ok = ok && pass;
        std::cout << (pass ? "PASS " : "FAIL ") << name << "\n";
    };

    auto H = builtin_algebra<Rational>("quaternions");
    auto C = builtin_algebra<Rational>("complex");
    auto Hd = to_double_algebra(H);
    auto Cd = to_double_algebra(C);

    {
        bool pass = true;
        for (const char* name : {"reals", "complex", "quaternions", "octonions", "mat2x2", "dual"}) {
            try {
                builtin_algebra<Rational>(name);
            } catch (const Error&) {
                pass = false;
            }
        }
        report("builtin algebras verify their flags", pass);
    }
    {
        auto f = derivative(H, parse_expr(H, "x*x"), 1);
        report("derivative table: d(x^2) = h x + x h", form_to_string(f) == "h x + x h");
        auto r = check_derivative(Hd, parse_expr(Hd, "x*x"), 25, seed);
        report("finite-difference oracle agrees on x^2", r.pass);
    }
    {
        auto rbH = representation_basis(H);
        auto rbC = representation_basis(C);
        report("solve-matrix ranks (16 and 2)", rbH.rank_delta == 16 && rbC.rank_delta == 2);
        report("complex maps need conjugation",
               rbC.generators == std::vector<std::string>{"delta", "conj"});
    }
    {
        DifferentialSpec spec;
        spec.alg = H;
        spec.rhs.alg = H;
        spec.rhs.order = 1;
        for (int pos = 0; pos < 3; ++pos) {
            FormWord<Rational> w;
            w.prefactor = Rational(1);
            for (int i = 0; i < 4; ++i) w.segs.push_back(expr_const(Element<Rational>::unit(H)));
            w.slots = {Slot{pos == 0 ? 1 : 0}, Slot{pos == 1 ? 1 : 0}, Slot{pos == 2 ? 1 : 0}};
            spec.rhs.words.push_back(std::move(w));
        }
        spec.x0 = Element<Rational>::zero(H);
        spec.y0 = Element<Rational>::zero(H);
        auto r = integrate(spec);
        report("cubic specification integrates to x^3",
               r.integrable && expr_equal(H, r.solution, parse_expr(H, "x^3")));
    }
    {
        Element<double> ipi(Cd, {0.0, 3.14159265358979323846});
        auto r = exp_series(ipi, 30);
        report("exp(i pi) = -1",
               std::fabs(r.value[0] + 1) < 1e-10 && std::fabs(r.value[1]) < 1e-10);
        report("shuffle word count is 2^n", shuffle_words(8).size() == 256);
    }
    std::cout << (ok ? "selftest: all checks passed\n" : "selftest: FAILURES\n");
    return ok ? kExitOk : kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"calculus over finite-dimensional (noncommutative) algebras"};
    app.require_subcommand(1);

    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable JSON output");
    std::uint64_t seed = 12345;
    app.add_option("--seed", seed, "seed for sampled checks");

    AlgebraArgs alg_args;

    auto* cmd_algebra = app.add_subcommand("algebra", "inspect an algebra and its maps");
    alg_args.attach(cmd_algebra);
    bool check = false;
    cmd_algebra->add_flag("--check", check, "run the invariant suite");

    auto* cmd_diff = app.add_subcommand("diff", "symbolic derivative of an expression");
    alg_args.attach(cmd_diff);
    std::string expr_text, at;
    std::vector<std::string> dirs;
    int order = 1;
    cmd_diff->add_option("-e,--expr", expr_text, "expression in x")->required();
    cmd_diff->add_option("-n,--order", order, "derivative order (default 1)");
    cmd_diff->add_option("--at", at, "evaluation point coordinates");
    cmd_diff->add_option("--dir", dirs, "direction coordinates (repeat per order)");
    int fd_samples = 0;
    cmd_diff->add_option("--fd-samples", fd_samples,
                         "emit a finite-difference agreement report over N seeded samples");

    auto* cmd_taylor = app.add_subcommand("taylor", "Taylor reconstruction of a polynomial");
    alg_args.attach(cmd_taylor);
    std::string taylor_expr, taylor_at;
    cmd_taylor->add_option("-e,--expr", taylor_expr, "polynomial in x")->required();
    cmd_taylor->add_option("--at", taylor_at, "expansion point (default 0)");

    auto* cmd_exp = app.add_subcommand("exp", "truncated exponential series");
    alg_args.attach(cmd_exp);
    std::string exp_x, sum_with;
    int exp_order = 30;
    cmd_exp->add_option("-x", exp_x, "element coordinates")->required();
    cmd_exp->add_option("-N", exp_order, "truncation order (default 30)");
    cmd_exp->add_option("--sum-with", sum_with, "compare exp(a+b) with exp(a)exp(b)");

    auto* cmd_integrate = app.add_subcommand("integrate", "integrate a differential specification");
    std::string spec_path;
    cmd_integrate->add_option("spec", spec_path, "differential spec document (JSON)")->required();

    auto* cmd_solve = app.add_subcommand("solve-tensor", "standard components of a linear map");
    alg_args.attach(cmd_solve);
    std::string map_name, matrix_text;
    cmd_solve->add_option("--map", map_name, "named map (identity, conj, ...)");
    cmd_solve->add_option("--matrix", matrix_text, "dim^2 rational entries, row-major");

    auto* cmd_selftest = app.add_subcommand("selftest", "quick end-to-end checks");
    (void)cmd_selftest;

    // Let global flags (--json, --seed) appear after the subcommand too.
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cmd_algebra->parsed()) return run_algebra(alg_args, check, as_json);
        if (cmd_diff->parsed())
            return run_diff(alg_args, expr_text, order, at, dirs, fd_samples, seed, as_json);
        if (cmd_taylor->parsed()) return run_taylor(alg_args, taylor_expr, taylor_at, as_json);
        if (cmd_exp->parsed()) return run_exp(alg_args, exp_x, exp_order, sum_with, as_json);
        if (cmd_integrate->parsed()) return run_integrate(spec_path, as_json);
        if (cmd_solve->parsed()) return run_solve_tensor(alg_args, map_name, matrix_text, as_json);
        if (cmd_selftest->parsed()) return run_selftest(seed);
    } catch (const NoRepresentation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoSolution;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
