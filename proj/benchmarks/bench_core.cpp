#include "ncalc/expr_parse.hpp"
#include "ncalc/form.hpp"
#include "ncalc/series.hpp"
#include "ncalc/tensor.hpp"

#include <benchmark/benchmark.h>

using namespace ncalc;

namespace {

template <class S>
Element<S> sample_element(const AlgebraPtr<S>& alg, int salt) {
    std::vector<S> c(alg->dim());
    for (int i = 0; i < alg->dim(); ++i)
        c[i] = scalar_traits<S>::from_ratio((salt + 3 * i) % 7 - 3, 2);
    return Element<S>(alg, std::move(c));
}

void BM_QuaternionMulExact(benchmark::State& state) {
    auto H = builtin_algebra<Rational>("quaternions");
    auto a = sample_element(H, 1);
    auto b = sample_element(H, 2);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_QuaternionMulExact);

void BM_OctonionMulDouble(benchmark::State& state) {
    auto O = builtin_algebra<double>("octonions");
    auto a = sample_element(O, 1);
    auto b = sample_element(O, 2);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_OctonionMulDouble);

void BM_Derivative(benchmark::State& state) {
    auto H = builtin_algebra<Rational>("quaternions");
    auto p = parse_expr(H, "i*x*j*x*k*x + x*x");
    int m = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(derivative(H, p, m));
}
BENCHMARK(BM_Derivative)->Arg(1)->Arg(2)->Arg(3);

void BM_SolveComponents(benchmark::State& state) {
    auto H = builtin_algebra<Rational>("quaternions");
    std::vector<Rational> conj(16, Rational(0));
    conj[0] = Rational(1);
    for (int k = 1; k < 4; ++k) conj[k * 4 + k] = Rational(-1);
    for (auto _ : state) benchmark::DoNotOptimize(solve_components(H, conj));
}
BENCHMARK(BM_SolveComponents);

void BM_SolveMatrixRank(benchmark::State& state) {
    auto O = builtin_algebra<Rational>("octonions");
    for (auto _ : state) {
        auto b = component_solve_matrix(*O);
        benchmark::DoNotOptimize(b.rank());
    }
}
BENCHMARK(BM_SolveMatrixRank);

void BM_ExpSeries(benchmark::State& state) {
    auto H = builtin_algebra<double>("quaternions");
    Element<double> x(H, {0.1, 0.7, -0.4, 0.2});
    for (auto _ : state) benchmark::DoNotOptimize(exp_series(x, 30));
}
BENCHMARK(BM_ExpSeries);

void BM_TaylorRoundTrip(benchmark::State& state) {
    auto H = builtin_algebra<Rational>("quaternions");
    auto p = parse_expr(H, "i*x*j*x + x*x*x");
    auto x0 = sample_element(H, 3);
    for (auto _ : state) benchmark::DoNotOptimize(taylor(p, x0));
}
BENCHMARK(BM_TaylorRoundTrip);

} // namespace
