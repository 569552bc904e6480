#include <benchmark/benchmark.h>

#include <complex>

#include "qzeta/qzeta.hpp"
#include "qzeta/zeros.hpp"

using qzeta::Cx;
using qzeta::QParam;

namespace {

void BM_expansion(benchmark::State& state) {
    const QParam qp(0.5);
    const Cx s(-0.5, 10.0);
    for (auto _ : state) {
        auto out = qzeta::zeta_expansion(qzeta::zeta_nu_spec(s, 1), qp);
        benchmark::DoNotOptimize(out.value);
    }
}
BENCHMARK(BM_expansion);

void BM_direct_convergent(benchmark::State& state) {
    const QParam qp(0.5);
    const Cx s(3.0, 0.0);
    for (auto _ : state) {
        auto out = qzeta::f_direct(qzeta::zeta_nu_spec(s, 1), qp);
        benchmark::DoNotOptimize(out.value);
    }
}
BENCHMARK(BM_direct_convergent);

void BM_em_certified(benchmark::State& state) {
    const QParam qp(0.3);
    const Cx s(-1.5, 0.5);
    const auto params = qzeta::auto_params(s, 1, qp, 1e-5);
    for (auto _ : state) {
        auto out = qzeta::zeta_em(s, 1, qp, params);
        benchmark::DoNotOptimize(out.value);
    }
}
BENCHMARK(BM_em_certified);

void BM_auto_params(benchmark::State& state) {
    const QParam qp(0.3);
    const Cx s(-1.5, 0.5);
    for (auto _ : state) {
        auto p = qzeta::auto_params(s, 1, qp, 1e-5);
        benchmark::DoNotOptimize(p.N);
    }
}
BENCHMARK(BM_auto_params);

void BM_newton_zero(benchmark::State& state) {
    const QParam qp(0.99);
    const Cx guess(0.5, 14.13472);
    for (auto _ : state) {
        auto z = qzeta::find_complex_zero(1, qp, guess);
        benchmark::DoNotOptimize(z.s);
    }
}
BENCHMARK(BM_newton_zero);

} // namespace

BENCHMARK_MAIN();
