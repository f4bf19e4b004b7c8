#include <benchmark/benchmark.h>

#include <cmath>

#include "kwle/lfit.hpp"
#include "kwle/numerics.hpp"
#include "kwle/quadrature.hpp"
#include "kwle/weights.hpp"

using namespace kwle;

namespace {

void BM_integrate_1d_log_singular(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            integrate_1d([](const UnitPoint& p) { return std::log(p.om) * std::log(p.u); }));
    }
}
BENCHMARK(BM_integrate_1d_log_singular);

void BM_kernel_mass_2d(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_2d(
            [](const UnitPoint& v, const UnitPoint& w) { return bridge_kernel(v, w); },
            quadrature_spec_2d(), Symmetry2d::symmetric));
    }
}
BENCHMARK(BM_kernel_mass_2d);

void BM_are_cell(benchmark::State& state) {
    // one full efficiency evaluation per family; the constant caches are
    // shape keyed, so each iteration perturbs b to measure the cold path
    const Family family = static_cast<Family>(state.range(0));
    double b = 2.0;
    for (auto _ : state) {
        b += 1e-7;
        benchmark::DoNotOptimize(are_value(family, KumaraswamyShape(1.2, b)));
    }
}
BENCHMARK(BM_are_cell)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_kolmogorov_pvalue_n1500(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(kolmogorov_pvalue(0.0266, 1500));
    }
}
BENCHMARK(BM_kolmogorov_pvalue_n1500)->Unit(benchmark::kMillisecond);

void BM_std_normal_quantile(benchmark::State& state) {
    double p = 0.0001;
    for (auto _ : state) {
        p += 1e-9;
        benchmark::DoNotOptimize(std_normal_quantile(p));
    }
}
BENCHMARK(BM_std_normal_quantile);

}  // namespace
