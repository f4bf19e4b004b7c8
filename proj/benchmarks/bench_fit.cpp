#include <benchmark/benchmark.h>

#include "kwle/lfit.hpp"
#include "kwle/mlefit.hpp"
#include "kwle/models.hpp"
#include "kwle/weights.hpp"

using namespace kwle;

namespace {

SortedSample lognormal_sample_1000() {
    return sample_model(ModelSpec{Family::lognormal, 0.0}, ModelParams::lognormal(5, 3), 1000,
                        8675309);
}

SortedSample frechet_sample_1000() {
    return sample_model(ModelSpec{Family::frechet, 0.0}, ModelParams::frechet(2, 2), 1000,
                        8675309);
}

void BM_sample_model_n1000(benchmark::State& state) {
    const ModelSpec spec{Family::lognormal, 0.0};
    const ModelParams params = ModelParams::lognormal(5, 3);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_model(spec, params, 1000, ++seed));
    }
}
BENCHMARK(BM_sample_model_n1000);

void BM_fit_lognormal_weighted(benchmark::State& state) {
    const SortedSample s = lognormal_sample_1000();
    const KumaraswamyShape shape(1.2, 1.3);
    (void)fit_lognormal(s, shape);  // warm the constants cache
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_lognormal(s, shape));
    }
}
BENCHMARK(BM_fit_lognormal_weighted);

void BM_mle_lognormal(benchmark::State& state) {
    const SortedSample s = lognormal_sample_1000();
    for (auto _ : state) {
        benchmark::DoNotOptimize(mle_lognormal(s, 0.0));
    }
}
BENCHMARK(BM_mle_lognormal);

void BM_mle_frechet_rootfind(benchmark::State& state) {
    const SortedSample s = frechet_sample_1000();
    for (auto _ : state) {
        benchmark::DoNotOptimize(mle_frechet(s));
    }
}
BENCHMARK(BM_mle_frechet_rootfind)->Unit(benchmark::kMillisecond);

}  // namespace
