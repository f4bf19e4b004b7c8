#include "kwle/gof.hpp"

#include <algorithm>

#include "kwle/numerics.hpp"

namespace kwle {

KsResult ks_test(const SortedSample& sample, const ModelSpec& spec, const ModelParams& params) {
    const std::size_t n = sample.n();
    double d = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double f = model_cdf(spec, params, sample.values[i - 1]);
        const double upper = static_cast<double>(i) / n - f;
        const double lower = f - static_cast<double>(i - 1) / n;
        d = std::max({d, upper, lower});
    }
    KsResult r;
    r.d = d;
    r.n = n;
    r.p_value = kolmogorov_pvalue(d, static_cast<int>(n));
    r.reject_at_5pct = r.p_value < 0.05;
    return r;
}

std::vector<std::pair<double, double>> qq_data(const SortedSample& sample,
                                               const ModelSpec& spec,
                                               const ModelParams& params) {
    const std::size_t n = sample.n();
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double u = static_cast<double>(i) / (static_cast<double>(n) + 1.0);
        pairs.emplace_back(model_quantile(spec, params, u), sample.values[i - 1]);
    }
    return pairs;
}

}  // namespace kwle
