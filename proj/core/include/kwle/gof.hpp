#ifndef KWLE_GOF_HPP
#define KWLE_GOF_HPP

#include <utility>
#include <vector>

#include "kwle/models.hpp"

namespace kwle {

struct KsResult {
    double d = 0.0;
    double p_value = 1.0;
    bool reject_at_5pct = false;
    std::size_t n = 0;
};

/// One-sample Kolmogorov-Smirnov test of the sample against a fully specified
/// model (simple null; the supplied parameters are treated as known).
/// D = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n).
KsResult ks_test(const SortedSample& sample, const ModelSpec& spec, const ModelParams& params);

/// QQ data for external plotting: (F^-1(i/(n+1)), X_(i)) for i = 1..n.
std::vector<std::pair<double, double>> qq_data(const SortedSample& sample,
                                               const ModelSpec& spec,
                                               const ModelParams& params);

}  // namespace kwle

#endif  // KWLE_GOF_HPP
