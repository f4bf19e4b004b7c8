#ifndef KWLE_TESTS_FIXTURE_DATA_HPP
#define KWLE_TESTS_FIXTURE_DATA_HPP

#include <vector>

#include "kwle/models.hpp"

namespace kwle_tests {

// the 50-loss subsample used by the reference tables (same values as
// fixtures/indemnity50.csv)
inline const std::vector<double>& indemnity50() {
    static const std::vector<double> values = {
        1000,  3436,  5000,  7500,  9000,  10899, 14500, 20000, 30000, 95000,
        1500,  3486,  5000,  7525,  9250,  11667, 15000, 25000, 30000, 153874,
        1913,  4000,  5010,  8500,  9500,  12100, 19500, 25187, 32000, 337500,
        2500,  5000,  6000,  8939,  10000, 12875, 20000, 30000, 65000, 412998,
        2500,  5000,  6750,  9000,  10199, 14500, 20000, 30000, 74970, 2173595};
    return values;
}

inline kwle::SortedSample indemnity50_sample() {
    return kwle::make_sorted_sample(indemnity50(), "indemnity50");
}

inline kwle::SortedSample indemnity50_modified_sample() {
    std::vector<double> v = indemnity50();
    for (double& x : v)
        if (x == 2173595.0) x = 1e7;
    return kwle::make_sorted_sample(std::move(v), "indemnity50-modified");
}

}  // namespace kwle_tests

#endif
