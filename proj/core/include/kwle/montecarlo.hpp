#ifndef KWLE_MONTECARLO_HPP
#define KWLE_MONTECARLO_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kwle/lfit.hpp"
#include "kwle/models.hpp"
#include "kwle/weights.hpp"

namespace kwle {

/// One estimator of the study: either the MLE or a Kumaraswamy-weighted fit.
struct EstimatorSpec {
    std::optional<KumaraswamyShape> shape;  // empty = MLE

    static EstimatorSpec mle() { return {}; }
    static EstimatorSpec kumaraswamy(double a, double b) {
        EstimatorSpec e;
        e.shape = KumaraswamyShape(a, b);
        return e;
    }
    std::string label() const;
};

struct SimulationConfig {
    ModelSpec model;
    ModelParams truth;
    std::vector<EstimatorSpec> estimators;
    std::vector<std::size_t> n_values;
    int reps_per_batch = 1000;
    int batches = 10;
    std::uint64_t master_seed = 0;
    int threads = 0;  // 0 = hardware concurrency, capped at the batch count
};

/// Across-batch mean and standard deviation (of batch-level statistics) for
/// one (estimator, n) cell, mirroring the study tables.
struct SimulationCell {
    std::string estimator;
    double a = 0.0, b = 0.0;  // NaN for the MLE row
    std::size_t n = 0;
    std::vector<double> std_mean;     // per parameter: mean(estimate)/truth
    std::vector<double> std_mean_se;  // across-batch SD of the batch means
    double re = 0.0;
    double re_se = 0.0;
    int failures = 0;  // replications excluded (negative variance proxy etc.)
};

struct SimulationReport {
    Family family;
    std::array<double, 2> truth;
    int k;
    int reps_per_batch, batches;
    std::uint64_t master_seed;
    std::vector<SimulationCell> cells;
};

/// Finite-sample relative efficiency: det(S_MLE/n)^(1/k) over det(M)^(1/k),
/// where M is the empirical MSE matrix about the true parameters.
double relative_efficiency(const std::vector<std::array<double, 2>>& estimates,
                           const std::array<double, 2>& truth, int k,
                           const Matrix2& mle_cov_at_truth, std::size_t n);

/// Runs the batched study. Per-replication seeds are derived from
/// (master_seed, n, batch, rep), so the report is identical for any worker
/// count. Failed replications are tallied per cell and excluded from that
/// batch's statistics.
SimulationReport run_simulation(const SimulationConfig& config);

/// Tables 5-7 style layout, one row per (estimator, n, parameter).
std::string report_to_csv(const SimulationReport& report);

}  // namespace kwle

#endif  // KWLE_MONTECARLO_HPP
