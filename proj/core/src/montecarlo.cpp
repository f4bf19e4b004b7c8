#include "kwle/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "kwle/errors.hpp"
#include "kwle/mlefit.hpp"
#include "kwle/rng.hpp"

namespace kwle {

std::string EstimatorSpec::label() const {
    if (!shape) return "MLE";
    std::ostringstream os;
    os << "J(" << shape->a << "," << shape->b << ")";
    return os.str();
}

double relative_efficiency(const std::vector<std::array<double, 2>>& estimates,
                           const std::array<double, 2>& truth, int k,
                           const Matrix2& mle_cov_at_truth, std::size_t n) {
    if (estimates.size() < 2)
        throw std::domain_error("relative_efficiency: need at least two estimates");
    if (k != 1 && k != 2)
        throw std::domain_error("relative_efficiency: k must be 1 or 2");

    double m11 = 0.0, m12 = 0.0, m22 = 0.0;
    for (const auto& e : estimates) {
        const double d1 = e[0] - truth[0];
        m11 += d1 * d1;
        if (k == 2) {
            const double d2 = e[1] - truth[1];
            m12 += d1 * d2;
            m22 += d2 * d2;
        }
    }
    const double cnt = static_cast<double>(estimates.size());
    m11 /= cnt;
    m12 /= cnt;
    m22 /= cnt;
    const double det_m = k == 1 ? m11 : m11 * m22 - m12 * m12;
    if (!(det_m > 0.0))
        throw DegenerateSampleError("relative_efficiency: singular empirical MSE matrix");
    const double det_mle_over_n = mle_cov_at_truth.det() / std::pow(static_cast<double>(n), k);
    return std::pow(det_mle_over_n, 1.0 / k) / std::pow(det_m, 1.0 / k);
}

namespace {

struct BatchStats {
    std::vector<double> std_mean;  // per parameter
    double re = 0.0;
    int failures = 0;
    bool valid = false;
};

std::array<double, 2> fit_one(const ModelSpec& model, const EstimatorSpec& est,
                              const SortedSample& sample) {
    FitResult fit;
    if (!est.shape) {
        switch (model.family) {
            case Family::pareto_i: fit = mle_pareto(sample, model.x0); break;
            case Family::lognormal: fit = mle_lognormal(sample, model.x0); break;
            case Family::frechet: fit = mle_frechet(sample); break;
        }
    } else {
        switch (model.family) {
            case Family::pareto_i: fit = fit_pareto(sample, *est.shape, model.x0); break;
            case Family::lognormal: fit = fit_lognormal(sample, *est.shape, model.x0); break;
            case Family::frechet: fit = fit_frechet(sample, *est.shape); break;
        }
    }
    return param_vector(model, fit.params);
}

}  // namespace

SimulationReport run_simulation(const SimulationConfig& config) {
    validate(config.model, config.truth);
    if (config.reps_per_batch < 2)
        throw std::domain_error("run_simulation: reps_per_batch must be at least 2");
    if (config.batches < 2)
        throw std::domain_error("run_simulation: batches must be at least 2 for standard errors");
    if (config.estimators.empty())
        throw std::domain_error("run_simulation: no estimators given");
    if (config.n_values.empty())
        throw std::domain_error("run_simulation: no sample sizes given");

    const int k = param_count(config.model.family);
    const std::array<double, 2> truth = param_vector(config.model, config.truth);
    const Matrix2 mle_cov = mle_asymptotic_covariance(config.model, config.truth);
    const std::size_t n_est = config.estimators.size();

    // warm the constant caches before fanning out
    for (const auto& est : config.estimators) {
        if (!est.shape) continue;
        try {
            (void)are_value(config.model.family, *est.shape);
        } catch (const QuadratureError&) {
            // point estimation still works; covariance is never needed here
        }
    }

    SimulationReport report;
    report.family = config.model.family;
    report.truth = truth;
    report.k = k;
    report.reps_per_batch = config.reps_per_batch;
    report.batches = config.batches;
    report.master_seed = config.master_seed;

    for (std::size_t n : config.n_values) {
        const std::uint64_t n_key = mix_key(config.master_seed, n);

        // batch -> estimator -> stats
        std::vector<std::vector<BatchStats>> stats(
            config.batches, std::vector<BatchStats>(n_est));

        auto run_batch = [&](int batch) {
            const std::uint64_t batch_key = mix_key(n_key, static_cast<std::uint64_t>(batch));
            std::vector<std::vector<std::array<double, 2>>> kept(n_est);
            std::vector<int> failures(n_est, 0);
            for (int rep = 0; rep < config.reps_per_batch; ++rep) {
                const std::uint64_t seed = mix_key(batch_key, static_cast<std::uint64_t>(rep));
                const SortedSample sample = sample_model(config.model, config.truth, n, seed);
                for (std::size_t e = 0; e < n_est; ++e) {
                    try {
                        kept[e].push_back(fit_one(config.model, config.estimators[e], sample));
                    } catch (const NegativeVarianceProxyError&) {
                        ++failures[e];
                    } catch (const DegenerateSampleError&) {
                        ++failures[e];
                    }
                }
            }
            for (std::size_t e = 0; e < n_est; ++e) {
                BatchStats& bs = stats[batch][e];
                bs.failures = failures[e];
                if (kept[e].size() < 2) continue;
                bs.std_mean.assign(k, 0.0);
                for (const auto& est : kept[e])
                    for (int j = 0; j < k; ++j) bs.std_mean[j] += est[j];
                for (int j = 0; j < k; ++j)
                    bs.std_mean[j] /= static_cast<double>(kept[e].size()) * truth[j];
                bs.re = relative_efficiency(kept[e], truth, k, mle_cov, n);
                bs.valid = true;
            }
        };

        int threads = config.threads > 0
                          ? config.threads
                          : static_cast<int>(std::thread::hardware_concurrency());
        threads = std::max(1, std::min(threads, config.batches));
        if (threads == 1) {
            for (int b = 0; b < config.batches; ++b) run_batch(b);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t) {
                pool.emplace_back([&, t] {
                    for (int b = t; b < config.batches; b += threads) run_batch(b);
                });
            }
            for (auto& th : pool) th.join();
        }

        for (std::size_t e = 0; e < n_est; ++e) {
            SimulationCell cell;
            cell.estimator = config.estimators[e].label();
            if (config.estimators[e].shape) {
                cell.a = config.estimators[e].shape->a;
                cell.b = config.estimators[e].shape->b;
            } else {
                cell.a = cell.b = std::numeric_limits<double>::quiet_NaN();
            }
            cell.n = n;
            cell.std_mean.assign(k, 0.0);
            cell.std_mean_se.assign(k, 0.0);

            int valid = 0;
            double re_sum = 0.0;
            for (int b = 0; b < config.batches; ++b) {
                const BatchStats& bs = stats[b][e];
                cell.failures += bs.failures;
                if (!bs.valid) continue;
                ++valid;
                re_sum += bs.re;
                for (int j = 0; j < k; ++j) cell.std_mean[j] += bs.std_mean[j];
            }
            if (valid >= 2) {
                cell.re = re_sum / valid;
                for (int j = 0; j < k; ++j) cell.std_mean[j] /= valid;
                double re_ss = 0.0;
                std::vector<double> mean_ss(k, 0.0);
                for (int b = 0; b < config.batches; ++b) {
                    const BatchStats& bs = stats[b][e];
                    if (!bs.valid) continue;
                    re_ss += (bs.re - cell.re) * (bs.re - cell.re);
                    for (int j = 0; j < k; ++j)
                        mean_ss[j] += (bs.std_mean[j] - cell.std_mean[j]) *
                                      (bs.std_mean[j] - cell.std_mean[j]);
                }
                cell.re_se = std::sqrt(re_ss / (valid - 1));
                for (int j = 0; j < k; ++j)
                    cell.std_mean_se[j] = std::sqrt(mean_ss[j] / (valid - 1));
            } else {
                cell.re = cell.re_se = std::numeric_limits<double>::quiet_NaN();
                for (int j = 0; j < k; ++j)
                    cell.std_mean[j] = cell.std_mean_se[j] =
                        std::numeric_limits<double>::quiet_NaN();
            }
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

std::string report_to_csv(const SimulationReport& report) {
    std::ostringstream os;
    os.precision(6);
    const auto names = param_names(report.family);
    os << "estimator,a,b,n,parameter,std_mean,std_mean_se,re,re_se,failures\n";
    for (const auto& cell : report.cells) {
        for (int j = 0; j < report.k; ++j) {
            os << '"' << cell.estimator << "\",";  // label contains commas
            if (std::isnan(cell.a))
                os << ",,";
            else
                os << cell.a << "," << cell.b << ",";
            os << cell.n << "," << names[j] << "," << cell.std_mean[j] << ","
               << cell.std_mean_se[j] << "," << cell.re << "," << cell.re_se << ","
               << cell.failures << "\n";
        }
    }
    return os.str();
}

}  // namespace kwle
