#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "kwle/errors.hpp"
#include "kwle/gof.hpp"
#include "kwle/mlefit.hpp"
#include "kwle/montecarlo.hpp"
#include "kwle/numerics.hpp"
#include "kwle/rng.hpp"

using namespace kwle;

TEST_SUITE_BEGIN("montecarlo");

TEST_CASE("relative efficiency is definitional for k = 1") {
    Matrix2 mle_cov;
    mle_cov.k = 1;
    mle_cov.a11 = 4.0;  // alpha^2 at alpha = 2
    const std::array<double, 2> truth = {2.0, 0.0};
    // MSE exactly alpha^2/n = 4/100
    std::vector<std::array<double, 2>> est = {{2.2, 0.0}, {1.8, 0.0}};
    CHECK(relative_efficiency(est, truth, 1, mle_cov, 100) ==
          doctest::Approx(1.0).epsilon(1e-14));
    // doubled deviations quarter the efficiency
    std::vector<std::array<double, 2>> est2 = {{2.4, 0.0}, {1.6, 0.0}};
    CHECK(relative_efficiency(est2, truth, 1, mle_cov, 100) ==
          doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("relative efficiency for k = 2 and degenerate input") {
    Matrix2 cov;
    cov.k = 2;
    cov.a11 = 1.0;
    cov.a12 = 0.0;
    cov.a22 = 0.5;
    const std::array<double, 2> truth = {1.0, 1.0};
    std::vector<std::array<double, 2>> est = {
        {1.1, 1.05}, {0.9, 0.95}, {1.1, 0.95}, {0.9, 1.05}};
    // M = diag(0.01, 0.0025), det M = 2.5e-5
    const double expected = std::sqrt(0.5) / 100.0 / std::sqrt(2.5e-5);
    CHECK(relative_efficiency(est, truth, 2, cov, 100) ==
          doctest::Approx(expected).epsilon(1e-12));

    std::vector<std::array<double, 2>> same = {{1.0, 1.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(relative_efficiency(same, truth, 2, cov, 100), DegenerateSampleError);
}

TEST_CASE("simulation report is deterministic and schedule independent") {
    SimulationConfig cfg;
    cfg.model = ModelSpec{Family::pareto_i, 1.0};
    cfg.truth = ModelParams::pareto(0.75);
    cfg.estimators = {EstimatorSpec::mle(), EstimatorSpec::kumaraswamy(1, 1)};
    cfg.n_values = {40};
    cfg.reps_per_batch = 25;
    cfg.batches = 4;
    cfg.master_seed = 2024;

    cfg.threads = 1;
    const SimulationReport r1 = run_simulation(cfg);
    const SimulationReport r2 = run_simulation(cfg);
    cfg.threads = 4;
    const SimulationReport r4 = run_simulation(cfg);

    REQUIRE(r1.cells.size() == r2.cells.size());
    REQUIRE(r1.cells.size() == r4.cells.size());
    for (std::size_t i = 0; i < r1.cells.size(); ++i) {
        CHECK(r1.cells[i].re == r2.cells[i].re);
        CHECK(r1.cells[i].re == r4.cells[i].re);
        CHECK(r1.cells[i].re_se == r4.cells[i].re_se);
        for (std::size_t j = 0; j < r1.cells[i].std_mean.size(); ++j) {
            CHECK(r1.cells[i].std_mean[j] == r4.cells[i].std_mean[j]);
        }
        CHECK(r1.cells[i].failures == r4.cells[i].failures);
    }
}

TEST_CASE("pareto MLE cell reproduces the exact finite-n mean and efficiency") {
    // E[alpha_hat]/alpha = n/(n-1); RE = (n-1)(n-2)/(n(n+2)) in closed form
    SimulationConfig cfg;
    cfg.model = ModelSpec{Family::pareto_i, 1.0};
    cfg.truth = ModelParams::pareto(0.75);
    cfg.estimators = {EstimatorSpec::mle()};
    cfg.n_values = {100};
    cfg.reps_per_batch = 400;
    cfg.batches = 5;
    cfg.master_seed = 99;
    const SimulationReport r = run_simulation(cfg);
    REQUIRE(r.cells.size() == 1);
    const SimulationCell& c = r.cells.front();
    CHECK(c.estimator == "MLE");
    CHECK(std::abs(c.std_mean[0] - 100.0 / 99.0) < 0.01);
    const double re_exact = 99.0 * 98.0 / (100.0 * 102.0);
    CHECK(std::abs(c.re - re_exact) < 5.0 * c.re_se / std::sqrt(5.0) + 0.02);
    CHECK(c.failures == 0);
}

TEST_CASE("failed replications are tallied and excluded") {
    // heavy central weighting on a tiny lognormal sample with a large sigma
    // produces negative variance proxies in some replications
    SimulationConfig cfg;
    cfg.model = ModelSpec{Family::lognormal, 0.0};
    cfg.truth = ModelParams::lognormal(5.0, 3.0);
    cfg.estimators = {EstimatorSpec::kumaraswamy(5, 5)};
    cfg.n_values = {8};
    cfg.reps_per_batch = 300;
    cfg.batches = 2;
    cfg.master_seed = 7;
    const SimulationReport r = run_simulation(cfg);
    REQUIRE(r.cells.size() == 1);
    CHECK(r.cells.front().failures > 0);
    CHECK(std::isfinite(r.cells.front().re));
}

TEST_CASE("csv layout has one row per estimator, n and parameter") {
    SimulationConfig cfg;
    cfg.model = ModelSpec{Family::lognormal, 0.0};
    cfg.truth = ModelParams::lognormal(5.0, 3.0);
    cfg.estimators = {EstimatorSpec::mle(), EstimatorSpec::kumaraswamy(1.2, 1.3)};
    cfg.n_values = {30, 60};
    cfg.reps_per_batch = 20;
    cfg.batches = 2;
    cfg.master_seed = 5;
    const SimulationReport r = run_simulation(cfg);
    const std::string csv = report_to_csv(r);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "estimator,a,b,n,parameter,std_mean,std_mean_se,re,re_se,failures");
    int rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2 * 2 * 2);  // estimators x n values x parameters
    CHECK(csv.find("\"J(1.2,1.3)\"") != std::string::npos);
}

TEST_CASE("standardized estimates look normal at n = 1000") {
    // KS screen of (alpha_hat - alpha)/asymptotic sd against the standard
    // normal, batch by batch
    const ModelSpec spec{Family::pareto_i, 1.0};
    const ModelParams truth = ModelParams::pareto(0.75);
    const double sd = truth.alpha / std::sqrt(1000.0);
    int batches_passing = 0;
    for (int batch = 0; batch < 10; ++batch) {
        std::vector<double> z;
        for (int rep = 0; rep < 300; ++rep) {
            const SortedSample s =
                sample_model(spec, truth, 1000, mix_key(mix_key(314159, batch), rep));
            z.push_back((mle_pareto(s, 1.0).params.alpha - truth.alpha) / sd);
        }
        std::sort(z.begin(), z.end());
        double d = 0.0;
        const double n = static_cast<double>(z.size());
        for (std::size_t i = 1; i <= z.size(); ++i) {
            const double f = std_normal_cdf(z[i - 1]);
            d = std::max({d, i / n - f, f - (i - 1) / n});
        }
        if (kolmogorov_pvalue(d, static_cast<int>(z.size())) >= 0.01) ++batches_passing;
    }
    CHECK(batches_passing >= 9);
}

TEST_CASE("finite-sample efficiency approaches the asymptotic value") {
    // n = 1000 RE within 3 combined standard errors of the quadrature ARE
    SimulationConfig cfg;
    cfg.model = ModelSpec{Family::pareto_i, 1.0};
    cfg.truth = ModelParams::pareto(0.75);
    cfg.estimators = {EstimatorSpec::kumaraswamy(1.2, 1.3)};
    cfg.n_values = {1000};
    cfg.reps_per_batch = 300;
    cfg.batches = 2;
    cfg.master_seed = 5551212;
    const SimulationReport r = run_simulation(cfg);
    const SimulationCell& cell = r.cells.front();
    const double are = are_value(Family::pareto_i, KumaraswamyShape(1.2, 1.3));
    const double se = cell.re_se / std::sqrt(2.0);
    CHECK(std::abs(cell.re - are) <= 3.0 * se + 0.02);
}

TEST_CASE("config validation") {
    SimulationConfig cfg;
    cfg.model = ModelSpec{Family::pareto_i, 1.0};
    cfg.truth = ModelParams::pareto(0.75);
    cfg.estimators = {EstimatorSpec::mle()};
    cfg.n_values = {10};
    cfg.reps_per_batch = 1;
    CHECK_THROWS_AS(run_simulation(cfg), std::domain_error);
    cfg.reps_per_batch = 10;
    cfg.batches = 1;
    CHECK_THROWS_AS(run_simulation(cfg), std::domain_error);
    cfg.batches = 2;
    cfg.estimators.clear();
    CHECK_THROWS_AS(run_simulation(cfg), std::domain_error);
}

TEST_SUITE_END();
