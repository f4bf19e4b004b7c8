#include "kwle/mlefit.hpp"

#include <cmath>
#include <stdexcept>

#include "kwle/errors.hpp"
#include "kwle/numerics.hpp"

namespace kwle {

Matrix2 mle_asymptotic_covariance(const ModelSpec& spec, const ModelParams& params) {
    validate(spec, params);
    Matrix2 m;
    switch (spec.family) {
        case Family::pareto_i:
            m.k = 1;
            m.a11 = params.alpha * params.alpha;
            return m;
        case Family::lognormal:
            m.k = 2;
            m.a11 = params.sigma * params.sigma;
            m.a12 = 0.0;
            m.a22 = 0.5 * params.sigma * params.sigma;
            return m;
        case Family::frechet: {
            m.k = 2;
            const double f = 6.0 / (pi * pi);
            const double g1 = euler_gamma - 1.0;
            m.a11 = f * params.alpha * params.alpha;
            m.a12 = f * g1 * params.sigma;
            const double r = params.sigma / params.alpha;
            m.a22 = f * r * r * (g1 * g1 + pi * pi / 6.0);
            return m;
        }
    }
    throw std::domain_error("mle_asymptotic_covariance: invalid family");
}

FitResult mle_pareto(const SortedSample& sample, double x0) {
    if (!(x0 > 0.0)) throw std::domain_error("mle_pareto: x0 must be positive");
    double sum = 0.0;
    for (double x : sample.values) {
        if (x < x0) throw SupportError("mle_pareto: observation below the threshold x0");
        sum += std::log(x / x0);
    }
    if (!(sum > 0.0))
        throw DegenerateSampleError("mle_pareto: sum of log(x/x0) is zero");
    const double n = static_cast<double>(sample.n());
    const double alpha = n / sum;

    FitResult fit;
    fit.spec = ModelSpec{Family::pareto_i, x0};
    fit.params = ModelParams::pareto(alpha);
    fit.cov_over_n = mle_asymptotic_covariance(fit.spec, fit.params);
    fit.cov_over_n.a11 /= n;
    fit.are_vs_mle = 1.0;
    return fit;
}

FitResult mle_lognormal(const SortedSample& sample, double x0) {
    if (sample.n() < 2)
        throw std::domain_error("mle_lognormal: need at least two observations");
    const double n = static_cast<double>(sample.n());
    double mean = 0.0;
    for (double x : sample.values) {
        if (!(x > x0)) throw SupportError("mle_lognormal: observation at or below the threshold");
        mean += std::log(x - x0);
    }
    mean /= n;
    double ss = 0.0;
    for (double x : sample.values) {
        const double d = std::log(x - x0) - mean;
        ss += d * d;
    }
    if (!(ss > 0.0))
        throw DegenerateSampleError("mle_lognormal: constant log sample, zero variance");
    const double sigma = std::sqrt(ss / n);  // divisor n, not n-1

    FitResult fit;
    fit.spec = ModelSpec{Family::lognormal, x0};
    fit.params = ModelParams::lognormal(mean, sigma);
    fit.cov_over_n = mle_asymptotic_covariance(fit.spec, fit.params);
    fit.cov_over_n.a11 /= n;
    fit.cov_over_n.a12 /= n;
    fit.cov_over_n.a22 /= n;
    fit.are_vs_mle = 1.0;
    return fit;
}

double frechet_score(const SortedSample& sample, double alpha) {
    const std::size_t n = sample.n();
    // powers rescaled so the largest term is exp(0): x^-a factored by min(x)^-a
    const double lmin = std::log(sample.values.front());
    double sw = 0.0, swl = 0.0, ml = 0.0;
    for (double x : sample.values) {
        const double lx = std::log(x);
        const double w = std::exp(-alpha * (lx - lmin));
        sw += w;
        swl += w * lx;
        ml += lx;
    }
    ml /= static_cast<double>(n);
    return 1.0 / alpha + swl / sw - ml;
}

FitResult mle_frechet(const SortedSample& sample) {
    if (sample.n() < 2)
        throw std::domain_error("mle_frechet: need at least two observations");
    for (double x : sample.values)
        if (!(x > 0.0)) throw SupportError("mle_frechet: observations must be positive");

    double alpha;
    try {
        alpha = find_root_decreasing(
            [&](double a) { return frechet_score(sample, a); }, 1e-3, 1e3, 1e-10);
    } catch (const BracketError&) {
        throw DegenerateSampleError(
            "mle_frechet: the score has no root (sample is constant or nearly so)");
    }

    const double n = static_cast<double>(sample.n());
    const double lmin = std::log(sample.values.front());
    double sw = 0.0;
    for (double x : sample.values) sw += std::exp(-alpha * (std::log(x) - lmin));
    // sigma = (mean x^-alpha)^(-1/alpha), undoing the min rescale
    const double sigma = std::exp(lmin - std::log(sw / n) / alpha);

    FitResult fit;
    fit.spec = ModelSpec{Family::frechet, 0.0};
    fit.params = ModelParams::frechet(alpha, sigma);
    fit.cov_over_n = mle_asymptotic_covariance(fit.spec, fit.params);
    fit.cov_over_n.a11 /= n;
    fit.cov_over_n.a12 /= n;
    fit.cov_over_n.a22 /= n;
    fit.are_vs_mle = 1.0;
    return fit;
}

}  // namespace kwle
