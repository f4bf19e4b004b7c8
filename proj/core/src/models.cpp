#include "kwle/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kwle/errors.hpp"
#include "kwle/numerics.hpp"
#include "kwle/rng.hpp"

namespace kwle {

std::string family_name(Family f) {
    switch (f) {
        case Family::pareto_i: return "pareto";
        case Family::lognormal: return "lognormal";
        case Family::frechet: return "frechet";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    if (name == "pareto" || name == "pareto_i" || name == "pareto1") return Family::pareto_i;
    if (name == "lognormal") return Family::lognormal;
    if (name == "frechet") return Family::frechet;
    throw std::domain_error("unknown model family: " + name);
}

int param_count(Family f) { return f == Family::pareto_i ? 1 : 2; }

ModelParams ModelParams::pareto(double alpha) {
    ModelParams p;
    p.alpha = alpha;
    return p;
}

ModelParams ModelParams::lognormal(double theta, double sigma) {
    ModelParams p;
    p.theta = theta;
    p.sigma = sigma;
    return p;
}

ModelParams ModelParams::frechet(double alpha, double sigma) {
    ModelParams p;
    p.alpha = alpha;
    p.sigma = sigma;
    return p;
}

void validate(const ModelSpec& spec, const ModelParams& params) {
    switch (spec.family) {
        case Family::pareto_i:
            if (!(spec.x0 > 0.0))
                throw std::domain_error("pareto: known threshold x0 must be positive");
            if (!(params.alpha > 0.0))
                throw std::domain_error("pareto: shape alpha must be positive");
            return;
        case Family::lognormal:
            if (!std::isfinite(spec.x0))
                throw std::domain_error("lognormal: threshold x0 must be finite");
            if (!std::isfinite(params.theta))
                throw std::domain_error("lognormal: theta must be finite");
            if (!(params.sigma > 0.0))
                throw std::domain_error("lognormal: sigma must be positive");
            return;
        case Family::frechet:
            if (!(params.alpha > 0.0))
                throw std::domain_error("frechet: shape alpha must be positive");
            if (!(params.sigma > 0.0))
                throw std::domain_error("frechet: scale sigma must be positive");
            return;
    }
    throw std::domain_error("invalid model family");
}

std::array<double, 2> param_vector(const ModelSpec& spec, const ModelParams& params) {
    switch (spec.family) {
        case Family::pareto_i: return {params.alpha, 0.0};
        case Family::lognormal: return {params.theta, params.sigma};
        case Family::frechet: return {params.alpha, params.sigma};
    }
    return {0.0, 0.0};
}

std::array<std::string, 2> param_names(Family f) {
    switch (f) {
        case Family::pareto_i: return {"alpha", ""};
        case Family::lognormal: return {"theta", "sigma"};
        case Family::frechet: return {"alpha", "sigma"};
    }
    return {"", ""};
}

double model_cdf(const ModelSpec& spec, const ModelParams& params, double x) {
    validate(spec, params);
    switch (spec.family) {
        case Family::pareto_i:
            if (x < spec.x0)
                throw SupportError("pareto cdf: x below the known threshold x0");
            if (x == spec.x0) return 0.0;
            return -std::expm1(-params.alpha * std::log(x / spec.x0));
        case Family::lognormal:
            if (x < spec.x0)
                throw SupportError("lognormal cdf: x below the threshold x0");
            if (x == spec.x0) return 0.0;
            return std_normal_cdf((std::log(x - spec.x0) - params.theta) / params.sigma);
        case Family::frechet:
            if (x < 0.0) throw SupportError("frechet cdf: x must be nonnegative");
            if (x == 0.0) return 0.0;
            return std::exp(-std::pow(params.sigma / x, params.alpha));
    }
    return 0.0;
}

double model_quantile(const ModelSpec& spec, const ModelParams& params, double u) {
    validate(spec, params);
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("model_quantile: u must lie in (0,1)");
    switch (spec.family) {
        case Family::pareto_i:
            return spec.x0 * std::exp(-std::log1p(-u) / params.alpha);
        case Family::lognormal:
            return spec.x0 + std::exp(params.theta + params.sigma * std_normal_quantile(u));
        case Family::frechet:
            return params.sigma * std::pow(-std::log(u), -1.0 / params.alpha);
    }
    return 0.0;
}

SortedSample make_sorted_sample(std::vector<double> values, std::string source) {
    if (values.empty()) throw std::domain_error("SortedSample: need at least one observation");
    std::sort(values.begin(), values.end());
    return SortedSample{std::move(values), std::move(source)};
}

SortedSample sample_model(const ModelSpec& spec, const ModelParams& params,
                          std::size_t n, std::uint64_t seed) {
    validate(spec, params);
    if (n == 0) throw std::domain_error("sample_model: n must be positive");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = model_quantile(spec, params, uniform_open(seed, i));
    return make_sorted_sample(std::move(x), "seed:" + std::to_string(seed));
}

HTransforms h_transforms(const ModelSpec& spec, const ModelParams& params) {
    validate(spec, params);
    HTransforms t;
    const double x0 = spec.x0;
    switch (spec.family) {
        case Family::pareto_i: {
            const double alpha = params.alpha;
            t.k = 1;
            t.h1 = [x0](double x) { return std::log(x / x0); };
            t.h2 = nullptr;
            t.H1_prime = [alpha](const UnitPoint& p) { return 1.0 / (alpha * p.om); };
            t.H2_prime = nullptr;
            return t;
        }
        case Family::lognormal: {
            const double theta = params.theta, sigma = params.sigma;
            t.k = 2;
            t.h1 = [x0](double x) { return std::log(x - x0); };
            t.h2 = [x0](double x) { const double l = std::log(x - x0); return l * l; };
            // H1(u) = theta + sigma q(u), q = normal quantile; H1' = sigma/phi(q)
            auto q_of = [](const UnitPoint& p) {
                return p.u <= 0.5 ? std_normal_quantile(p.u) : -std_normal_quantile(p.om);
            };
            t.H1_prime = [sigma, q_of](const UnitPoint& p) {
                return sigma / std_normal_pdf(q_of(p));
            };
            t.H2_prime = [theta, sigma, q_of](const UnitPoint& p) {
                const double q = q_of(p);
                return 2.0 * (theta + sigma * q) * sigma / std_normal_pdf(q);
            };
            return t;
        }
        case Family::frechet: {
            const double alpha = params.alpha;
            const double log_sigma = std::log(params.sigma);
            t.k = 2;
            t.h1 = [](double x) { return std::log(x); };
            t.h2 = [](double x) { const double l = std::log(x); return l * l; };
            // log u from the exact side; log(-log u) likewise
            auto log_u = [](const UnitPoint& p) {
                return p.u <= 0.5 ? std::log(p.u) : std::log1p(-p.om);
            };
            t.H1_prime = [alpha, log_u](const UnitPoint& p) {
                return -1.0 / (alpha * p.u * log_u(p));
            };
            t.H2_prime = [alpha, log_sigma, log_u](const UnitPoint& p) {
                const double lu = log_u(p);
                const double ll = std::log(-lu);
                return 2.0 / (alpha * p.u * lu) * (ll / alpha - log_sigma);
            };
            return t;
        }
    }
    throw std::domain_error("invalid model family");
}

}  // namespace kwle
