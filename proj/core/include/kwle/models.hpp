#ifndef KWLE_MODELS_HPP
#define KWLE_MODELS_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "kwle/quadrature.hpp"

namespace kwle {

enum class Family { pareto_i, lognormal, frechet };

std::string family_name(Family f);
Family family_from_name(const std::string& name);
int param_count(Family f);

/// Which severity family, plus its fixed threshold where applicable:
/// Pareto I has a known scale x0 > 0; the lognormal threshold defaults to 0;
/// the Frechet location is fixed at 0 and x0 is unused.
struct ModelSpec {
    Family family = Family::lognormal;
    double x0 = 0.0;
};

/// Parameter vector of one family. Unused slots stay NaN.
struct ModelParams {
    double alpha = std::numeric_limits<double>::quiet_NaN();  // pareto/frechet shape
    double theta = std::numeric_limits<double>::quiet_NaN();  // lognormal log-location
    double sigma = std::numeric_limits<double>::quiet_NaN();  // lognormal/frechet scale

    static ModelParams pareto(double alpha);
    static ModelParams lognormal(double theta, double sigma);
    static ModelParams frechet(double alpha, double sigma);
};

/// Throws std::domain_error when the spec/params combination is invalid
/// (missing x0, non-positive shape or scale, NaN slots in use).
void validate(const ModelSpec& spec, const ModelParams& params);

/// Parameter values in reporting order: pareto {alpha}, lognormal
/// {theta, sigma}, frechet {alpha, sigma}.
std::array<double, 2> param_vector(const ModelSpec& spec, const ModelParams& params);
std::array<std::string, 2> param_names(Family f);

double model_cdf(const ModelSpec& spec, const ModelParams& params, double x);
double model_quantile(const ModelSpec& spec, const ModelParams& params, double u);

/// Ascending order statistics with a provenance tag.
struct SortedSample {
    std::vector<double> values;  // nondecreasing
    std::string source;

    std::size_t n() const { return values.size(); }
};

SortedSample make_sorted_sample(std::vector<double> values, std::string source);

/// n iid draws by inverse-cdf over a counter-based uniform stream keyed by
/// seed; identical seed gives the identical sample on any platform or worker
/// count. Output is sorted ascending.
SortedSample sample_model(const ModelSpec& spec, const ModelParams& params,
                          std::size_t n, std::uint64_t seed);

/// The h transforms and the u-space derivatives H_j'(u) of H_j = h_j o F^-1
/// used by the L-moment machinery. k is 1 for Pareto, 2 otherwise.
struct HTransforms {
    int k;
    std::function<double(double)> h1, h2;
    std::function<double(const UnitPoint&)> H1_prime, H2_prime;
};

HTransforms h_transforms(const ModelSpec& spec, const ModelParams& params);

}  // namespace kwle

#endif  // KWLE_MODELS_HPP
