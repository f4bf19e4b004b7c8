#ifndef KWLE_MLEFIT_HPP
#define KWLE_MLEFIT_HPP

#include "kwle/lfit.hpp"
#include "kwle/models.hpp"

namespace kwle {

/// Asymptotic covariance S_MLE evaluated at the given parameters:
/// Pareto alpha^2; lognormal sigma^2 diag(1, 1/2); Frechet
/// (6/pi^2) [[alpha^2, (g-1) sigma], [(g-1) sigma, (sigma/alpha)^2 ((g-1)^2 + pi^2/6)]]
/// with g the Euler-Mascheroni constant.
Matrix2 mle_asymptotic_covariance(const ModelSpec& spec, const ModelParams& params);

/// alpha = n / sum log(x_i/x0); covariance alpha^2/n.
FitResult mle_pareto(const SortedSample& sample, double x0);

/// theta = mean log(x_i - x0); sigma = rms deviation with divisor n.
FitResult mle_lognormal(const SortedSample& sample, double x0 = 0.0);

/// alpha solves the strictly decreasing score
/// xi(a) = 1/a + sum x^-a log x / sum x^-a - mean log x = 0;
/// sigma = (mean x^-alpha)^(-1/alpha). Constant samples have no root and
/// raise DegenerateSampleError.
FitResult mle_frechet(const SortedSample& sample);

/// The Frechet profile score xi(alpha), evaluated with powers rescaled by the
/// sample minimum so large alpha cannot overflow.
double frechet_score(const SortedSample& sample, double alpha);

}  // namespace kwle

#endif  // KWLE_MLEFIT_HPP
