#ifndef KWLE_NUMERICS_HPP
#define KWLE_NUMERICS_HPP

#include <functional>

namespace kwle {

/// Euler-Mascheroni constant.
inline constexpr double euler_gamma = 0.5772156649015329;
inline constexpr double pi = 3.14159265358979323846;

/// Standard normal density.
double std_normal_pdf(double x);

/// Standard normal cdf, absolute error below 1e-15 (erfc based).
double std_normal_cdf(double x);

/// Standard normal quantile. Rational approximation polished by Halley steps;
/// |cdf(result) - p| <= 1e-12. Throws std::domain_error for p outside (0,1).
double std_normal_quantile(double p);

/// Exact finite-n null distribution tail P(D_n >= d) of the one-sample
/// Kolmogorov-Smirnov statistic, via the Marsaglia-Tsang-Wang matrix power
/// method. Intended for n <= 10000.
double kolmogorov_pvalue(double d, int n);

/// Root of a strictly decreasing scalar function. The bracket [lo, hi] is
/// expanded geometrically (factor 10, at most 5 times per side) until
/// f(lo) > 0 > f(hi); then bisection to 1e-10 interval width plus a secant
/// polish targeting |f(root)| <= tol. Throws BracketError if no sign change
/// is found, which callers treat as a degenerate-sample signal.
double find_root_decreasing(const std::function<double(double)>& f,
                            double lo, double hi, double tol);

}  // namespace kwle

#endif  // KWLE_NUMERICS_HPP
