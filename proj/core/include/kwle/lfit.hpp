#ifndef KWLE_LFIT_HPP
#define KWLE_LFIT_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kwle/models.hpp"
#include "kwle/quadrature.hpp"
#include "kwle/weights.hpp"

namespace kwle {

/// Sample L-moments mu_j = (1/n) sum_i J(i/(n+1)) h_j(X_{i:n}).
/// mu2 is absent for the single-moment Pareto fit.
struct LMomentPair {
    double mu1 = 0.0;
    std::optional<double> mu2;
};

/// c_k = int J(u) [F0^-1(u)]^k du and eta = c2 - c1^2 for a location-scale base.
struct LocationScaleConstants {
    double c1, c2, eta;
};

/// The three kernel double integrals of the location-scale covariance.
struct LambdaTriple {
    double lambda1, lambda2, lambda3;
};

/// I1 = int J log(1-u) du (negative) and the kernel double integral I2 (positive).
struct ParetoIntegrals {
    double i1, i2;
};

/// kappa_k = int J log(-log u)^k du, tau = kappa2 - kappa1^2, and the
/// Psi kernel double integrals.
struct FrechetConstants {
    double kappa1, kappa2, tau;
    double psi1, psi2, psi3;
};

/// Symmetric 1x1 or 2x2 covariance block.
struct Matrix2 {
    int k = 2;
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;

    double det() const { return k == 1 ? a11 : a11 * a22 - a12 * a12; }
};

struct FitResult {
    ModelSpec spec;
    ModelParams params;
    std::optional<KumaraswamyShape> shape;  // empty for an MLE fit
    LMomentPair moments;
    Matrix2 cov_over_n;                     // S/n at the fitted parameters; NaN when unavailable
    double are_vs_mle = 1.0;                // NaN when unavailable
    std::vector<std::string> warnings;
};

/// Which h transforms the L-moments use: the family's own (logs for the
/// severity models) or the raw moments h1(x)=x, h2(x)=x^2 of the generic
/// location-scale treatment (used by tests and the toy example only).
enum class MomentMode { family, raw };

LMomentPair sample_lmoments(const SortedSample& sample, const KumaraswamyShape& shape,
                            const ModelSpec& spec, MomentMode mode = MomentMode::family);

/// Quadrature settings scaled to the shape: small shape parameters need a
/// deeper graded mesh to resolve u^(a-1) / (1-u)^(b-1) boundary mass.
QuadratureSpec constants_quadrature_spec(const KumaraswamyShape& shape, bool two_dim);

LocationScaleConstants location_scale_constants(
    const std::function<double(const UnitPoint&)>& f0_quantile,
    const KumaraswamyShape& shape, const QuadratureSpec& spec);

LambdaTriple lambda_triple(const std::function<double(const UnitPoint&)>& f0_quantile,
                           const std::function<double(double)>& f0_density_at_quantile,
                           const KumaraswamyShape& shape, const QuadratureSpec& spec);

ParetoIntegrals pareto_integrals(const KumaraswamyShape& shape, const QuadratureSpec& spec);
FrechetConstants frechet_constants(const KumaraswamyShape& shape, const QuadratureSpec& spec);

/// Normal quantile evaluated from the exact side of the interval.
double normal_quantile_point(const UnitPoint& p);

/// Throws QuadratureError when the asymptotic-variance double integrals
/// provably diverge (or decay too slowly to evaluate) for this shape.
void require_variance_convergence(Family family, const KumaraswamyShape& shape);
bool variance_integrals_convergent(Family family, const KumaraswamyShape& shape);

/// Kumaraswamy-weighted fits. Point estimates always come from the closed
/// forms; the asymptotic covariance and ARE are filled from cached integral
/// constants and replaced by NaN (with a warning) for shapes whose variance
/// integrals do not converge.
FitResult fit_location_scale(const SortedSample& sample, const KumaraswamyShape& shape,
                             const ModelSpec& spec, MomentMode mode = MomentMode::family);
FitResult fit_lognormal(const SortedSample& sample, const KumaraswamyShape& shape, double x0 = 0.0);
FitResult fit_pareto(const SortedSample& sample, const KumaraswamyShape& shape, double x0);
FitResult fit_frechet(const SortedSample& sample, const KumaraswamyShape& shape);

/// Parameter-free asymptotic relative efficiency vs the MLE.
double are_value(Family family, const KumaraswamyShape& shape);

struct AreGrid {
    Family family;
    std::vector<double> a_values, b_values;
    std::vector<std::vector<double>> values;       // NaN where a cell failed
    std::vector<std::vector<std::string>> errors;  // failure reason per cell, "" if ok
};

/// Per-cell ARE over a (a, b) grid; cell failures are reported in place and
/// do not abort the remaining cells.
AreGrid are_grid(Family family, const std::vector<double>& a_values,
                 const std::vector<double>& b_values);

}  // namespace kwle

#endif  // KWLE_LFIT_HPP
