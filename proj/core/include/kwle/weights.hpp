#ifndef KWLE_WEIGHTS_HPP
#define KWLE_WEIGHTS_HPP

#include <cstddef>
#include <vector>

#include "kwle/quadrature.hpp"

namespace kwle {

/// Shape pair (a, b) of the Kumaraswamy weight-generating density.
/// a controls the lower tail, b the upper tail; both must be positive.
struct KumaraswamyShape {
    double a;
    double b;

    KumaraswamyShape(double a_, double b_);
};

/// J(u; a, b) = a b u^(a-1) (1 - u^a)^(b-1) on the open interval.
/// Evaluated in log space so that shapes below 1 stay finite and accurate
/// arbitrarily close to the endpoints. Throws std::domain_error outside (0,1).
double kumaraswamy_density(double u, const KumaraswamyShape& shape);

/// Endpoint-stable overload used by the quadrature mesh: the factor 1-u^a is
/// computed from om = 1-u via log1p/expm1, which stays exact on panels far
/// closer to 1 than machine epsilon.
double kumaraswamy_density(const UnitPoint& p, const KumaraswamyShape& shape);

/// CDF 1 - (1 - u^a)^b on [0,1].
double kumaraswamy_cdf(double u, const KumaraswamyShape& shape);

/// Quantile (1 - (1-p)^(1/b))^(1/a) on (0,1); endpoints map to themselves.
double kumaraswamy_quantile(double p, const KumaraswamyShape& shape);

/// Weights applied to the order statistics: w_i = J(i/(n+1)), i = 1..n.
/// No renormalization is applied; the 1/n prefactor lives in the L-moment sum.
std::vector<double> weight_vector(std::size_t n, const KumaraswamyShape& shape);

}  // namespace kwle

#endif  // KWLE_WEIGHTS_HPP
