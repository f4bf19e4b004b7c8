#include "kwle/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace kwle {

KumaraswamyShape::KumaraswamyShape(double a_, double b_) : a(a_), b(b_) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("KumaraswamyShape: both shape parameters must be positive");
}

double kumaraswamy_density(const UnitPoint& p, const KumaraswamyShape& shape) {
    // log u from whichever side of the interval is exact
    const double lu = p.u <= 0.5 ? std::log(p.u) : std::log1p(-p.om);
    const double one_minus_ua = -std::expm1(shape.a * lu);
    return shape.a * shape.b *
           std::exp((shape.a - 1.0) * lu + (shape.b - 1.0) * std::log(one_minus_ua));
}

double kumaraswamy_density(double u, const KumaraswamyShape& shape) {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("kumaraswamy_density: u must lie in (0,1)");
    return kumaraswamy_density(UnitPoint{u, 1.0 - u}, shape);
}

double kumaraswamy_cdf(double u, const KumaraswamyShape& shape) {
    if (!(u >= 0.0 && u <= 1.0))
        throw std::domain_error("kumaraswamy_cdf: u must lie in [0,1]");
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    // 1 - (1-u^a)^b
    const double lua = shape.a * std::log(u);
    return -std::expm1(shape.b * std::log(-std::expm1(lua)));
}

double kumaraswamy_quantile(double p, const KumaraswamyShape& shape) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("kumaraswamy_quantile: p must lie in [0,1]");
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    const double inner = -std::expm1(std::log1p(-p) / shape.b);
    return std::pow(inner, 1.0 / shape.a);
}

std::vector<double> weight_vector(std::size_t n, const KumaraswamyShape& shape) {
    if (n == 0) throw std::domain_error("weight_vector: n must be positive");
    std::vector<double> w(n);
    const double denom = static_cast<double>(n) + 1.0;
    for (std::size_t i = 1; i <= n; ++i)
        w[i - 1] = kumaraswamy_density(static_cast<double>(i) / denom, shape);
    return w;
}

}  // namespace kwle
