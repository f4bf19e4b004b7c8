#include "kwle/numerics.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kwle/errors.hpp"

namespace kwle {

double std_normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779399461;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
    static const double inv_sqrt2 = 0.7071067811865475244008444;
    return 0.5 * std::erfc(-x * inv_sqrt2);
}

namespace {

// Acklam's rational approximation to the normal quantile (~1.15e-9 relative).
double acklam_quantile(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("std_normal_quantile: p must lie in (0,1)");
    double x = acklam_quantile(p);
    // Halley polish; skipped in the far tails where the density underflows
    // (there the absolute cdf error is already far below 1e-12).
    for (int i = 0; i < 2; ++i) {
        const double pdf = std_normal_pdf(x);
        if (!(pdf > 0.0)) break;
        const double e = std_normal_cdf(x) - p;
        const double u = e / pdf;
        if (!std::isfinite(u)) break;
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

namespace {

// m x m row-major matrix product with overflow rescaling by 1e-140 blocks.
void matmul_scaled(const std::vector<double>& A, const std::vector<double>& B,
                   std::vector<double>& C, int m, int center, int& exponent) {
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (int l = 0; l < m; ++l) s += A[i * m + l] * B[l * m + j];
            C[i * m + j] = s;
        }
    }
    if (C[center * m + center] > 1e140) {
        for (double& v : C) v *= 1e-140;
        exponent += 140;
    }
}

}  // namespace

double kolmogorov_pvalue(double d, int n) {
    if (n < 1) throw std::domain_error("kolmogorov_pvalue: n must be positive");
    if (!(d >= 0.0 && d <= 1.0))
        throw std::domain_error("kolmogorov_pvalue: d must lie in [0,1]");
    if (d <= 0.0) return 1.0;
    if (d >= 1.0) return 0.0;
    const double nd = n * d;
    if (nd <= 0.5) return 1.0;  // D_n >= 1/(2n) always
    // When the asymptotic tail bound is already below representable interest,
    // return it directly; this also caps the matrix size.
    const double tail = 2.0 * std::exp(-2.0 * nd * nd / n);
    if (tail < 1e-16) return tail;

    const int k = static_cast<int>(std::ceil(nd));
    const double h = k - nd;
    const int m = 2 * k - 1;
    std::vector<double> H(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i - j + 1 >= 0) H[i * m + j] = 1.0;
    for (int i = 0; i < m; ++i) {
        H[i * m] -= std::pow(h, i + 1);
        H[(m - 1) * m + i] -= std::pow(h, m - i);
    }
    if (2.0 * h - 1.0 > 0.0) H[(m - 1) * m] += std::pow(2.0 * h - 1.0, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const int e = i - j + 1;
            if (e > 1) {
                double fact = 1.0;
                for (int l = 2; l <= e; ++l) fact *= l;
                H[i * m + j] /= fact;
            }
        }
    }

    // H^n by binary exponentiation with scale tracking.
    const int center = k - 1;
    std::vector<double> result(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) result[i * m + i] = 1.0;
    std::vector<double> base = H, tmp(static_cast<std::size_t>(m) * m);
    int e_result = 0, e_base = 0;
    int nn = n;
    while (nn > 0) {
        if (nn & 1) {
            int add = 0;
            matmul_scaled(result, base, tmp, m, center, add);
            result.swap(tmp);
            e_result += e_base + add;
        }
        nn >>= 1;
        if (nn) {
            int add = 0;
            matmul_scaled(base, base, tmp, m, center, add);
            base.swap(tmp);
            e_base = 2 * e_base + add;
        }
    }

    double s = result[center * m + center];
    int expo = e_result;
    for (int i = 1; i <= n; ++i) {
        s *= static_cast<double>(i) / n;
        if (s < 1e-140) {
            s *= 1e140;
            expo -= 140;
        }
    }
    const double cdf = s * std::pow(10.0, expo);
    double p = 1.0 - cdf;
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    return p;
}

double find_root_decreasing(const std::function<double(double)>& f,
                            double lo, double hi, double tol) {
    if (!(lo < hi)) throw std::domain_error("find_root_decreasing: need lo < hi");
    double flo = f(lo);
    double fhi = f(hi);
    for (int i = 0; i < 5 && !(flo > 0.0); ++i) {
        lo /= 10.0;
        flo = f(lo);
    }
    for (int i = 0; i < 5 && !(fhi < 0.0); ++i) {
        hi *= 10.0;
        fhi = f(hi);
    }
    if (!(flo > 0.0) || !(fhi < 0.0))
        throw BracketError("find_root_decreasing: no sign change after bracket expansion "
                           "(f(" + std::to_string(lo) + ")=" + std::to_string(flo) +
                           ", f(" + std::to_string(hi) + ")=" + std::to_string(fhi) + ")");

    double mid = 0.5 * (lo + hi);
    while (hi - lo > 1e-10 * std::max(1.0, std::abs(mid))) {
        mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm > 0.0)
            lo = mid;
        else
            hi = mid;
    }

    // secant polish inside the final bracket
    double x0 = lo, x1 = hi, f0 = f(lo), f1 = f(hi);
    double best = std::abs(f0) < std::abs(f1) ? x0 : x1;
    double fbest = std::min(std::abs(f0), std::abs(f1));
    for (int i = 0; i < 12 && fbest > tol; ++i) {
        const double denom = f1 - f0;
        double x2 = denom != 0.0 ? x1 - f1 * (x1 - x0) / denom : 0.5 * (x0 + x1);
        if (!(x2 >= lo && x2 <= hi)) x2 = 0.5 * (x0 + x1);
        const double f2 = f(x2);
        if (std::abs(f2) < fbest) {
            fbest = std::abs(f2);
            best = x2;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
    }
    return best;
}

}  // namespace kwle
