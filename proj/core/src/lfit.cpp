#include "kwle/lfit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "kwle/errors.hpp"
#include "kwle/numerics.hpp"

namespace kwle {

namespace {

double log_u(const UnitPoint& p) {
    return p.u <= 0.5 ? std::log(p.u) : std::log1p(-p.om);
}

double log_neg_log_u(const UnitPoint& p) { return std::log(-log_u(p)); }

// Shape-keyed caches for the parameter-free integral constants. The
// simulation harness refits thousands of samples per shape, so these are
// computed once and shared; reads after the one-time insert are lock-brief.
struct ShapeKey {
    double a, b;
    bool operator<(const ShapeKey& o) const {
        return a < o.a || (a == o.a && b < o.b);
    }
};

template <typename T>
class ShapeCache {
public:
    template <typename Fn>
    T get(const KumaraswamyShape& s, Fn&& compute) {
        const ShapeKey key{s.a, s.b};
        std::lock_guard<std::mutex> lock(mu_);
        auto it = map_.find(key);
        if (it == map_.end()) it = map_.emplace(key, compute()).first;
        return it->second;
    }

private:
    std::mutex mu_;
    std::map<ShapeKey, T> map_;
};

ShapeCache<LocationScaleConstants> g_normal_base_cache;
ShapeCache<LambdaTriple> g_normal_lambda_cache;
ShapeCache<double> g_pareto_i1_cache;
ShapeCache<double> g_pareto_i2_cache;
ShapeCache<std::array<double, 3>> g_frechet_base_cache;  // kappa1, kappa2, tau
ShapeCache<std::array<double, 3>> g_frechet_psi_cache;

}  // namespace

double normal_quantile_point(const UnitPoint& p) {
    return p.u <= 0.5 ? std_normal_quantile(p.u) : -std_normal_quantile(p.om);
}

QuadratureSpec constants_quadrature_spec(const KumaraswamyShape& shape, bool two_dim) {
    const double m = std::min({1.0, shape.a, shape.b});
    QuadratureSpec spec;
    spec.abs_tol = two_dim ? 1e-8 : 1e-10;
    spec.rel_tol = 1e-8;
    if (two_dim) {
        // the corner tail of the kernel double integrals decays like
        // 2^(-(2m-1) depth) times log factors
        const double rate = 2.0 * m - 1.0;
        spec.max_depth = rate > 0.0
                             ? std::clamp(static_cast<int>(std::ceil(60.0 / rate)), 64, 300)
                             : 300;
    } else {
        spec.max_depth = std::clamp(static_cast<int>(std::ceil(72.0 / m)), 60, 300);
    }
    return spec;
}

bool variance_integrals_convergent(Family family, const KumaraswamyShape& shape) {
    switch (family) {
        case Family::pareto_i: return shape.b > 0.5;
        case Family::lognormal: return shape.a > 0.5 && shape.b > 0.5;
        case Family::frechet: return shape.a > 0.5 && shape.b > 0.5;
    }
    return false;
}

void require_variance_convergence(Family family, const KumaraswamyShape& shape) {
    if (variance_integrals_convergent(family, shape)) return;
    std::string why;
    if (shape.b <= 0.5)
        why = "the upper-tail weight exponent b-1 <= -1/2 makes the kernel double "
              "integral diverge at u=1";
    else if (family == Family::frechet && shape.a == 0.5)
        why = "the a=1/2 boundary decays only like 1/log and cannot be integrated "
              "to tolerance";
    else
        why = "the lower-tail weight exponent a-1 <= -1/2 makes the kernel double "
              "integral diverge at u=0";
    throw QuadratureError("asymptotic variance of the " + family_name(family) +
                          " L-estimator at (a=" + std::to_string(shape.a) +
                          ", b=" + std::to_string(shape.b) + ") is not finite: " + why);
}

LMomentPair sample_lmoments(const SortedSample& sample, const KumaraswamyShape& shape,
                            const ModelSpec& spec, MomentMode mode) {
    const std::size_t n = sample.n();
    if (n == 0) throw std::domain_error("sample_lmoments: empty sample");
    const std::vector<double> w = weight_vector(n, shape);

    const bool single = spec.family == Family::pareto_i && mode == MomentMode::family;
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = sample.values[i];
        double t1, t2 = 0.0;
        if (mode == MomentMode::raw) {
            t1 = x;
            t2 = x * x;
        } else {
            switch (spec.family) {
                case Family::pareto_i:
                    if (x < spec.x0)
                        throw SupportError("sample_lmoments: observation below the Pareto threshold");
                    t1 = std::log(x / spec.x0);
                    break;
                case Family::lognormal: {
                    if (!(x > spec.x0))
                        throw SupportError("sample_lmoments: observation at or below the lognormal threshold");
                    const double l = std::log(x - spec.x0);
                    t1 = l;
                    t2 = l * l;
                    break;
                }
                case Family::frechet: {
                    if (!(x > 0.0))
                        throw SupportError("sample_lmoments: Frechet observations must be positive");
                    const double l = std::log(x);
                    t1 = l;
                    t2 = l * l;
                    break;
                }
                default:
                    throw std::domain_error("sample_lmoments: invalid family");
            }
        }
        s1 += w[i] * t1;
        if (!single) s2 += w[i] * t2;
    }
    LMomentPair out;
    out.mu1 = s1 / static_cast<double>(n);
    if (!single) out.mu2 = s2 / static_cast<double>(n);
    return out;
}

LocationScaleConstants location_scale_constants(
    const std::function<double(const UnitPoint&)>& f0_quantile,
    const KumaraswamyShape& shape, const QuadratureSpec& spec) {
    const double c1 = integrate_1d(
        [&](const UnitPoint& p) { return kumaraswamy_density(p, shape) * f0_quantile(p); }, spec);
    const double c2 = integrate_1d(
        [&](const UnitPoint& p) {
            const double q = f0_quantile(p);
            return kumaraswamy_density(p, shape) * q * q;
        },
        spec);
    return {c1, c2, c2 - c1 * c1};
}

LambdaTriple lambda_triple(const std::function<double(const UnitPoint&)>& f0_quantile,
                           const std::function<double(double)>& f0_density_at_quantile,
                           const KumaraswamyShape& shape, const QuadratureSpec& spec) {
    // one mesh pass for all three forms; the Lambda2 integrand carries a bare
    // F0^-1(w) and is symmetrized before halving
    const auto t = detail::kernel_triple(
        [&](const UnitPoint& p) {
            return kumaraswamy_density(p, shape) / f0_density_at_quantile(f0_quantile(p));
        },
        f0_quantile, spec);
    return {t[0], t[1], t[2]};
}

ParetoIntegrals pareto_integrals(const KumaraswamyShape& shape, const QuadratureSpec& spec) {
    const double i1 = integrate_1d(
        [&](const UnitPoint& p) {
            return kumaraswamy_density(p, shape) * (p.u <= 0.5 ? std::log1p(-p.u) : std::log(p.om));
        },
        spec);
    require_variance_convergence(Family::pareto_i, shape);
    const double i2 = detail::kernel_triple(
        [&](const UnitPoint& p) { return kumaraswamy_density(p, shape) / p.om; },
        [](const UnitPoint&) { return 0.0; }, spec)[0];
    return {i1, i2};
}

FrechetConstants frechet_constants(const KumaraswamyShape& shape, const QuadratureSpec& spec) {
    FrechetConstants out{};
    out.kappa1 = integrate_1d(
        [&](const UnitPoint& p) { return kumaraswamy_density(p, shape) * log_neg_log_u(p); },
        spec);
    out.kappa2 = integrate_1d(
        [&](const UnitPoint& p) {
            const double ll = log_neg_log_u(p);
            return kumaraswamy_density(p, shape) * ll * ll;
        },
        spec);
    out.tau = out.kappa2 - out.kappa1 * out.kappa1;

    require_variance_convergence(Family::frechet, shape);
    const auto t = detail::kernel_triple(
        [&](const UnitPoint& p) { return kumaraswamy_density(p, shape) / (p.u * log_u(p)); },
        [](const UnitPoint& p) { return log_neg_log_u(p); }, spec);
    out.psi1 = t[0];
    out.psi2 = t[1];
    out.psi3 = t[2];
    return out;
}

namespace {

LocationScaleConstants cached_normal_base(const KumaraswamyShape& shape) {
    return g_normal_base_cache.get(shape, [&] {
        return location_scale_constants(&normal_quantile_point, shape,
                                        constants_quadrature_spec(shape, false));
    });
}

LambdaTriple cached_normal_lambda(const KumaraswamyShape& shape) {
    require_variance_convergence(Family::lognormal, shape);
    return g_normal_lambda_cache.get(shape, [&] {
        const auto t = detail::kernel_triple(
            [&](const UnitPoint& p) {
                return kumaraswamy_density(p, shape) /
                       std_normal_pdf(normal_quantile_point(p));
            },
            &normal_quantile_point, constants_quadrature_spec(shape, true));
        return LambdaTriple{t[0], t[1], t[2]};
    });
}

double cached_pareto_i1(const KumaraswamyShape& shape) {
    return g_pareto_i1_cache.get(shape, [&] {
        const QuadratureSpec spec = constants_quadrature_spec(shape, false);
        return integrate_1d(
            [&](const UnitPoint& p) {
                return kumaraswamy_density(p, shape) *
                       (p.u <= 0.5 ? std::log1p(-p.u) : std::log(p.om));
            },
            spec);
    });
}

double cached_pareto_i2(const KumaraswamyShape& shape) {
    require_variance_convergence(Family::pareto_i, shape);
    return g_pareto_i2_cache.get(shape, [&] {
        const QuadratureSpec spec = constants_quadrature_spec(shape, true);
        return detail::kernel_triple(
            [&](const UnitPoint& p) { return kumaraswamy_density(p, shape) / p.om; },
            [](const UnitPoint&) { return 0.0; }, spec)[0];
    });
}

std::array<double, 3> cached_frechet_base(const KumaraswamyShape& shape) {
    return g_frechet_base_cache.get(shape, [&] {
        const QuadratureSpec spec = constants_quadrature_spec(shape, false);
        const double k1 = integrate_1d(
            [&](const UnitPoint& p) { return kumaraswamy_density(p, shape) * log_neg_log_u(p); },
            spec);
        const double k2 = integrate_1d(
            [&](const UnitPoint& p) {
                const double ll = log_neg_log_u(p);
                return kumaraswamy_density(p, shape) * ll * ll;
            },
            spec);
        return std::array<double, 3>{k1, k2, k2 - k1 * k1};
    });
}

std::array<double, 3> cached_frechet_psi(const KumaraswamyShape& shape) {
    require_variance_convergence(Family::frechet, shape);
    return g_frechet_psi_cache.get(shape, [&] {
        return detail::kernel_triple(
            [&](const UnitPoint& p) { return kumaraswamy_density(p, shape) / (p.u * log_u(p)); },
            [](const UnitPoint& p) { return log_neg_log_u(p); },
            constants_quadrature_spec(shape, true));
    });
}

double are_lognormal_value(const KumaraswamyShape& shape) {
    const LocationScaleConstants c = cached_normal_base(shape);
    const LambdaTriple l = cached_normal_lambda(shape);
    return std::sqrt(c.eta * c.eta /
                     (2.0 * (l.lambda1 * l.lambda3 - l.lambda2 * l.lambda2)));
}

double are_pareto_value(const KumaraswamyShape& shape) {
    const double i1 = cached_pareto_i1(shape);
    const double i2 = cached_pareto_i2(shape);
    return i1 * i1 / i2;
}

double are_frechet_value(const KumaraswamyShape& shape) {
    const auto base = cached_frechet_base(shape);
    const auto psi = cached_frechet_psi(shape);
    const double tau = base[2];
    return std::sqrt(6.0 / (pi * pi) * tau * tau /
                     (psi[0] * psi[2] - psi[1] * psi[1]));
}

void note_unavailable_covariance(FitResult& fit, const std::exception& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    fit.cov_over_n.a11 = fit.cov_over_n.a12 = fit.cov_over_n.a22 = nan;
    fit.are_vs_mle = nan;
    fit.warnings.push_back(std::string("asymptotic covariance unavailable: ") + e.what());
}

}  // namespace

FitResult fit_location_scale(const SortedSample& sample, const KumaraswamyShape& shape,
                             const ModelSpec& spec, MomentMode mode) {
    if (sample.n() < 2)
        throw std::domain_error("fit_location_scale: need at least two observations");
    FitResult fit;
    fit.spec = spec;
    fit.shape = shape;
    fit.moments = sample_lmoments(sample, shape, spec, mode);

    const double proxy = *fit.moments.mu2 - fit.moments.mu1 * fit.moments.mu1;
    if (!(proxy > 0.0))
        throw NegativeVarianceProxyError(
            "fit_location_scale: mu2 - mu1^2 = " + std::to_string(proxy) +
            " <= 0; the scale formula is undefined for this weight shape -- "
            "choose a different (a, b)",
            proxy);

    const LocationScaleConstants c = cached_normal_base(shape);
    const double sigma = std::sqrt(proxy / c.eta);
    const double theta = fit.moments.mu1 - c.c1 * sigma;
    fit.params = ModelParams::lognormal(theta, sigma);

    fit.cov_over_n.k = 2;
    try {
        const LambdaTriple l = cached_normal_lambda(shape);
        const double s2 = sigma * sigma;
        const double f = s2 / (c.eta * c.eta);
        const double n = static_cast<double>(sample.n());
        fit.cov_over_n.a11 =
            f * (l.lambda1 * c.c2 * c.c2 - 2.0 * c.c1 * c.c2 * l.lambda2 +
                 c.c1 * c.c1 * l.lambda3) / n;
        fit.cov_over_n.a12 =
            f * (-l.lambda1 * c.c1 * c.c2 + c.c2 * l.lambda2 + c.c1 * c.c1 * l.lambda2 -
                 c.c1 * l.lambda3) / n;
        fit.cov_over_n.a22 =
            f * (l.lambda1 * c.c1 * c.c1 - 2.0 * c.c1 * l.lambda2 + l.lambda3) / n;
        fit.are_vs_mle = std::sqrt(c.eta * c.eta /
                                   (2.0 * (l.lambda1 * l.lambda3 - l.lambda2 * l.lambda2)));
    } catch (const QuadratureError& e) {
        note_unavailable_covariance(fit, e);
    }
    return fit;
}

FitResult fit_lognormal(const SortedSample& sample, const KumaraswamyShape& shape, double x0) {
    ModelSpec spec;
    spec.family = Family::lognormal;
    spec.x0 = x0;
    return fit_location_scale(sample, shape, spec, MomentMode::family);
}

FitResult fit_pareto(const SortedSample& sample, const KumaraswamyShape& shape, double x0) {
    if (!(x0 > 0.0)) throw std::domain_error("fit_pareto: x0 must be positive");
    ModelSpec spec;
    spec.family = Family::pareto_i;
    spec.x0 = x0;

    FitResult fit;
    fit.spec = spec;
    fit.shape = shape;
    fit.moments = sample_lmoments(sample, shape, spec, MomentMode::family);
    if (!(fit.moments.mu1 > 0.0))
        throw DegenerateSampleError(
            "fit_pareto: weighted mean of log(x/x0) is zero; all observations sit at x0");

    const double i1 = cached_pareto_i1(shape);
    const double alpha = -i1 / fit.moments.mu1;
    fit.params = ModelParams::pareto(alpha);

    fit.cov_over_n.k = 1;
    try {
        const double i2 = cached_pareto_i2(shape);
        fit.cov_over_n.a11 = alpha * alpha * i2 / (i1 * i1) / static_cast<double>(sample.n());
        fit.are_vs_mle = i1 * i1 / i2;
    } catch (const QuadratureError& e) {
        note_unavailable_covariance(fit, e);
        fit.cov_over_n.k = 1;
    }
    return fit;
}

FitResult fit_frechet(const SortedSample& sample, const KumaraswamyShape& shape) {
    if (sample.n() < 2)
        throw std::domain_error("fit_frechet: need at least two observations");
    ModelSpec spec;
    spec.family = Family::frechet;

    FitResult fit;
    fit.spec = spec;
    fit.shape = shape;
    fit.moments = sample_lmoments(sample, shape, spec, MomentMode::family);

    const double proxy = *fit.moments.mu2 - fit.moments.mu1 * fit.moments.mu1;
    if (!(proxy > 0.0))
        throw NegativeVarianceProxyError(
            "fit_frechet: mu2 - mu1^2 = " + std::to_string(proxy) +
            " <= 0; the shape formula is undefined for this weight shape -- "
            "choose a different (a, b)",
            proxy);

    const auto base = cached_frechet_base(shape);
    const double kappa1 = base[0], kappa2 = base[1], tau = base[2];
    const double alpha = std::sqrt(tau / proxy);
    const double sigma = std::exp(fit.moments.mu1 + kappa1 / alpha);
    fit.params = ModelParams::frechet(alpha, sigma);

    fit.cov_over_n.k = 2;
    try {
        const auto psi = cached_frechet_psi(shape);
        const double p1 = psi[0], p2 = psi[1], p3 = psi[2];
        const double t2 = tau * tau;
        const double n = static_cast<double>(sample.n());
        fit.cov_over_n.a11 =
            alpha * alpha * (p1 * kappa1 * kappa1 - 2.0 * p2 * kappa1 + p3) / t2 / n;
        fit.cov_over_n.a12 =
            sigma * (p2 * kappa2 - p3 * kappa1 + p2 * kappa1 * kappa1 - p1 * kappa1 * kappa2) /
            t2 / n;
        fit.cov_over_n.a22 = sigma * sigma / (alpha * alpha) *
                             (p3 * kappa1 * kappa1 - 2.0 * p2 * kappa1 * kappa2 +
                              p1 * kappa2 * kappa2) / t2 / n;
        fit.are_vs_mle = std::sqrt(6.0 / (pi * pi) * t2 / (p1 * p3 - p2 * p2));
    } catch (const QuadratureError& e) {
        note_unavailable_covariance(fit, e);
    }
    return fit;
}

double are_value(Family family, const KumaraswamyShape& shape) {
    switch (family) {
        case Family::pareto_i: return are_pareto_value(shape);
        case Family::lognormal: return are_lognormal_value(shape);
        case Family::frechet: return are_frechet_value(shape);
    }
    throw std::domain_error("are_value: invalid family");
}

AreGrid are_grid(Family family, const std::vector<double>& a_values,
                 const std::vector<double>& b_values) {
    AreGrid grid;
    grid.family = family;
    grid.a_values = a_values;
    grid.b_values = b_values;
    grid.values.assign(a_values.size(),
                       std::vector<double>(b_values.size(),
                                           std::numeric_limits<double>::quiet_NaN()));
    grid.errors.assign(a_values.size(), std::vector<std::string>(b_values.size()));
    for (std::size_t i = 0; i < a_values.size(); ++i) {
        for (std::size_t j = 0; j < b_values.size(); ++j) {
            try {
                const KumaraswamyShape s(a_values[i], b_values[j]);
                grid.values[i][j] = are_value(family, s);
            } catch (const std::exception& e) {
                grid.errors[i][j] = e.what();
            }
        }
    }
    return grid;
}

}  // namespace kwle
