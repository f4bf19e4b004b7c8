#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixture_data.hpp"
#include "kwle/errors.hpp"
#include "kwle/lfit.hpp"
#include "kwle/mlefit.hpp"
#include "kwle/numerics.hpp"
#include "kwle/rng.hpp"

using namespace kwle;
using kwle_tests::indemnity50_sample;

namespace {

SortedSample toy12345() {
    return make_sorted_sample({1, 2, 3, 4, 5}, "toy");
}

const ModelSpec kLognormal0{Family::lognormal, 0.0};

}  // namespace

TEST_SUITE_BEGIN("lfit");

TEST_CASE("toy raw moments at (5,5)") {
    const LMomentPair m =
        sample_lmoments(toy12345(), KumaraswamyShape(5, 5), kLognormal0, MomentMode::raw);
    // 30-digit oracle: 4.7398116239 and 19.4221456484
    CHECK(m.mu1 == doctest::Approx(4.7398116239).epsilon(1e-9));
    CHECK(*m.mu2 == doctest::Approx(19.4221456484).epsilon(1e-9));
    CHECK(*m.mu2 - m.mu1 * m.mu1 == doctest::Approx(-3.0437).epsilon(2e-5));
}

TEST_CASE("constant sample in raw mode scales by the weight sum") {
    const SortedSample s = make_sorted_sample({3.5, 3.5, 3.5, 3.5}, "const");
    const KumaraswamyShape shape(2, 3);
    const std::vector<double> w = weight_vector(4, shape);
    double wsum = 0.0;
    for (double x : w) wsum += x;
    const LMomentPair m = sample_lmoments(s, shape, kLognormal0, MomentMode::raw);
    CHECK(m.mu1 == doctest::Approx(3.5 * wsum / 4.0).epsilon(1e-14));
    CHECK(*m.mu2 == doctest::Approx(3.5 * 3.5 * wsum / 4.0).epsilon(1e-14));
}

TEST_CASE("uniform weights reduce the first L-moment to the mean of logs") {
    const LMomentPair m =
        sample_lmoments(indemnity50_sample(), KumaraswamyShape(1, 1), kLognormal0);
    CHECK(m.mu1 == doctest::Approx(9.5357488334).epsilon(1e-9));
    CHECK(m.mu1 == doctest::Approx(9.536).epsilon(1e-4));
}

TEST_CASE("L-moments reject observations outside the support") {
    const SortedSample s = make_sorted_sample({0.5, 2.0, 3.0}, "bad");
    CHECK_THROWS_AS(
        sample_lmoments(s, KumaraswamyShape(1, 1), ModelSpec{Family::pareto_i, 1.0}),
        SupportError);
    const SortedSample z = make_sorted_sample({1.0, 2.0}, "zero");
    CHECK_THROWS_AS(
        sample_lmoments(z, KumaraswamyShape(1, 1), ModelSpec{Family::lognormal, 1.0}),
        SupportError);
}

TEST_CASE("location-scale constants for the normal base") {
    const QuadratureSpec spec = constants_quadrature_spec(KumaraswamyShape(1, 1), false);
    const LocationScaleConstants c1 =
        location_scale_constants(&normal_quantile_point, KumaraswamyShape(1, 1), spec);
    CHECK(std::abs(c1.c1) < 1e-9);
    CHECK(c1.c2 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(c1.eta == doctest::Approx(1.0).epsilon(1e-8));

    // independently computed oracles
    const LocationScaleConstants c2 = location_scale_constants(
        &normal_quantile_point, KumaraswamyShape(1.1, 1.2),
        constants_quadrature_spec(KumaraswamyShape(1.1, 1.2), false));
    CHECK(c2.c1 == doctest::Approx(-0.071024273829).epsilon(1e-8));
    CHECK(c2.eta == doctest::Approx(0.847826920762).epsilon(1e-8));

    const KumaraswamyShape s55(5, 5);
    const LocationScaleConstants c3 =
        location_scale_constants(&normal_quantile_point, s55,
                                 constants_quadrature_spec(s55, false));
    CHECK(c3.c1 == doctest::Approx(0.414368820023).epsilon(1e-8));
    CHECK(c3.eta == doctest::Approx(0.156907068002).epsilon(1e-7));
    CHECK(c3.eta > 0.0);
}

TEST_CASE("lambda triple at the uniform shape has closed-form values") {
    const LambdaTriple l =
        lambda_triple(&normal_quantile_point, &std_normal_pdf, KumaraswamyShape(1, 1),
                      constants_quadrature_spec(KumaraswamyShape(1, 1), true));
    // asymptotic covariance of (mean, mean of squares) for a standard normal
    CHECK(l.lambda1 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(l.lambda2) < 1e-6);
    CHECK(l.lambda3 == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("lambda triple matches a Monte Carlo oracle at (1.2, 1.3)") {
    const KumaraswamyShape shape(1.2, 1.3);
    const LambdaTriple l = lambda_triple(&normal_quantile_point, &std_normal_pdf, shape,
                                         constants_quadrature_spec(shape, true));
    CHECK(l.lambda1 * l.lambda3 - l.lambda2 * l.lambda2 > 0.0);

    // plain Monte Carlo of the three double integrals over the unit square
    const std::size_t draws = 2'000'000;
    double s1 = 0, s2 = 0, s3 = 0, q1 = 0, q2 = 0, q3 = 0;
    for (std::size_t i = 0; i < draws; ++i) {
        const double v = uniform_open(42, 2 * i);
        const double w = uniform_open(42, 2 * i + 1);
        const double qv = std_normal_quantile(v), qw = std_normal_quantile(w);
        const double base = kumaraswamy_density(v, shape) * kumaraswamy_density(w, shape) *
                            bridge_kernel(v, w) /
                            (std_normal_pdf(qv) * std_normal_pdf(qw));
        const double g1 = base;
        const double g2 = base * qw;
        const double g3 = base * qv * qw;
        s1 += g1; s2 += g2; s3 += g3;
        q1 += g1 * g1; q2 += g2 * g2; q3 += g3 * g3;
    }
    auto finish = [&](double s, double q, double quad) {
        const double mean = s / draws;
        const double var = q / draws - mean * mean;
        const double se = std::sqrt(var / draws);
        CHECK(std::abs(quad - mean) <= 3.0 * se + 1e-9);
    };
    finish(s1, q1, l.lambda1);
    finish(s2, q2, l.lambda2);
    finish(s3, q3, l.lambda3);
}

TEST_CASE("pareto integrals at the uniform shape") {
    const QuadratureSpec spec = constants_quadrature_spec(KumaraswamyShape(1, 1), true);
    const ParetoIntegrals pi = pareto_integrals(KumaraswamyShape(1, 1), spec);
    CHECK(pi.i1 == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(pi.i2 == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("pareto efficiency closed form along a = 1") {
    // at a = 1 the weight is b(1-u)^(b-1) and I1^2/I2 = (2b-1)/b^2 exactly
    for (double b : {0.8, 1.3, 2.0, 5.0, 20.0}) {
        const KumaraswamyShape shape(1.0, b);
        const double are = are_value(Family::pareto_i, shape);
        CHECK(are == doctest::Approx((2.0 * b - 1.0) / (b * b)).epsilon(1e-6));
    }
}

TEST_CASE("frechet constants: Gumbel identities at the uniform shape") {
    const FrechetConstants fc = frechet_constants(
        KumaraswamyShape(1, 1), constants_quadrature_spec(KumaraswamyShape(1, 1), true));
    CHECK(fc.kappa1 == doctest::Approx(-euler_gamma).epsilon(1e-9));
    CHECK(fc.tau == doctest::Approx(pi * pi / 6.0).epsilon(1e-8));
    CHECK(fc.psi1 * fc.psi3 - fc.psi2 * fc.psi2 > 0.0);

    // independently computed oracle at (0.8, 0.8)
    const KumaraswamyShape s88(0.8, 0.8);
    const FrechetConstants f2 = frechet_constants(s88, constants_quadrature_spec(s88, true));
    CHECK(f2.kappa1 == doctest::Approx(-0.659623904737).epsilon(1e-8));
    CHECK(f2.tau == doctest::Approx(2.283757785147).epsilon(1e-8));
}

TEST_CASE("corollary positivity on the shape grid") {
    const std::vector<double> avals = {0.3, 0.5, 0.8, 1, 1.2, 2, 4, 5, 7, 10};
    const std::vector<double> bvals = {0.3, 0.5, 0.8, 1, 1.3, 2, 5, 7, 15, 20};
    for (double a : avals) {
        for (double b : bvals) {
            const KumaraswamyShape s(a, b);
            // 1-D constants always exist
            const LocationScaleConstants c = location_scale_constants(
                &normal_quantile_point, s, constants_quadrature_spec(s, false));
            CHECK(c.eta > 0.0);
            // kernel double integrals only on their convergence region
            if (variance_integrals_convergent(Family::lognormal, s)) {
                const LambdaTriple l =
                    lambda_triple(&normal_quantile_point, &std_normal_pdf, s,
                                  constants_quadrature_spec(s, true));
                CHECK(l.lambda1 > 0.0);
                CHECK(l.lambda1 * l.lambda3 - l.lambda2 * l.lambda2 > 0.0);
            }
            if (variance_integrals_convergent(Family::frechet, s)) {
                const FrechetConstants f =
                    frechet_constants(s, constants_quadrature_spec(s, true));
                CHECK(f.tau > 0.0);
                CHECK(f.psi1 * f.psi3 - f.psi2 * f.psi2 > 0.0);
            }
        }
    }
}

TEST_CASE("efficiency never exceeds the MLE on the grid") {
    const std::vector<double> avals = {0.3, 0.5, 0.8, 1, 1.2, 2, 4, 5, 7, 10};
    const std::vector<double> bvals = {0.3, 0.5, 0.8, 1, 1.3, 2, 5, 7, 15, 20};
    for (Family f : {Family::pareto_i, Family::lognormal, Family::frechet}) {
        const AreGrid grid = are_grid(f, avals, bvals);
        for (std::size_t i = 0; i < avals.size(); ++i) {
            for (std::size_t j = 0; j < bvals.size(); ++j) {
                if (!grid.errors[i][j].empty()) continue;
                CHECK(grid.values[i][j] <= 1.0 + 0.005);
                CHECK(grid.values[i][j] > 0.0);
            }
        }
    }
}

TEST_CASE("pareto fit closed form and MLE reduction at (1,1)") {
    const FitResult fit = fit_pareto(toy12345(), KumaraswamyShape(1, 1), 1.0);
    CHECK(fit.params.alpha == doctest::Approx(5.0 / std::log(120.0)).epsilon(1e-9));
    CHECK(fit.params.alpha == doctest::Approx(1.0443882242801454).epsilon(1e-12));
    const FitResult mle = mle_pareto(toy12345(), 1.0);
    CHECK(fit.params.alpha == doctest::Approx(mle.params.alpha).epsilon(1e-12));
    CHECK(fit.are_vs_mle == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(fit.cov_over_n.k == 1);
    CHECK(fit.cov_over_n.a11 ==
          doctest::Approx(fit.params.alpha * fit.params.alpha / 5.0).epsilon(1e-6));
}

TEST_CASE("pareto fit is invariant under joint scaling of data and threshold") {
    const KumaraswamyShape shape(2.5, 3.7);
    const FitResult f1 = fit_pareto(toy12345(), shape, 1.0);
    std::vector<double> scaled;
    for (double x : toy12345().values) scaled.push_back(x * 1234.5);
    const FitResult f2 = fit_pareto(make_sorted_sample(scaled, "scaled"), shape, 1234.5);
    CHECK(f2.params.alpha == doctest::Approx(f1.params.alpha).epsilon(1e-12));
}

TEST_CASE("pareto fit degenerate and support errors") {
    const SortedSample at_threshold = make_sorted_sample({1.0, 1.0, 1.0}, "deg");
    CHECK_THROWS_AS(fit_pareto(at_threshold, KumaraswamyShape(1, 1), 1.0),
                    DegenerateSampleError);
    const SortedSample below = make_sorted_sample({0.5, 2.0}, "below");
    CHECK_THROWS_AS(fit_pareto(below, KumaraswamyShape(1, 1), 1.0), SupportError);
}

TEST_CASE("lognormal fit at (1,1) equals the MLE") {
    const FitResult lfit = fit_lognormal(indemnity50_sample(), KumaraswamyShape(1, 1), 0.0);
    const FitResult mle = mle_lognormal(indemnity50_sample(), 0.0);
    CHECK(lfit.params.theta == doctest::Approx(mle.params.theta).epsilon(1e-9));
    CHECK(lfit.params.sigma == doctest::Approx(mle.params.sigma).epsilon(1e-9));
    CHECK(lfit.are_vs_mle == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("lognormal weighted fits on the 50-loss sample (independent oracles)") {
    // values cross-computed with an independent implementation
    const FitResult f12 = fit_lognormal(indemnity50_sample(), KumaraswamyShape(1.1, 1.2));
    CHECK(f12.params.theta == doctest::Approx(9.56782234).epsilon(1e-7));
    CHECK(f12.params.sigma == doctest::Approx(1.04058777).epsilon(1e-7));

    // the reference table prints (9.572, 0.743) for this row, which is the
    // (1.2, 1.3) fit; the row's D and p belong to the true (1.1, 1.2) fit
    const FitResult f13 = fit_lognormal(indemnity50_sample(), KumaraswamyShape(1.2, 1.3));
    CHECK(f13.params.theta == doctest::Approx(9.57197404).epsilon(1e-7));
    CHECK(f13.params.sigma == doctest::Approx(0.74329913).epsilon(1e-7));
    CHECK(f13.params.theta == doctest::Approx(9.572).epsilon(2.1e-4));
    CHECK(f13.params.sigma == doctest::Approx(0.743).epsilon(2.7e-3));

    const FitResult f14 = fit_lognormal(indemnity50_sample(), KumaraswamyShape(1.4, 14.0));
    CHECK(f14.params.theta == doctest::Approx(9.43861689).epsilon(1e-7));
    CHECK(f14.params.sigma == doctest::Approx(1.15048934).epsilon(1e-7));
}

TEST_CASE("toy raw-moment location-scale fit raises the variance-proxy error") {
    try {
        fit_location_scale(toy12345(), KumaraswamyShape(5, 5), kLognormal0, MomentMode::raw);
        FAIL("expected NegativeVarianceProxyError");
    } catch (const NegativeVarianceProxyError& e) {
        CHECK(e.variance_proxy() == doctest::Approx(-3.0437).epsilon(2e-5));
    }
}

TEST_CASE("frechet fit recovers parameters at scale") {
    const ModelSpec spec{Family::frechet, 0.0};
    const SortedSample big = sample_model(spec, ModelParams::frechet(2.0, 2.0), 100'000, 5150);
    const FitResult fit = fit_frechet(big, KumaraswamyShape(1, 1));
    CHECK(std::abs(fit.params.alpha - 2.0) < 0.05);
    CHECK(std::abs(fit.params.sigma - 2.0) < 0.05);
}

TEST_CASE("frechet fit scale equivariance is exact at the uniform shape") {
    const ModelSpec spec{Family::frechet, 0.0};
    const SortedSample s = sample_model(spec, ModelParams::frechet(2.0, 2.0), 200, 8181);
    const FitResult f1 = fit_frechet(s, KumaraswamyShape(1, 1));
    std::vector<double> scaled;
    for (double x : s.values) scaled.push_back(3.0 * x);
    const FitResult f2 = fit_frechet(make_sorted_sample(scaled, "scaled"), KumaraswamyShape(1, 1));
    CHECK(f2.params.alpha == doctest::Approx(f1.params.alpha).epsilon(1e-9));
    CHECK(f2.params.sigma == doctest::Approx(3.0 * f1.params.sigma).epsilon(1e-9));
}

TEST_CASE("frechet fit raises the variance-proxy error on adversarial weights") {
    // logs equal 1..5, so the (5,5)-weighted log variance proxy is negative
    std::vector<double> v;
    for (int i = 1; i <= 5; ++i) v.push_back(std::exp(static_cast<double>(i)));
    CHECK_THROWS_AS(fit_frechet(make_sorted_sample(v, "adv"), KumaraswamyShape(5, 5)),
                    NegativeVarianceProxyError);
}

TEST_CASE("lognormal scale equivariance is exact at the uniform shape") {
    const FitResult f1 = fit_lognormal(indemnity50_sample(), KumaraswamyShape(1, 1));
    std::vector<double> scaled;
    for (double x : indemnity50_sample().values) scaled.push_back(2.75 * x);
    const FitResult f2 =
        fit_lognormal(make_sorted_sample(scaled, "scaled"), KumaraswamyShape(1, 1));
    CHECK(f2.params.theta - f1.params.theta ==
          doctest::Approx(std::log(2.75)).epsilon(1e-12));
    CHECK(f2.params.sigma == doctest::Approx(f1.params.sigma).epsilon(1e-12));
}

TEST_CASE("moment-matching round trips") {
    // plugging the estimates back into the population formulas returns the
    // sample L-moments
    const KumaraswamyShape shape(1.2, 1.3);

    const FitResult lf = fit_lognormal(indemnity50_sample(), shape);
    const LocationScaleConstants c = location_scale_constants(
        &normal_quantile_point, shape, constants_quadrature_spec(shape, false));
    const double mu1 = lf.params.theta + lf.params.sigma * c.c1;
    const double mu2 = lf.params.theta * lf.params.theta +
                       2.0 * lf.params.theta * lf.params.sigma * c.c1 +
                       lf.params.sigma * lf.params.sigma * c.c2;
    CHECK(mu1 == doctest::Approx(lf.moments.mu1).epsilon(1e-9));
    CHECK(mu2 == doctest::Approx(*lf.moments.mu2).epsilon(1e-9));

    const FitResult pf = fit_pareto(toy12345(), shape, 1.0);
    const ParetoIntegrals pi = pareto_integrals(shape, constants_quadrature_spec(shape, true));
    CHECK(-pi.i1 / pf.params.alpha == doctest::Approx(pf.moments.mu1).epsilon(1e-9));

    const SortedSample fs =
        sample_model(ModelSpec{Family::frechet, 0.0}, ModelParams::frechet(2, 2), 100, 4242);
    const FitResult ff = fit_frechet(fs, shape);
    const FrechetConstants fc = frechet_constants(shape, constants_quadrature_spec(shape, true));
    const double fmu1 = std::log(ff.params.sigma) - fc.kappa1 / ff.params.alpha;
    const double fmu2 = std::pow(std::log(ff.params.sigma), 2) -
                        2.0 * std::log(ff.params.sigma) * fc.kappa1 / ff.params.alpha +
                        fc.kappa2 / (ff.params.alpha * ff.params.alpha);
    CHECK(fmu1 == doctest::Approx(ff.moments.mu1).epsilon(1e-9));
    CHECK(fmu2 == doctest::Approx(*ff.moments.mu2).epsilon(1e-9));
}

TEST_CASE("covariance determinant matches the closed forms") {
    const KumaraswamyShape shape(1.2, 1.3);
    const double n = 50.0;

    const FitResult lf = fit_lognormal(indemnity50_sample(), shape);
    const LocationScaleConstants c = location_scale_constants(
        &normal_quantile_point, shape, constants_quadrature_spec(shape, false));
    const LambdaTriple l = lambda_triple(&normal_quantile_point, &std_normal_pdf, shape,
                                         constants_quadrature_spec(shape, true));
    const double det_closed = std::pow(lf.params.sigma, 4) *
                              (l.lambda1 * l.lambda3 - l.lambda2 * l.lambda2) /
                              (c.eta * c.eta) / (n * n);
    CHECK(lf.cov_over_n.det() == doctest::Approx(det_closed).epsilon(1e-8));

    const SortedSample fs =
        sample_model(ModelSpec{Family::frechet, 0.0}, ModelParams::frechet(2, 2), 50, 999);
    const FitResult ff = fit_frechet(fs, shape);
    const FrechetConstants fc = frechet_constants(shape, constants_quadrature_spec(shape, true));
    const double fdet_closed = ff.params.sigma * ff.params.sigma *
                               (fc.psi1 * fc.psi3 - fc.psi2 * fc.psi2) / (fc.tau * fc.tau) /
                               (n * n);
    CHECK(ff.cov_over_n.det() == doctest::Approx(fdet_closed).epsilon(1e-8));
    CHECK(ff.cov_over_n.det() > 0.0);
    CHECK(ff.cov_over_n.a11 > 0.0);
    CHECK(ff.cov_over_n.a22 > 0.0);
}

TEST_CASE("fits outside the variance convergence region carry a warning") {
    const FitResult fit = fit_pareto(toy12345(), KumaraswamyShape(1.0, 0.4), 1.0);
    CHECK(std::isfinite(fit.params.alpha));  // the point estimate exists
    CHECK(std::isnan(fit.are_vs_mle));
    CHECK(std::isnan(fit.cov_over_n.a11));
    REQUIRE(!fit.warnings.empty());
    CHECK(fit.warnings.front().find("not finite") != std::string::npos);
}

TEST_CASE("are grid reports per-cell failures without aborting") {
    const AreGrid grid = are_grid(Family::pareto_i, {1.0}, {0.3, 1.0});
    CHECK(std::isnan(grid.values[0][0]));
    CHECK(!grid.errors[0][0].empty());
    CHECK(grid.values[0][1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(grid.errors[0][1].empty());
}

TEST_CASE("are anchors from the reference tables (convergent cells)") {
    CHECK(are_value(Family::pareto_i, KumaraswamyShape(1, 1)) ==
          doctest::Approx(1.000).epsilon(5e-3));
    CHECK(are_value(Family::lognormal, KumaraswamyShape(0.8, 0.8)) ==
          doctest::Approx(0.962).epsilon(5.5e-3));
    CHECK(are_value(Family::lognormal, KumaraswamyShape(4, 15)) ==
          doctest::Approx(0.520).epsilon(1e-2));
    CHECK(are_value(Family::frechet, KumaraswamyShape(1, 1)) ==
          doctest::Approx(0.691).epsilon(7.5e-3));
    CHECK(are_value(Family::frechet, KumaraswamyShape(0.8, 2)) ==
          doctest::Approx(0.953).epsilon(5.3e-3));
    CHECK(are_value(Family::pareto_i, KumaraswamyShape(5, 5)) ==
          doctest::Approx(0.820).epsilon(6.2e-3));
}

TEST_SUITE_END();
