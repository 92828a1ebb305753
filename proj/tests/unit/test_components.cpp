#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tailrisk/components.hpp"

using namespace tailrisk;
using boost::math::quadrature::gauss_kronrod;

TEST(TruncatedGaussian, IntegratesToOneAndMatchesMeanVariance) {
  const TruncatedGaussian g{103.58, 14.79, 70.0, 148.0};
  const double mass = gauss_kronrod<double, 61>::integrate([&](double x) { return g.pdf(x); }, 70.0, 148.0);
  const double m1 = gauss_kronrod<double, 61>::integrate([&](double x) { return x * g.pdf(x); }, 70.0, 148.0);
  const double m2 = gauss_kronrod<double, 61>::integrate(
      [&](double x) { return (x - m1) * (x - m1) * g.pdf(x); }, 70.0, 148.0);
  EXPECT_NEAR(mass, 1.0, 1e-10);
  EXPECT_NEAR(g.mean(), m1, 1e-8);
  EXPECT_NEAR(g.mean(), 103.96835670226655, 1e-8);
  EXPECT_NEAR(g.variance(), m2, 1e-6);
  EXPECT_EQ(g.pdf(69.9), 0.0);
  EXPECT_EQ(g.pdf(148.1), 0.0);
}

TEST(TruncatedGaussian, FarTailStaysFinite) {
  // Mass near 1e-350 underflows a double; everything else must not.
  for (const TruncatedGaussian g : {TruncatedGaussian{0.0, 1.0, 40.0, 41.0}, TruncatedGaussian{0.0, 1.0, -41.0, -40.0}}) {
    EXPECT_NEAR(g.log_mass(), std::log(1.0 / (40.0 * std::sqrt(2.0 * M_PI))) - 800.0, 1e-3);
    const double mid = 0.5 * (g.lo + g.hi);
    EXPECT_TRUE(std::isfinite(g.log_pdf(mid)));
    // Conditional on Z > 40 the excess is close to Exp(40): mean offset ~1/40.
    EXPECT_NEAR(std::abs(g.mean()), 40.0 + 1.0 / 40.0, 1e-3);
    EXPECT_GT(g.variance(), 0.0);
    for (double u : {0.01, 0.5, 0.99}) {
      const double q = g.quantile(u);
      EXPECT_GE(q, g.lo);
      EXPECT_LE(q, g.hi);
    }
  }
}

TEST(TruncatedGaussian, LogMassAgreesWithMassInRange) {
  for (const TruncatedGaussian g : {TruncatedGaussian{103.58, 14.79, 70.0, 148.0},
                                    TruncatedGaussian{0.0, 1.0, 5.0, 7.0}, TruncatedGaussian{0.0, 1.0, 31.0, 32.0},
                                    TruncatedGaussian{0.0, 1.0, -7.0, -5.0}}) {
    EXPECT_NEAR(g.log_mass(), std::log(g.mass()), 1e-9);
  }
  const TruncatedGaussian g{0.0, 1.0, 31.0, 32.0};
  const double direct = std::log(boost::math::cdf(boost::math::complement(boost::math::normal(), 31.0)) -
                                 boost::math::cdf(boost::math::complement(boost::math::normal(), 32.0)));
  EXPECT_NEAR(g.log_mass(), direct, 1e-9);
}

TEST(TruncatedGaussian, QuantileInvertsCdf) {
  const TruncatedGaussian g{100.0, 20.0, 70.0, 148.0};
  for (double u : {0.01, 0.25, 0.5, 0.9, 0.999}) {
    const double q = g.quantile(u);
    const double cdf = gauss_kronrod<double, 61>::integrate([&](double x) { return g.pdf(x); }, 70.0, q);
    EXPECT_NEAR(cdf, u, 1e-9);
  }
}

TEST(TruncatedGaussian, MomentMatchingRecoversParameters) {
  const TruncatedGaussian truth{103.58, 14.79, 70.0, 148.0};
  const TruncatedGaussian fit = fit_truncated_gaussian(truth.mean(), truth.variance(), 70.0, 148.0);
  EXPECT_NEAR(fit.mu, truth.mu, 1e-6);
  EXPECT_NEAR(fit.sigma, truth.sigma, 1e-6);
}

TEST(TruncatedGaussian, MomentMatchingFallsBackOnFlatTargets) {
  const double flat_var = 78.0 * 78.0 / 12.0;
  const TruncatedGaussian fit = fit_truncated_gaussian(109.0, flat_var * 1.1, 70.0, 148.0);
  EXPECT_DOUBLE_EQ(fit.mu, 109.0);
  EXPECT_NEAR(fit.sigma, std::sqrt(flat_var * 1.1), 1e-12);
}

TEST(TruncatedPowerLaw, IntegratesToOneAcrossExponents) {
  for (double alpha : {0.0, 0.001, 0.5, 1.0, 2.5}) {
    const TruncatedPowerLaw p{alpha, 1.0, 70.0};
    const double mass = gauss_kronrod<double, 61>::integrate([&](double x) { return p.pdf(x); }, 1.0, 70.0, 15, 1e-12);
    EXPECT_NEAR(mass, 1.0, 1e-8) << alpha;
  }
}

TEST(TruncatedPowerLaw, MeanMatchesReference) {
  const TruncatedPowerLaw p{0.001, 1.0, 70.0};
  EXPECT_NEAR(p.mean(), 16.221790652608476, 1e-9);
}

TEST(TruncatedPowerLaw, QuantileEndpointsAndMonotone) {
  const TruncatedPowerLaw p{1.3, 2.0, 50.0};
  EXPECT_NEAR(p.quantile(0.0), 2.0, 1e-12);
  EXPECT_NEAR(p.quantile(1.0), 50.0, 1e-9);
  double prev = 0.0;
  for (double u = 0.05; u < 1.0; u += 0.05) {
    EXPECT_GT(p.quantile(u), prev);
    prev = p.quantile(u);
  }
}

TEST(TruncatedPowerLaw, AlphaMleInvertsMeanLog) {
  for (double alpha : {0.0, 0.2, 1.0, 3.0}) {
    const TruncatedPowerLaw p{alpha, 1.0, 70.0};
    const double mean_log = gauss_kronrod<double, 61>::integrate(
        [&](double x) { return std::log(x) * p.pdf(x); }, 1.0, 70.0, 15, 1e-13);
    EXPECT_NEAR(fit_truncated_power_law_alpha(mean_log, 1.0, 70.0), alpha, 1e-6) << alpha;
  }
}
