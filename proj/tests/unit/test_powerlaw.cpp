#include <gtest/gtest.h>

#include <cmath>

#include "tailrisk/error.hpp"
#include "tailrisk/powerlaw.hpp"
#include "tailrisk/rng.hpp"
#include "tailrisk/tail_stats.hpp"

using namespace tailrisk;

TEST(Pareto, SurvivalAtCutoffIsP0) {
  const ParetoModel m{1.0, 2.0, 1.0 / 62.6};
  EXPECT_DOUBLE_EQ(pareto_survival(m, 1.0), 1.0 / 62.6);
  EXPECT_THROW(pareto_survival(m, 0.5), Error);
}

TEST(Pareto, TabulatedInverseProbabilities) {
  const ParetoModel m{1.0, 2.0, 1.0 / 62.6};
  EXPECT_NEAR(1.0 / pareto_survival(m, 2.0), 250.4, 1e-9);
  EXPECT_NEAR(1.0 / pareto_survival(m, 4.0), 1001.6, 1e-9);
}

TEST(Pareto, SurvivalIsMonotoneAndScaleConstantConsistent) {
  const ParetoModel m{3.0, 1.7, 0.4};
  double prev = 1.0;
  for (double x = 3.0; x < 1e4; x *= 1.37) {
    const double s = pareto_survival(m, x);
    EXPECT_LE(s, prev);
    EXPECT_NEAR(s, m.scale_c() * std::pow(x, -m.alpha), 1e-15);
    prev = s;
  }
}

TEST(Pareto, ValidationRejectsBadParameters) {
  EXPECT_THROW(validate(ParetoModel{0.0, 2.0, 1.0}), Error);
  EXPECT_THROW(validate(ParetoModel{1.0, 0.0, 1.0}), Error);
  EXPECT_THROW(validate(ParetoModel{1.0, 2.0, 1.5}), Error);
  EXPECT_THROW(validate(ParetoModel{1.0, 2.0, 0.0}), Error);
}

TEST(Pareto, MomentDichotomy) {
  const ParetoModel m{1.0, 2.1, 1.0};
  EXPECT_NEAR(pareto_moment(m, 1).value(), 2.1 / 1.1, 1e-15);
  EXPECT_NEAR(pareto_moment(m, 2).value(), 21.0, 1e-12);
  EXPECT_TRUE(pareto_moment(m, 3).is_infinite());
  EXPECT_TRUE(pareto_moment(ParetoModel{1.0, 2.0, 1.0}, 2).is_infinite());
  EXPECT_NEAR(pareto_moment(ParetoModel{2.0, 3.0, 1.0}, 1).value(), 3.0, 1e-15);
}

TEST(Pareto, ConditionalTailMean) {
  const ParetoModel m{148.0, 2.1, 1.0};
  EXPECT_NEAR(conditional_tail_mean(m, 148.0).value(), 2.1 * 148.0 / 1.1, 1e-12);
  EXPECT_TRUE(conditional_tail_mean(ParetoModel{1.0, 1.0, 1.0}, 5.0).is_infinite());
  EXPECT_TRUE(conditional_tail_mean(ParetoModel{1.0, 0.7, 1.0}, 5.0).is_infinite());
}

TEST(TailOls, ExactPowerLawRecovered) {
  SurvivalCurve c;
  c.n = 6;
  for (int k = 0; k < 6; ++k) {
    const double x = std::pow(10.0, 0.5 * k);
    c.points.push_back({x, std::pow(x, -1.5)});
  }
  const TailFitReport f = fit_tail_ols(c, {0.0, std::numeric_limits<double>::infinity()});
  EXPECT_NEAR(f.slope, -1.5, 1e-12);
  EXPECT_NEAR(f.intercept, 0.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_TRUE(std::isinf(f.f_statistic));
  EXPECT_EQ(f.p_value, 0.0);
  EXPECT_EQ(f.n_points, 6u);
}

TEST(TailOls, RegionIsHalfOpen) {
  SurvivalCurve c;
  for (double x : {1.0, 2.0, 3.0, 4.0, 5.0}) c.points.push_back({x, 1.0 / x});
  const auto f = fit_tail_ols(c, {1.0, 4.0});
  EXPECT_EQ(f.n_points, 3u);  // 2, 3, 4
}

TEST(TailOls, FStatisticAndPValue) {
  // Hand-checkable residuals: y = 2x + e with e = (+1, -1, -1, +1). The
  // region applies on the data scale, 10^x.
  const std::vector<double> x{0, 1, 2, 3}, y{1, 1, 3, 7};
  const auto f = fit_loglog_ols(x, y, {0.0, std::numeric_limits<double>::infinity()});
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 0.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 20.0 / 24.0, 1e-12);
  EXPECT_NEAR(f.f_statistic, 10.0, 1e-10);        // SSR/(SSE/(n-2)) = 20/(4/2)
  EXPECT_NEAR(f.p_value, 0.087129070824723, 1e-9);  // F(1,2) upper tail at 10
}

TEST(TailOls, InsufficientOrDegenerateData) {
  SurvivalCurve c;
  c.points = {{1.0, 1.0}, {2.0, 0.5}};
  EXPECT_THROW(fit_tail_ols(c, {0.0, 10.0}), Error);
  const std::vector<double> x{1, 1, 1}, y{1, 2, 3};
  EXPECT_THROW(fit_loglog_ols(x, y, {0.0, 2.0}), Error);
}

TEST(Hill, ExactForKnownSums) {
  // ln(e/1) + ln(e^2/1) = 3, n = 2 -> alpha = 2/3.
  const std::vector<double> xs{0.5, std::exp(1.0), std::exp(2.0)};
  const auto h = fit_tail_hill(xs, 1.0);
  EXPECT_EQ(h.n_used, 2u);
  EXPECT_NEAR(h.alpha, 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(h.std_error, h.alpha / std::sqrt(2.0), 1e-14);
}

TEST(Hill, WeightedReducesToPlainWithUnitWeights) {
  const auto xs = sample_pareto(ParetoModel{1.0, 2.5, 1.0}, 500, std::uint64_t{9});
  const std::vector<double> w(xs.size(), 1.0);
  EXPECT_NEAR(fit_tail_hill_weighted(xs, w, 1.0).alpha, fit_tail_hill(xs, 1.0).alpha, 1e-12);
}

TEST(Hill, RejectsEmptyTail) {
  EXPECT_THROW(fit_tail_hill(std::vector<double>{0.1, 0.2}, 1.0), Error);
  EXPECT_THROW(fit_tail_hill(std::vector<double>{2.0}, 0.0), Error);
}

TEST(ParetoSampling, InverseCdfAndSupport) {
  const ParetoModel m{2.0, 3.0, 1.0};
  EXPECT_DOUBLE_EQ(pareto_from_uniform(m, 1.0), 2.0);
  EXPECT_NEAR(pareto_from_uniform(m, 0.125), 4.0, 1e-14);
  for (double x : sample_pareto(m, 1000, std::uint64_t{1})) EXPECT_GE(x, 2.0);
}

TEST(ParetoSampling, DeterministicPerSeed) {
  const ParetoModel m{1.0, 2.1, 1.0};
  EXPECT_EQ(sample_pareto(m, 100, std::uint64_t{5}), sample_pareto(m, 100, std::uint64_t{5}));
  EXPECT_NE(sample_pareto(m, 100, std::uint64_t{5}), sample_pareto(m, 100, std::uint64_t{6}));
}

TEST(ParetoSampling, LargeSampleHillNearTruth) {
  const auto xs = sample_pareto(ParetoModel{1.0, 2.1, 1.0}, 200000, std::uint64_t{77});
  const auto h = fit_tail_hill(xs, 1.0);
  EXPECT_NEAR(h.alpha, 2.1, 4.0 * h.std_error);
}

TEST(MomentMonteCarlo, InfiniteOrderDrawsNothing) {
  const auto est = pareto_moment_monte_carlo(ParetoModel{1.0, 2.1, 1.0}, 3, 1000, 1);
  EXPECT_TRUE(est.estimate.is_infinite());
  EXPECT_EQ(est.n_draws, 0u);
}

TEST(MomentMonteCarlo, DirectSamplingForFiniteVariance) {
  const ParetoModel m{1.0, 4.5, 1.0};
  const auto est = pareto_moment_monte_carlo(m, 2, 200000, 3);
  EXPECT_EQ(est.proposal_alpha, 4.5);
  EXPECT_NEAR(est.estimate.value(), pareto_moment(m, 2).value(), 5.0 * est.std_error);
}

TEST(MomentMonteCarlo, WeightedSamplingNearTheBoundary) {
  const ParetoModel m{2.0, 2.1, 1.0};
  const auto est = pareto_moment_monte_carlo(m, 2, 200000, 4);
  EXPECT_NEAR(est.proposal_alpha, 0.05, 1e-12);
  EXPECT_NEAR(est.estimate.value(), pareto_moment(m, 2).value(), 5.0 * est.std_error);
}

TEST(MomentMonteCarlo, ExtremeProposalDrawsStayFinite) {
  // Exponent 0.05 proposals reach x = u^-20, past the double range for tiny u.
  const auto est = pareto_moment_monte_carlo(ParetoModel{1.0, 2.1, 1.0}, 2, 3000000, 20112);
  EXPECT_TRUE(std::isfinite(est.estimate.value()));
  EXPECT_TRUE(std::isfinite(est.std_error));
}

TEST(Pareto, WorkedSurvivalAndTailMean) {
  EXPECT_DOUBLE_EQ(pareto_survival(ParetoModel{1.0, 1.0, 1.0}, 10.0), 0.1);
  EXPECT_DOUBLE_EQ(conditional_tail_mean(ParetoModel{1.0, 2.0, 1.0}, 1.0).value(), 2.0);
  EXPECT_THROW(conditional_tail_mean(ParetoModel{2.0, 2.0, 1.0}, 1.0), Error);
}

TEST(Pareto, DoublingQuartersSurvivalAtAlphaTwo) {
  const ParetoModel m{1.0, 2.0, 1.0 / 62.6};
  for (double x = 1.0; x < 1e6; x *= 3.7) {
    EXPECT_NEAR(pareto_survival(m, 2.0 * x) * 4.0, pareto_survival(m, x), 1e-15);
  }
}

TEST(Pareto, TailMeanAgreesWithSamplesAboveThreshold) {
  // Draws from the cutoff model kept only above t.
  const auto xs = sample_pareto(ParetoModel{1.0, 2.1, 1.0}, 2000000, std::uint64_t{41});
  double sum = 0.0;
  std::size_t n = 0;
  for (double x : xs) {
    if (x >= 1.48) {
      sum += x;
      ++n;
    }
  }
  EXPECT_NEAR(sum / n, conditional_tail_mean(ParetoModel{1.0, 2.1, 1.0}, 1.48).value(), 0.03);
}

TEST(TailOls, AnalyticCurveAtTwentyLogSpacedPoints) {
  const ParetoModel m{1.0, 2.1, 1.0};
  SurvivalCurve c;
  for (int k = 0; k < 20; ++k) {
    const double x = std::pow(10.0, 0.2 * k);
    c.points.push_back({x, pareto_survival(m, x)});
  }
  const auto f = fit_tail_ols(c, {0.0, std::numeric_limits<double>::infinity()});
  EXPECT_NEAR(f.slope, -2.1, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(TailOls, NearFlatLeftTail) {
  // Survival points with slope -0.001 and a deterministic ripple.
  SurvivalCurve c;
  for (int k = 0; k < 200; ++k) {
    const double x = 1.0 + 69.0 * k / 199.0;
    const double ripple = 1.0 + 2e-4 * std::sin(1.3 * k);
    c.points.push_back({x, std::pow(x, -0.001) * ripple * 0.999});
  }
  const auto f = fit_tail_ols(c, {0.0, 70.0});
  EXPECT_NEAR(f.slope, -0.001, 0.01);
}

TEST(TailOls, EmpiricalParetoCurve) {
  const auto xs = sample_pareto(ParetoModel{1.0, 2.1, 1.0}, 10000, std::uint64_t{101});
  const auto f = fit_tail_ols(empirical_survival(xs), {1.0, std::numeric_limits<double>::infinity()});
  EXPECT_NEAR(f.slope, -2.1, 0.1);
  EXPECT_GT(f.r_squared, 0.98);
}

TEST(Hill, WorkedExamples) {
  EXPECT_NEAR(fit_tail_hill(std::vector<double>{std::exp(1.0)}, 1.0).alpha, 1.0, 1e-15);
  EXPECT_NEAR(fit_tail_hill(std::vector<double>{0.5, std::exp(1.0)}, 1.0).alpha, 1.0, 1e-15);
  EXPECT_THROW(fit_tail_hill(std::vector<double>{1.0, 1.0}, 1.0), Error);
  const auto xs = sample_pareto(ParetoModel{1.0, 2.1, 1.0}, 100000, std::uint64_t{2024});
  EXPECT_NEAR(fit_tail_hill(xs, 1.0).alpha, 2.1, 0.03);
}

TEST(Estimators, OlsAndHillAgree) {
  for (double alpha : {1.5, 2.1, 3.0}) {
    const auto xs = sample_pareto(ParetoModel{1.0, alpha, 1.0}, 10000, std::uint64_t{500});
    const auto ols = fit_tail_ols(empirical_survival(xs), {0.0, std::numeric_limits<double>::infinity()});
    EXPECT_LT(std::abs(-ols.slope - fit_tail_hill(xs, 1.0).alpha), 0.1) << alpha;
  }
}

TEST(ParetoSampling, SurvivalAtTwiceCutoff) {
  const auto xs = sample_pareto(ParetoModel{1.0, 2.0, 1.0}, 100000, std::uint64_t{8});
  const double share = std::count_if(xs.begin(), xs.end(), [](double x) { return x >= 2.0; }) / 1e5;
  EXPECT_NEAR(share, 0.25, 0.01);
}
