#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "tailrisk/extended.hpp"
#include "tailrisk/rng.hpp"
#include "tailrisk/tail_stats.hpp"

namespace tailrisk {

// Pareto tail P(X >= x) = p0 * (x0 / x)^alpha for x >= x0.
struct ParetoModel {
  double x0 = 1.0;
  double alpha = 1.0;
  double p0 = 1.0;  // survival mass at the cutoff

  // C in P(X >= x) = C x^-alpha.
  double scale_c() const;
};

// Throws Error(InvalidInput) unless x0 > 0, alpha > 0, p0 in (0, 1].
void validate(const ParetoModel& model);

double pareto_survival(const ParetoModel& model, double x);

// Raw moment E[X^m] = alpha x0^m / (alpha - m) for m < alpha, the infinite
// marker otherwise. The p0 rescaling does not enter (it is a conditional law).
Extended pareto_moment(const ParetoModel& model, int m);

// E[X | X >= t] = alpha t / (alpha - 1) for alpha > 1, infinite otherwise.
Extended conditional_tail_mean(const ParetoModel& model, double t);

// Monte Carlo estimate of E[X^m] with its standard error. Direct sampling is
// used while X^m has finite variance (2m < alpha); otherwise draws come from a
// heavier Pareto with exponent (alpha - m) / 2 and are importance weighted,
// which keeps the estimator variance finite. m >= alpha gives the infinite
// marker and draws nothing.
struct MomentEstimate {
  Extended estimate = Extended::infinite();
  double std_error = 0.0;
  std::size_t n_draws = 0;
  double proposal_alpha = 0.0;  // equals the model alpha for direct sampling
};

MomentEstimate pareto_moment_monte_carlo(const ParetoModel& model, int m, std::size_t n,
                                         std::uint64_t seed);

// Half-open region (lo, hi] on the data scale.
struct TailRegion {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
};

struct TailFitReport {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double f_statistic = 0.0;  // +inf for an exact fit
  double p_value = 1.0;
  std::size_t n_points = 0;
  TailRegion region;
};

struct OlsOptions {
  // 0 keeps every point; otherwise keep at most one point per log-spaced
  // abscissa bin, reducing the weight of the dense small-x end.
  std::size_t log_spaced_bins = 0;
};

// Least squares of log10 p on log10 x over the curve points inside region.
TailFitReport fit_tail_ols(const SurvivalCurve& curve, TailRegion region,
                           OlsOptions options = {});

// Same regression over raw (log10 x, log10 y) pairs; shared by the rank-
// frequency fits of the generators.
TailFitReport fit_loglog_ols(std::span<const double> log10x, std::span<const double> log10y,
                             TailRegion region);

struct HillEstimate {
  double alpha = 0.0;
  double std_error = 0.0;
  std::size_t n_used = 0;
};

// alpha = n / sum ln(x_i / x0) over x_i >= x0.
HillEstimate fit_tail_hill(std::span<const double> sample, double x0);

// Responsibility-weighted Hill update: sum w_i / sum w_i ln(x_i / x0).
HillEstimate fit_tail_hill_weighted(std::span<const double> sample,
                                    std::span<const double> weights, double x0);

// Inverse-CDF draw x0 * u^(-1/alpha), u uniform on (0, 1].
double pareto_from_uniform(const ParetoModel& model, double u);
std::vector<double> sample_pareto(const ParetoModel& model, std::size_t n, Rng& rng);
std::vector<double> sample_pareto(const ParetoModel& model, std::size_t n, std::uint64_t seed);

}  // namespace tailrisk
