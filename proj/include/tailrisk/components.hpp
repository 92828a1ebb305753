#pragma once

#include <span>

namespace tailrisk {

/// Gaussian N(mu, sigma) truncated to the half-open interval (lo, hi].
///
/// Density, moments and inverse CDF are renormalized by the retained mass
/// Phi(beta) - Phi(alpha); the fit inverts the moment map, which for this
/// exponential family is also the maximum-likelihood solution.
struct TruncatedGaussian {
  double mu = 0.0;
  double sigma = 1.0;
  double lo = 0.0;
  double hi = 1.0;

  double mass() const;
  double log_mass() const;  // stays finite where mass() underflows
  double pdf(double x) const;
  double log_pdf(double x) const;
  double mean() const;
  double variance() const;
  // u in (0, 1) mapped through the truncated inverse CDF.
  double quantile(double u) const;
};

// Parameters (mu, sigma) whose truncated mean/variance match the targets.
// Falls back to the untruncated moments when no finite solution exists.
TruncatedGaussian fit_truncated_gaussian(double target_mean, double target_var, double lo,
                                         double hi);

/// Truncated power law f(x) proportional to x^-(alpha + 1) on [eps, hi],
/// alpha >= 0. On the log scale this is an exponential with rate alpha cut to
/// an interval, which keeps alpha -> 0 (log-uniform) numerically exact.
struct TruncatedPowerLaw {
  double alpha = 0.0;
  double eps = 1.0;
  double hi = 2.0;

  double pdf(double x) const;
  double log_pdf(double x) const;
  double mean() const;
  double quantile(double u) const;
};

// MLE of alpha >= 0 given the (weighted) mean of ln x over the support.
double fit_truncated_power_law_alpha(double mean_log_x, double eps, double hi);

}  // namespace tailrisk
