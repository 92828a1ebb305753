#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tailrisk/bounds.hpp"
#include "tailrisk/components.hpp"
#include "tailrisk/portfolio.hpp"
#include "tailrisk/powerlaw.hpp"

namespace tailrisk {

enum class Regime : std::size_t { Political = 0, Performance = 1, BlackSwan = 2 };

inline constexpr std::size_t kRegimeCount = 3;

std::string_view to_string(Regime r);

using RegimeArray = std::array<double, kRegimeCount>;

// Interval membership of a ratio-percent value: (.., b1], (b1, b2], (b2, ..).
Regime regime_of(const RegimeBounds& bounds, double ratio_percent);

struct PoliticalComponent {
  double alpha = 0.0;    // exponent of x^-(alpha+1) on [epsilon, b1]
  double epsilon = 1.0;  // lower cutoff, ratio percent
};

struct PerformanceComponent {
  double mu = 100.0;     // truncated-Gaussian location
  double sigma = 15.0;   // truncated-Gaussian scale
};

struct BlackSwanComponent {
  double alpha = 2.0;  // Pareto exponent above b2
};

struct RegimeDiagnostics {
  std::string method;  // "fixed-bounds" or "em"
  std::array<std::size_t, kRegimeCount> counts{};
  std::size_t n_used = 0;
  std::size_t n_dropped_nonpositive = 0;
  std::optional<TailFitReport> political_ols;
  std::optional<TailFitReport> black_swan_ols;
  std::optional<HillEstimate> black_swan_hill;
  // Plain moments of the performance subset, as a tabulated report would show.
  std::optional<double> performance_subset_mean;
  std::optional<double> performance_subset_sd;
  std::size_t iterations = 0;
  std::vector<double> log_likelihood_trace;
};

/// Three bounded regimes on the ratio-percent scale: a truncated power law
/// below b1, a truncated Gaussian on (b1, b2] and a Pareto tail above b2.
/// A component with zero weight is absent and contributes no density.
struct RegimeModel {
  RegimeBounds bounds;
  RegimeArray weights{0.0, 1.0, 0.0};
  PoliticalComponent political;
  PerformanceComponent performance;
  BlackSwanComponent black_swan;
  double log_likelihood = 0.0;
  double bic = 0.0;
  RegimeDiagnostics diagnostics;

  bool present(Regime r) const { return weights[static_cast<std::size_t>(r)] > 0.0; }

  TruncatedPowerLaw political_law() const;
  TruncatedGaussian performance_law() const;
  ParetoModel black_swan_law() const;
};

// Throws Error(InvalidInput)/Error(InvalidBounds) on a malformed model.
void validate(const RegimeModel& model);

// Weights (0.06, 0.77, 0.17), bounds (70, 148], mu 103.58, sigma 14.79,
// alpha_R 2.1, alpha_L 0.001, epsilon 1: the tabulated three-regime fit.
RegimeModel reference_regime_model();

// Unweighted component densities at x (zero outside each support).
RegimeArray component_densities(const RegimeModel& model, double x);
// w_k f_k(x).
RegimeArray weighted_densities(const RegimeModel& model, double x);

double mixture_density(const RegimeModel& model, double x);

double log_likelihood(const RegimeModel& model, std::span<const double> sample);

// Number of free parameters of the present components (bounds excluded).
std::size_t free_parameter_count(const RegimeModel& model);

struct FitOptions {
  // Political cutoff; defaults to min(1, smallest positive observation).
  std::optional<double> epsilon;
};

// Per-regime estimates with the bounds held fixed: weights are subset shares,
// performance parameters come from the subset moments mapped through the
// truncated Gaussian, the Black Swan exponent is minus the log-log OLS slope
// of the survival curve above b2 (Hill recorded alongside), and the political
// exponent is the truncated power-law MLE. Non-positive values are dropped.
RegimeModel fit_fixed_bounds(std::span<const double> ratio_percent, const RegimeBounds& bounds,
                             FitOptions options = {});

struct EmConfig {
  double tol = 1e-8;
  std::size_t max_iter = 500;
};

RegimeModel fit_em(std::span<const double> ratio_percent, const RegimeModel& initial,
                   EmConfig config = {});

struct BoundsGrid {
  std::vector<double> b1;
  std::vector<double> b2;
};

// Evenly spaced candidates: count values from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

struct GridCell {
  RegimeBounds bounds;
  bool admissible = false;
  double bic = 0.0;
  double log_likelihood = 0.0;
  std::string reason;  // why the pair was rejected
};

struct BoundsSearchResult {
  RegimeBounds bounds;
  RegimeModel model;
  std::vector<GridCell> cells;  // row-major over (b1, b2)
};

// Profile search: EM from a fixed-bounds start at every admissible pair, the
// minimum-BIC pair wins; ties go to the pair nearest (70, 148).
BoundsSearchResult search_bounds(std::span<const double> ratio_percent, const BoundsGrid& grid,
                                 EmConfig config = {}, FitOptions options = {});

enum class ClassifyMode { FixedBounds, Posterior };

struct RegimeAssignment {
  std::string id;
  double ratio_percent = 0.0;
  RegimeArray posterior{};
  std::optional<Regime> label;
  std::optional<std::string> error;
};

// Normalizes weighted densities; all-zero input falls back to the interval
// indicator of x.
RegimeArray posterior_from(const RegimeArray& weighted, const RegimeBounds& bounds, double x);

std::vector<RegimeAssignment> classify(const RegimeModel& model, const Portfolio& portfolio,
                                       ClassifyMode mode);

double black_swan_probability(const RegimeModel& model);

}  // namespace tailrisk
