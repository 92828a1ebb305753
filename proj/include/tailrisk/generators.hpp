#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tailrisk/regime.hpp"

namespace tailrisk {

struct MixtureSampleSpec {
  RegimeModel model;
  std::size_t n = 1;
  std::uint64_t seed = 0;
};

// Ratio-percent draws; regimes optionally returned alongside.
std::vector<double> sample_mixture(const MixtureSampleSpec& spec,
                                   std::vector<Regime>* regimes = nullptr);

struct PortfolioSimulationResult {
  std::size_t n_trials = 0;
  std::size_t n_projects = 0;
  std::vector<double> total_overrun;  // per trial, overrun fraction of total cost
  double probability_at_least_one_black_swan = 0.0;
  double closed_form_probability = 0.0;  // 1 - (1 - w_R)^n_projects
  double mean_total_overrun = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
};

// Equal-budget portfolios of n_projects drawn from the model, n_trials times.
PortfolioSimulationResult portfolio_monte_carlo(const RegimeModel& model, std::size_t n_projects,
                                                std::size_t n_trials, std::uint64_t seed);

// Empirical quantile by linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

struct GibratParams {
  std::size_t n_units = 10000;
  std::size_t n_steps = 1000;
  double shock_sd = 0.1;
  // Mean of the log shock is -drift_ratio * shock_sd^2 / 2; with the barrier
  // this sets the stationary upper-tail exponent near drift_ratio.
  double drift_ratio = 2.0;
  double lower_barrier = 1.0;
  double initial_size = 1.0;
};

// Multiplicative growth s <- s * exp(mu + shock_sd * Z) with sizes held at
// the lower barrier whenever a step would cross it. Returns final sizes.
std::vector<double> gibrat_process(const GibratParams& params, std::uint64_t seed);

// Simon's urn: each new item founds a class with probability p_new, otherwise
// joins the class of a uniformly chosen earlier item (size-proportional).
// Returns class sizes in order of founding.
std::vector<std::uint64_t> simon_preferential(std::size_t n_items, double p_new,
                                              std::uint64_t seed);

// Random typing: letters uniform over the alphabet, a space (probability
// space_prob) ends the word; empty words count. Returns the frequency of each
// distinct word, sorted descending (rank order).
std::vector<std::uint64_t> monkey_typing(std::size_t alphabet_size, double space_prob,
                                         std::size_t n_words, std::uint64_t seed);

// X = exp(E1 - E2), E1 ~ Exp(rate_up), E2 ~ Exp(rate_down).
std::vector<double> double_pareto(double rate_up, double rate_down, std::size_t n,
                                  std::uint64_t seed);

// Log-log OLS of frequency on rank using at most one rank per log-spaced bin,
// restricted to ranks whose frequency is at least min_count.
TailFitReport fit_rank_frequency(const std::vector<std::uint64_t>& sorted_desc,
                                 std::uint64_t min_count, std::size_t bins = 60);

}  // namespace tailrisk
