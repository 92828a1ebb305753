#include "tailrisk/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "tailrisk/error.hpp"
#include "tailrisk/kernels.hpp"
#include "tailrisk/rng.hpp"
#include "tailrisk/sampler.hpp"

namespace tailrisk {

std::vector<double> sample_mixture(const MixtureSampleSpec& spec, std::vector<Regime>* regimes) {
  if (spec.n < 1) throw Error(ErrorKind::InvalidInput, "sample size must be >= 1");
  const MixtureSampler sampler(spec.model);
  Rng rng(spec.seed);
  std::vector<double> out(spec.n);
  if (regimes) regimes->resize(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const auto d = sampler.draw(rng);
    out[i] = d.value;
    if (regimes) (*regimes)[i] = d.regime;
  }
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorKind::EmptySample, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(values.size() - 1, lo + 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

PortfolioSimulationResult portfolio_monte_carlo(const RegimeModel& model, std::size_t n_projects,
                                                std::size_t n_trials, std::uint64_t seed) {
  if (n_projects < 1) throw Error(ErrorKind::InvalidInput, "n_projects must be >= 1");
  if (n_trials < 100) throw Error(ErrorKind::InvalidInput, "n_trials must be >= 100");
  auto trials = kernels::portfolio_trials_parallel(model, n_projects, n_trials, seed);

  PortfolioSimulationResult r;
  r.n_trials = n_trials;
  r.n_projects = n_projects;
  std::size_t swans = 0;
  double sum = 0.0;
  for (std::size_t t = 0; t < n_trials; ++t) {
    swans += trials.any_black_swan[t];
    sum += trials.total_overrun[t];
  }
  r.probability_at_least_one_black_swan = static_cast<double>(swans) / static_cast<double>(n_trials);
  r.closed_form_probability = 1.0 - std::pow(1.0 - model.weights[2], static_cast<double>(n_projects));
  r.mean_total_overrun = sum / static_cast<double>(n_trials);
  std::vector<double> sorted = trials.total_overrun;
  std::sort(sorted.begin(), sorted.end());
  r.p50 = quantile(sorted, 0.50);
  r.p90 = quantile(sorted, 0.90);
  r.p99 = quantile(sorted, 0.99);
  r.total_overrun = std::move(trials.total_overrun);
  return r;
}

std::vector<double> gibrat_process(const GibratParams& p, std::uint64_t seed) {
  if (p.n_steps < 1) throw Error(ErrorKind::InvalidInput, "n_steps must be >= 1");
  if (!(p.lower_barrier > 0.0)) throw Error(ErrorKind::InvalidInput, "lower barrier must be > 0");
  if (!(p.shock_sd >= 0.0)) throw Error(ErrorKind::InvalidInput, "shock sd must be >= 0");
  if (!(p.initial_size > 0.0)) throw Error(ErrorKind::InvalidInput, "initial size must be > 0");
  std::vector<double> sizes(p.n_units, p.initial_size);
  if (p.shock_sd == 0.0) return sizes;
  const double drift = -0.5 * p.drift_ratio * p.shock_sd * p.shock_sd;
  // Units are independent; one stream per block of units keeps the output
  // independent of the thread count.
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (p.n_units + kBlock - 1) / kBlock;
  const double log_barrier = std::log(p.lower_barrier);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    Rng rng(derive_seed(seed, b));
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(p.n_units, lo + kBlock);
    for (std::size_t i = lo; i < hi; ++i) {
      double log_size = std::log(sizes[i]);
      for (std::size_t s = 0; s < p.n_steps; ++s) {
        log_size += drift + p.shock_sd * rng.normal();
        if (log_size < log_barrier) log_size = log_barrier;
      }
      sizes[i] = std::exp(log_size);
    }
  }
  return sizes;
}

std::vector<std::uint64_t> simon_preferential(std::size_t n_items, double p_new,
                                              std::uint64_t seed) {
  if (!(p_new > 0.0 && p_new < 1.0)) throw Error(ErrorKind::InvalidInput, "p_new must lie in (0, 1)");
  if (n_items < 1) throw Error(ErrorKind::InvalidInput, "n_items must be >= 1");
  Rng rng(seed);
  std::vector<std::uint32_t> class_of;  // class id of every item so far
  class_of.reserve(n_items);
  std::vector<std::uint64_t> sizes;
  class_of.push_back(0);
  sizes.push_back(1);
  for (std::size_t i = 1; i < n_items; ++i) {
    if (rng.bernoulli(p_new)) {
      class_of.push_back(static_cast<std::uint32_t>(sizes.size()));
      sizes.push_back(1);
    } else {
      const std::uint32_t c = class_of[rng.below(class_of.size())];
      class_of.push_back(c);
      ++sizes[c];
    }
  }
  return sizes;
}

std::vector<std::uint64_t> monkey_typing(std::size_t alphabet_size, double space_prob,
                                         std::size_t n_words, std::uint64_t seed) {
  if (alphabet_size < 2 || alphabet_size > 26) {
    throw Error(ErrorKind::InvalidInput, "alphabet size must lie in [2, 26]");
  }
  if (!(space_prob > 0.0 && space_prob < 1.0)) {
    throw Error(ErrorKind::InvalidInput, "space probability must lie in (0, 1)");
  }
  Rng rng(seed);
  std::unordered_map<std::string, std::uint64_t> counts;
  std::string word;
  for (std::size_t w = 0; w < n_words; ++w) {
    word.clear();
    while (!rng.bernoulli(space_prob)) {
      word.push_back(static_cast<char>('a' + rng.below(alphabet_size)));
    }
    ++counts[word];
  }
  std::vector<std::uint64_t> freq;
  freq.reserve(counts.size());
  for (const auto& [_, c] : counts) freq.push_back(c);
  std::sort(freq.begin(), freq.end(), std::greater<>());
  return freq;
}

std::vector<double> double_pareto(double rate_up, double rate_down, std::size_t n,
                                  std::uint64_t seed) {
  if (!(rate_up > 0.0) || !(rate_down > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "double pareto rates must be > 0");
  }
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) {
    const double e1 = rng.exponential(rate_up);
    const double e2 = rng.exponential(rate_down);
    x = std::exp(e1 - e2);
  }
  return out;
}

TailFitReport fit_rank_frequency(const std::vector<std::uint64_t>& sorted_desc,
                                 std::uint64_t min_count, std::size_t bins) {
  std::vector<double> lr, lf;
  std::size_t limit = 0;
  while (limit < sorted_desc.size() && sorted_desc[limit] >= min_count) ++limit;
  if (limit < 3) throw Error(ErrorKind::InsufficientData, "too few ranks above min_count");
  const double top = std::log10(static_cast<double>(limit));
  long last_bin = -1;
  for (std::size_t i = 0; i < limit; ++i) {
    const double x = std::log10(static_cast<double>(i + 1));
    const long bin = static_cast<long>(x / top * static_cast<double>(bins));
    if (bin == last_bin) continue;
    last_bin = bin;
    lr.push_back(x);
    lf.push_back(std::log10(static_cast<double>(sorted_desc[i])));
  }
  return fit_loglog_ols(lr, lf, {0.0, std::numeric_limits<double>::infinity()});
}

}  // namespace tailrisk
