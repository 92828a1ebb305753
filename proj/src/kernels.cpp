#include "tailrisk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "tailrisk/error.hpp"
#include "tailrisk/rng.hpp"
#include "tailrisk/sampler.hpp"

namespace tailrisk::kernels {
namespace {

std::size_t block_count(std::size_t n) { return (n + kReductionBlock - 1) / kReductionBlock; }

void accumulate_point(const RegimeModel& model, double x, EStepSums& s) {
  const RegimeArray wd = weighted_densities(model, x);
  const double total = wd[0] + wd[1] + wd[2];
  const RegimeArray r = posterior_from(wd, model.bounds, x);
  s.log_likelihood += total > 0.0 ? std::log(total) : -std::numeric_limits<double>::infinity();
  s.resp[0] += r[0];
  s.resp[1] += r[1];
  s.resp[2] += r[2];
  if (r[0] > 0.0) s.political_log_x += r[0] * std::log(x);
  if (r[1] > 0.0) {
    s.performance_x += r[1] * x;
    s.performance_x2 += r[1] * x * x;
  }
  if (r[2] > 0.0 && x > model.bounds.b2) {
    s.black_swan_log_ratio += r[2] * std::log(x / model.bounds.b2);
  }
}

double point_log_density(const RegimeModel& model, double x) {
  const double d = mixture_density(model, x);
  return d > 0.0 ? std::log(d) : -std::numeric_limits<double>::infinity();
}

void simulate_chunk(const MixtureSampler& sampler, std::size_t n_projects, std::size_t first,
                    std::size_t last, std::uint64_t seed, PortfolioTrials& out) {
  Rng rng(derive_seed(seed, first / kTrialChunk));
  for (std::size_t t = first; t < last; ++t) {
    double sum = 0.0;
    bool swan = false;
    for (std::size_t j = 0; j < n_projects; ++j) {
      const auto d = sampler.draw(rng);
      sum += d.value / 100.0 - 1.0;
      swan = swan || d.regime == Regime::BlackSwan;
    }
    out.total_overrun[t] = sum / static_cast<double>(n_projects);
    out.any_black_swan[t] = swan ? 1 : 0;
  }
}

CellOutcome evaluate_cell(std::span<const double> sample, RegimeBounds bounds,
                          const EmConfig& config, const FitOptions& options) {
  CellOutcome out;
  out.cell.bounds = bounds;
  if (!(bounds.b1 < bounds.b2)) {
    out.cell.reason = "b1 >= b2";
    return out;
  }
  try {
    const RegimeModel init = fit_fixed_bounds(sample, bounds, options);
    RegimeModel fitted = fit_em(sample, init, config);
    out.cell.admissible = true;
    out.cell.bic = fitted.bic;
    out.cell.log_likelihood = fitted.log_likelihood;
    out.model = std::move(fitted);
  } catch (const Error& e) {
    out.cell.reason = e.what();
  }
  return out;
}

}  // namespace

EStepSums& EStepSums::operator+=(const EStepSums& o) {
  for (std::size_t k = 0; k < kRegimeCount; ++k) resp[k] += o.resp[k];
  political_log_x += o.political_log_x;
  performance_x += o.performance_x;
  performance_x2 += o.performance_x2;
  black_swan_log_ratio += o.black_swan_log_ratio;
  log_likelihood += o.log_likelihood;
  return *this;
}

double log_likelihood_serial(const RegimeModel& model, std::span<const double> sample) {
  double ll = 0.0;
  for (double x : sample) ll += point_log_density(model, x);
  return ll;
}

double log_likelihood_parallel(const RegimeModel& model, std::span<const double> sample) {
  const std::size_t blocks = block_count(sample.size());
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * kReductionBlock;
    const std::size_t hi = std::min(sample.size(), lo + kReductionBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += point_log_density(model, sample[i]);
    partial[b] = acc;
  }
  double ll = 0.0;
  for (double p : partial) ll += p;
  return ll;
}

EStepSums e_step_serial(const RegimeModel& model, std::span<const double> sample) {
  EStepSums s;
  for (double x : sample) accumulate_point(model, x, s);
  return s;
}

EStepSums e_step_parallel(const RegimeModel& model, std::span<const double> sample) {
  const std::size_t blocks = block_count(sample.size());
  std::vector<EStepSums> partial(blocks);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * kReductionBlock;
    const std::size_t hi = std::min(sample.size(), lo + kReductionBlock);
    for (std::size_t i = lo; i < hi; ++i) accumulate_point(model, sample[i], partial[b]);
  }
  EStepSums s;
  for (const auto& p : partial) s += p;
  return s;
}

PortfolioTrials portfolio_trials_serial(const RegimeModel& model, std::size_t n_projects,
                                        std::size_t n_trials, std::uint64_t seed) {
  const MixtureSampler sampler(model);
  PortfolioTrials out{std::vector<double>(n_trials), std::vector<std::uint8_t>(n_trials)};
  for (std::size_t first = 0; first < n_trials; first += kTrialChunk) {
    simulate_chunk(sampler, n_projects, first, std::min(n_trials, first + kTrialChunk), seed,
                   out);
  }
  return out;
}

PortfolioTrials portfolio_trials_parallel(const RegimeModel& model, std::size_t n_projects,
                                          std::size_t n_trials, std::uint64_t seed) {
  const MixtureSampler sampler(model);
  PortfolioTrials out{std::vector<double>(n_trials), std::vector<std::uint8_t>(n_trials)};
  const std::size_t chunks = (n_trials + kTrialChunk - 1) / kTrialChunk;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t first = c * kTrialChunk;
    simulate_chunk(sampler, n_projects, first, std::min(n_trials, first + kTrialChunk), seed,
                   out);
  }
  return out;
}

std::vector<CellOutcome> evaluate_grid_serial(std::span<const double> ratio_percent,
                                              const BoundsGrid& grid, const EmConfig& config,
                                              const FitOptions& options) {
  std::vector<CellOutcome> out;
  out.reserve(grid.b1.size() * grid.b2.size());
  for (double b1 : grid.b1) {
    for (double b2 : grid.b2) out.push_back(evaluate_cell(ratio_percent, {b1, b2}, config, options));
  }
  return out;
}

std::vector<CellOutcome> evaluate_grid_parallel(std::span<const double> ratio_percent,
                                                const BoundsGrid& grid, const EmConfig& config,
                                                const FitOptions& options) {
  const std::size_t cols = grid.b2.size();
  const std::size_t total = grid.b1.size() * cols;
  std::vector<CellOutcome> out(total);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < total; ++i) {
    out[i] = evaluate_cell(ratio_percent, {grid.b1[i / cols], grid.b2[i % cols]}, config, options);
  }
  return out;
}

}  // namespace tailrisk::kernels
