#include "tailrisk/regime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tailrisk/error.hpp"
#include "tailrisk/kernels.hpp"
#include "tailrisk/tail_stats.hpp"

namespace tailrisk {
namespace {

constexpr double kCollapseWeight = 1e-6;

std::vector<double> positive_values(std::span<const double> sample, std::size_t& dropped) {
  std::vector<double> out;
  out.reserve(sample.size());
  dropped = 0;
  for (double x : sample) {
    if (x > 0.0 && std::isfinite(x)) {
      out.push_back(x);
    } else {
      ++dropped;
    }
  }
  return out;
}

double default_epsilon(std::span<const double> positive) {
  return std::min(1.0, *std::min_element(positive.begin(), positive.end()));
}

void finish_scores(RegimeModel& model, std::span<const double> sample) {
  model.log_likelihood = kernels::log_likelihood_parallel(model, sample);
  model.bic = static_cast<double>(free_parameter_count(model)) *
                  std::log(static_cast<double>(sample.size())) -
              2.0 * model.log_likelihood;
}

// Expected complete-data log-likelihood of the performance component.
double performance_q(const kernels::EStepSums& s, const PerformanceComponent& c,
                     const RegimeBounds& bounds) {
  const TruncatedGaussian g{c.mu, c.sigma, bounds.b1, bounds.b2};
  const double r = s.resp[1];
  const double sq = s.performance_x2 - 2.0 * c.mu * s.performance_x + c.mu * c.mu * r;
  return -sq / (2.0 * c.sigma * c.sigma) - r * (std::log(c.sigma) + g.log_mass());
}

}  // namespace

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Political: return "political";
    case Regime::Performance: return "performance";
    case Regime::BlackSwan: return "black_swan";
  }
  return "unknown";
}

Regime regime_of(const RegimeBounds& bounds, double x) {
  if (x <= bounds.b1) return Regime::Political;
  if (x <= bounds.b2) return Regime::Performance;
  return Regime::BlackSwan;
}

TruncatedPowerLaw RegimeModel::political_law() const {
  return {political.alpha, political.epsilon, bounds.b1};
}

TruncatedGaussian RegimeModel::performance_law() const {
  return {performance.mu, performance.sigma, bounds.b1, bounds.b2};
}

ParetoModel RegimeModel::black_swan_law() const { return {bounds.b2, black_swan.alpha, 1.0}; }

void validate(const RegimeModel& model) {
  validate(model.bounds);
  double sum = 0.0;
  for (double w : model.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorKind::InvalidInput, "regime weights must be finite and >= 0");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidInput, "regime weights must sum to 1");
  }
  if (model.present(Regime::Political)) {
    if (!(model.political.alpha >= 0.0) || !std::isfinite(model.political.alpha)) {
      throw Error(ErrorKind::InvalidInput, "political exponent must be >= 0");
    }
    if (!(model.political.epsilon > 0.0 && model.political.epsilon < model.bounds.b1)) {
      throw Error(ErrorKind::InvalidInput, "political cutoff must satisfy 0 < epsilon < b1");
    }
  }
  if (model.present(Regime::Performance)) {
    if (!(model.performance.sigma > 0.0) || !std::isfinite(model.performance.sigma) ||
        !std::isfinite(model.performance.mu)) {
      throw Error(ErrorKind::InvalidInput, "performance sigma must be finite and > 0");
    }
    if (!std::isfinite(model.performance_law().log_mass())) {
      throw Error(ErrorKind::InvalidInput, "performance component has no mass inside its bounds");
    }
  }
  if (model.present(Regime::BlackSwan) &&
      (!(model.black_swan.alpha > 0.0) || !std::isfinite(model.black_swan.alpha))) {
    throw Error(ErrorKind::InvalidInput, "black swan exponent must be > 0");
  }
}

RegimeModel reference_regime_model() {
  RegimeModel m;
  m.bounds = {70.0, 148.0};
  m.weights = {0.06, 0.77, 0.17};
  m.political = {0.001, 1.0};
  m.performance = {103.58, 14.79};
  m.black_swan = {2.1};
  m.diagnostics.method = "reference";
  return m;
}

RegimeArray component_densities(const RegimeModel& model, double x) {
  RegimeArray d{0.0, 0.0, 0.0};
  if (model.present(Regime::Political)) d[0] = model.political_law().pdf(x);
  if (model.present(Regime::Performance)) d[1] = model.performance_law().pdf(x);
  if (model.present(Regime::BlackSwan) && x > model.bounds.b2) {
    const double a = model.black_swan.alpha;
    d[2] = a / model.bounds.b2 * std::pow(model.bounds.b2 / x, a + 1.0);
  }
  return d;
}

RegimeArray weighted_densities(const RegimeModel& model, double x) {
  RegimeArray d = component_densities(model, x);
  for (std::size_t k = 0; k < kRegimeCount; ++k) d[k] *= model.weights[k];
  return d;
}

double mixture_density(const RegimeModel& model, double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::Domain, "mixture density needs x > 0");
  const RegimeArray d = weighted_densities(model, x);
  return d[0] + d[1] + d[2];
}

double log_likelihood(const RegimeModel& model, std::span<const double> sample) {
  return kernels::log_likelihood_parallel(model, sample);
}

std::size_t free_parameter_count(const RegimeModel& model) {
  std::size_t present = 0;
  std::size_t k = 0;
  if (model.present(Regime::Political)) {
    ++present;
    k += 1;
  }
  if (model.present(Regime::Performance)) {
    ++present;
    k += 2;
  }
  if (model.present(Regime::BlackSwan)) {
    ++present;
    k += 1;
  }
  return k + (present > 0 ? present - 1 : 0);
}

RegimeModel fit_fixed_bounds(std::span<const double> ratio_percent, const RegimeBounds& bounds,
                             FitOptions options) {
  validate(bounds);
  std::size_t dropped = 0;
  const std::vector<double> xs = positive_values(ratio_percent, dropped);
  if (xs.empty()) throw Error(ErrorKind::EmptySample, "no positive ratio-percent values to fit");
  const double eps = options.epsilon.value_or(default_epsilon(xs));
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidInput, "epsilon must be > 0");

  std::vector<double> political, performance, black_swan;
  for (double x : xs) {
    switch (regime_of(bounds, x)) {
      case Regime::Political: political.push_back(x); break;
      case Regime::Performance: performance.push_back(x); break;
      case Regime::BlackSwan: black_swan.push_back(x); break;
    }
  }
  const auto require = [](const std::vector<double>& v, const char* name) {
    if (!v.empty() && v.size() < 3) {
      throw Error(ErrorKind::InsufficientData, std::string(name) + " regime has " +
                                                   std::to_string(v.size()) +
                                                   " observations, need >= 3");
    }
  };
  require(political, "political");
  require(performance, "performance");
  require(black_swan, "black_swan");

  RegimeModel model;
  model.bounds = bounds;
  const double n = static_cast<double>(xs.size());
  model.weights = {static_cast<double>(political.size()) / n,
                   static_cast<double>(performance.size()) / n,
                   static_cast<double>(black_swan.size()) / n};
  model.political.epsilon = eps;
  auto& diag = model.diagnostics;
  diag.method = "fixed-bounds";
  diag.counts = {political.size(), performance.size(), black_swan.size()};
  diag.n_used = xs.size();
  diag.n_dropped_nonpositive = dropped;

  const SurvivalCurve curve = empirical_survival(xs);

  if (!political.empty()) {
    if (*std::min_element(political.begin(), political.end()) < eps) {
      throw Error(ErrorKind::InvalidInput, "political observations fall below epsilon");
    }
    if (!(eps < bounds.b1)) {
      throw Error(ErrorKind::InvalidBounds, "b1 must exceed the political cutoff epsilon");
    }
    double mean_log = 0.0;
    for (double x : political) mean_log += std::log(x);
    mean_log /= static_cast<double>(political.size());
    model.political.alpha = fit_truncated_power_law_alpha(mean_log, eps, bounds.b1);
    try {
      diag.political_ols = fit_tail_ols(curve, {0.0, bounds.b1});
    } catch (const Error&) {
      diag.political_ols.reset();
    }
  }

  if (!performance.empty()) {
    const MomentsSummary m = moments(performance);
    diag.performance_subset_mean = m.mean;
    diag.performance_subset_sd = m.sd;
    const double pop_var = m.sd * m.sd * (m.n - 1.0) / static_cast<double>(m.n);
    const TruncatedGaussian g = fit_truncated_gaussian(m.mean, pop_var, bounds.b1, bounds.b2);
    model.performance = {g.mu, g.sigma};
  }

  if (!black_swan.empty()) {
    const TailFitReport ols = fit_tail_ols(curve, {bounds.b2, std::numeric_limits<double>::infinity()});
    if (!(ols.slope < 0.0)) {
      throw Error(ErrorKind::Degenerate, "survival curve above b2 does not decrease");
    }
    diag.black_swan_ols = ols;
    model.black_swan.alpha = -ols.slope;
    diag.black_swan_hill = fit_tail_hill(black_swan, bounds.b2);
  }

  validate(model);
  finish_scores(model, xs);
  diag.log_likelihood_trace = {model.log_likelihood};
  return model;
}

RegimeModel fit_em(std::span<const double> ratio_percent, const RegimeModel& initial,
                   EmConfig config) {
  validate(initial);
  std::size_t dropped = 0;
  const std::vector<double> xs = positive_values(ratio_percent, dropped);
  if (xs.size() < 10) {
    throw Error(ErrorKind::InsufficientData, "EM needs at least 10 positive observations");
  }
  const double n = static_cast<double>(xs.size());
  const RegimeBounds& bounds = initial.bounds;

  RegimeModel model = initial;
  model.diagnostics.method = "em";
  model.diagnostics.n_used = xs.size();
  model.diagnostics.n_dropped_nonpositive = dropped;
  model.diagnostics.log_likelihood_trace.clear();

  kernels::EStepSums sums = kernels::e_step_parallel(model, xs);
  double previous = sums.log_likelihood;
  model.diagnostics.log_likelihood_trace.push_back(previous);

  std::size_t iter = 0;
  while (iter < config.max_iter) {
    ++iter;
    RegimeModel next = model;
    for (std::size_t k = 0; k < kRegimeCount; ++k) {
      next.weights[k] = sums.resp[k] / n;
      if (next.weights[k] < kCollapseWeight) {
        throw Error(ErrorKind::ComponentCollapse,
                    "component '" + std::string(to_string(static_cast<Regime>(k))) +
                        "' collapsed (weight " + std::to_string(next.weights[k]) + ")");
      }
    }
    if (sums.resp[0] > 0.0) {
      next.political.alpha = fit_truncated_power_law_alpha(sums.political_log_x / sums.resp[0],
                                                           next.political.epsilon, bounds.b1);
    }
    if (sums.resp[1] > 0.0) {
      const double mean = sums.performance_x / sums.resp[1];
      const double var = std::max(0.0, sums.performance_x2 / sums.resp[1] - mean * mean);
      const TruncatedGaussian g = fit_truncated_gaussian(mean, var, bounds.b1, bounds.b2);
      const PerformanceComponent candidate{g.mu, g.sigma};
      // Keep the update only if it does not lower the expected log-likelihood.
      if (performance_q(sums, candidate, bounds) >= performance_q(sums, model.performance, bounds)) {
        next.performance = candidate;
      }
    }
    if (sums.resp[2] > 0.0) {
      if (!(sums.black_swan_log_ratio > 0.0)) {
        throw Error(ErrorKind::Numeric, "black swan responsibilities carry no tail mass");
      }
      next.black_swan.alpha = sums.resp[2] / sums.black_swan_log_ratio;
    }

    kernels::EStepSums next_sums = kernels::e_step_parallel(next, xs);
    const double current = next_sums.log_likelihood;
    if (!std::isfinite(current)) {
      throw Error(ErrorKind::Numeric, "non-finite log-likelihood at EM iteration " +
                                          std::to_string(iter));
    }
    model = std::move(next);
    sums = next_sums;
    model.diagnostics.log_likelihood_trace.push_back(current);
    const double gain = current - previous;
    previous = current;
    if (!(gain >= config.tol)) break;
  }
  model.diagnostics.iterations = iter;
  validate(model);
  // Counts follow hard labels under the fitted model.
  model.diagnostics.counts = {0, 0, 0};
  for (double x : xs) {
    const RegimeArray post = posterior_from(weighted_densities(model, x), bounds, x);
    const auto best = static_cast<std::size_t>(std::max_element(post.begin(), post.end()) - post.begin());
    ++model.diagnostics.counts[best];
  }
  model.log_likelihood = previous;
  model.bic = static_cast<double>(free_parameter_count(model)) * std::log(n) - 2.0 * previous;
  return model;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

BoundsSearchResult search_bounds(std::span<const double> ratio_percent, const BoundsGrid& grid,
                                 EmConfig config, FitOptions options) {
  if (!std::is_sorted(grid.b1.begin(), grid.b1.end()) ||
      !std::is_sorted(grid.b2.begin(), grid.b2.end())) {
    throw Error(ErrorKind::InvalidInput, "bound candidate grids must be ordered");
  }
  if (!options.epsilon) {
    std::size_t dropped = 0;
    const auto xs = positive_values(ratio_percent, dropped);
    if (xs.empty()) throw Error(ErrorKind::EmptySample, "no positive ratio-percent values");
    options.epsilon = default_epsilon(xs);
  }
  auto outcomes = kernels::evaluate_grid_parallel(ratio_percent, grid, config, options);

  const RegimeBounds defaults{};
  const auto distance = [&](const RegimeBounds& b) {
    return std::hypot(b.b1 - defaults.b1, b.b2 - defaults.b2);
  };
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].cell.admissible) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto& cur = outcomes[*best].cell;
    const auto& cand = outcomes[i].cell;
    if (cand.bic < cur.bic ||
        (cand.bic == cur.bic && distance(cand.bounds) < distance(cur.bounds))) {
      best = i;
    }
  }
  if (!best) throw Error(ErrorKind::NoAdmissible, "no admissible (b1, b2) pair in the grid");

  BoundsSearchResult result;
  result.bounds = outcomes[*best].cell.bounds;
  result.model = *outcomes[*best].model;
  result.cells.reserve(outcomes.size());
  for (auto& o : outcomes) result.cells.push_back(std::move(o.cell));
  return result;
}

RegimeArray posterior_from(const RegimeArray& weighted, const RegimeBounds& bounds, double x) {
  const double total = weighted[0] + weighted[1] + weighted[2];
  RegimeArray post{0.0, 0.0, 0.0};
  if (total > 0.0 && std::isfinite(total)) {
    for (std::size_t k = 0; k < kRegimeCount; ++k) post[k] = weighted[k] / total;
    return post;
  }
  post[static_cast<std::size_t>(regime_of(bounds, x))] = 1.0;
  return post;
}

std::vector<RegimeAssignment> classify(const RegimeModel& model, const Portfolio& portfolio,
                                       ClassifyMode mode) {
  validate(model);
  std::vector<RegimeAssignment> out;
  out.reserve(portfolio.records.size());
  for (const auto& r : portfolio.records) {
    RegimeAssignment a;
    a.id = r.id;
    a.ratio_percent = to_ratio_percent(compute_overrun(r.forecast_cost, r.actual_cost));
    if (!(a.ratio_percent > 0.0)) {
      a.error = "cost ratio must be > 0 to classify";
      out.push_back(std::move(a));
      continue;
    }
    if (mode == ClassifyMode::FixedBounds) {
      a.posterior[static_cast<std::size_t>(regime_of(model.bounds, a.ratio_percent))] = 1.0;
    } else {
      a.posterior = posterior_from(weighted_densities(model, a.ratio_percent), model.bounds,
                                   a.ratio_percent);
    }
    a.label = static_cast<Regime>(std::max_element(a.posterior.begin(), a.posterior.end()) -
                                  a.posterior.begin());
    out.push_back(std::move(a));
  }
  return out;
}

double black_swan_probability(const RegimeModel& model) {
  validate(model);
  return model.weights[2];
}

}  // namespace tailrisk
