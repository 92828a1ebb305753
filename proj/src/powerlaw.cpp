#include "tailrisk/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/fisher_f.hpp>

#include "tailrisk/error.hpp"

namespace tailrisk {

void validate(const ParetoModel& model) {
  if (!(model.x0 > 0.0) || !std::isfinite(model.x0)) {
    throw Error(ErrorKind::InvalidInput, "pareto cutoff x0 must be > 0");
  }
  if (!(model.alpha > 0.0) || !std::isfinite(model.alpha)) {
    throw Error(ErrorKind::InvalidInput, "pareto exponent alpha must be > 0");
  }
  if (!(model.p0 > 0.0 && model.p0 <= 1.0)) {
    throw Error(ErrorKind::InvalidInput, "base probability p0 must lie in (0, 1]");
  }
}

double ParetoModel::scale_c() const { return p0 * std::pow(x0, alpha); }

double pareto_survival(const ParetoModel& model, double x) {
  validate(model);
  if (!(x >= model.x0)) throw Error(ErrorKind::Domain, "pareto survival needs x >= x0");
  return model.p0 * std::pow(model.x0 / x, model.alpha);
}

Extended pareto_moment(const ParetoModel& model, int m) {
  validate(model);
  if (m < 1) throw Error(ErrorKind::InvalidInput, "moment order must be >= 1");
  if (static_cast<double>(m) >= model.alpha) return Extended::infinite();
  return Extended::finite(model.alpha * std::pow(model.x0, m) / (model.alpha - m));
}

Extended conditional_tail_mean(const ParetoModel& model, double t) {
  validate(model);
  if (!(t >= model.x0)) throw Error(ErrorKind::Domain, "threshold must be >= x0");
  if (model.alpha <= 1.0) return Extended::infinite();
  return Extended::finite(model.alpha * t / (model.alpha - 1.0));
}

namespace {

TailFitReport ols_on(std::span<const double> lx, std::span<const double> ly, TailRegion region) {
  const std::size_t n = lx.size();
  if (n < 3) {
    throw Error(ErrorKind::InsufficientData,
                "log-log regression needs >= 3 points, got " + std::to_string(n));
  }
  const double nn = static_cast<double>(n);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= nn;
  my /= nn;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = lx[i] - mx;
    const double dy = ly[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::Degenerate, "region has zero abscissa variance");

  TailFitReport rep;
  rep.n_points = n;
  rep.region = region;
  rep.slope = sxy / sxx;
  rep.intercept = my - rep.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (rep.intercept + rep.slope * lx[i]);
    sse += r * r;
  }
  const double ssr = std::max(0.0, syy - sse);
  rep.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  const double dof = nn - 2.0;
  // Residuals at rounding level count as an exact fit.
  if (sse <= 1e-24 * std::max(1.0, syy)) {
    rep.f_statistic = std::numeric_limits<double>::infinity();
    rep.p_value = 0.0;
  } else {
    rep.f_statistic = ssr / (sse / dof);
    const boost::math::fisher_f_distribution<double> ref(1.0, dof);
    rep.p_value = boost::math::cdf(boost::math::complement(ref, rep.f_statistic));
  }
  return rep;
}

}  // namespace

TailFitReport fit_tail_ols(const SurvivalCurve& curve, TailRegion region, OlsOptions options) {
  std::vector<double> lx, ly;
  for (const auto& pt : curve.points) {
    if (pt.x > region.lo && pt.x <= region.hi && pt.x > 0.0 && pt.p > 0.0) {
      lx.push_back(std::log10(pt.x));
      ly.push_back(std::log10(pt.p));
    }
  }
  if (options.log_spaced_bins > 0 && lx.size() >= 3) {
    const double lo = lx.front();
    const double width = (lx.back() - lo) / static_cast<double>(options.log_spaced_bins);
    std::vector<double> tx, ty;
    long last_bin = -1;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const long bin = width > 0.0 ? static_cast<long>((lx[i] - lo) / width) : 0;
      if (bin != last_bin) {
        tx.push_back(lx[i]);
        ty.push_back(ly[i]);
        last_bin = bin;
      }
    }
    lx = std::move(tx);
    ly = std::move(ty);
  }
  return ols_on(lx, ly, region);
}

TailFitReport fit_loglog_ols(std::span<const double> log10x, std::span<const double> log10y,
                             TailRegion region) {
  if (log10x.size() != log10y.size()) {
    throw Error(ErrorKind::InvalidInput, "abscissa/ordinate length mismatch");
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < log10x.size(); ++i) {
    const double x = std::pow(10.0, log10x[i]);
    if (x > region.lo && x <= region.hi && std::isfinite(log10y[i])) {
      lx.push_back(log10x[i]);
      ly.push_back(log10y[i]);
    }
  }
  return ols_on(lx, ly, region);
}

HillEstimate fit_tail_hill(std::span<const double> sample, double x0) {
  if (!(x0 > 0.0)) throw Error(ErrorKind::InvalidInput, "hill cutoff must be > 0");
  std::size_t n = 0;
  double log_sum = 0.0;
  for (double x : sample) {
    if (x >= x0) {
      ++n;
      log_sum += std::log(x / x0);
    }
  }
  if (n == 0) throw Error(ErrorKind::InsufficientData, "no observations at or above x0");
  if (!(log_sum > 0.0)) throw Error(ErrorKind::Degenerate, "all tail observations equal x0");
  HillEstimate est;
  est.n_used = n;
  est.alpha = static_cast<double>(n) / log_sum;
  est.std_error = est.alpha / std::sqrt(static_cast<double>(n));
  return est;
}

HillEstimate fit_tail_hill_weighted(std::span<const double> sample,
                                    std::span<const double> weights, double x0) {
  if (sample.size() != weights.size()) {
    throw Error(ErrorKind::InvalidInput, "sample/weight length mismatch");
  }
  if (!(x0 > 0.0)) throw Error(ErrorKind::InvalidInput, "hill cutoff must be > 0");
  double w_sum = 0.0, wlog_sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (sample[i] >= x0 && weights[i] > 0.0) {
      w_sum += weights[i];
      wlog_sum += weights[i] * std::log(sample[i] / x0);
      ++n;
    }
  }
  if (n == 0 || !(w_sum > 0.0)) {
    throw Error(ErrorKind::InsufficientData, "no weighted observations at or above x0");
  }
  if (!(wlog_sum > 0.0)) throw Error(ErrorKind::Degenerate, "all tail observations equal x0");
  HillEstimate est;
  est.n_used = n;
  est.alpha = w_sum / wlog_sum;
  est.std_error = est.alpha / std::sqrt(w_sum);
  return est;
}

double pareto_from_uniform(const ParetoModel& model, double u) {
  return model.x0 * std::pow(u, -1.0 / model.alpha);
}

std::vector<double> sample_pareto(const ParetoModel& model, std::size_t n, Rng& rng) {
  validate(model);
  std::vector<double> out(n);
  for (auto& x : out) x = pareto_from_uniform(model, rng.uniform_pos());
  return out;
}

std::vector<double> sample_pareto(const ParetoModel& model, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_pareto(model, n, rng);
}

MomentEstimate pareto_moment_monte_carlo(const ParetoModel& model, int m, std::size_t n,
                                         std::uint64_t seed) {
  validate(model);
  if (m < 1) throw Error(ErrorKind::InvalidInput, "moment order must be at least 1");
  if (n < 2) throw Error(ErrorKind::InvalidInput, "need at least two draws");
  MomentEstimate est;
  if (static_cast<double>(m) >= model.alpha) return est;

  const bool direct = 2.0 * m < model.alpha;
  const double q = direct ? model.alpha : 0.5 * (model.alpha - m);
  Rng rng(seed);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // Log scale: proposal draws with a small exponent overflow a double.
    const double log_ratio = -std::log(rng.uniform_pos()) / q;  // ln(x / x0)
    double log_term = m * (std::log(model.x0) + log_ratio);
    if (!direct) log_term += std::log(model.alpha / q) + (q - model.alpha) * log_ratio;
    const double term = std::exp(log_term);
    const double delta = term - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (term - mean);
  }
  est.estimate = Extended::finite(mean);
  est.std_error = std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  est.n_draws = n;
  est.proposal_alpha = q;
  return est;
}

}  // namespace tailrisk
