#include "tailrisk/tail_stats.hpp"

#include <algorithm>
#include <cmath>

#include "tailrisk/error.hpp"

namespace tailrisk {

MomentsSummary moments(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 2) throw Error(ErrorKind::Degenerate, "moments need at least 2 observations");
  double mean = 0.0;
  for (double x : sample) mean += x;
  mean /= static_cast<double>(n);
  // Central sums in a second pass keep cancellation under control.
  double s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (double x : sample) {
    const double d = x - mean;
    const double d2 = d * d;
    s2 += d2;
    s3 += d2 * d;
    s4 += d2 * d2;
  }
  const double nn = static_cast<double>(n);
  const double m2 = s2 / nn;
  if (!(m2 > 0.0)) throw Error(ErrorKind::Degenerate, "sample has zero variance");
  MomentsSummary out;
  out.n = n;
  out.mean = mean;
  out.sd = std::sqrt(s2 / (nn - 1.0));
  out.skewness = (s3 / nn) / std::pow(m2, 1.5);
  out.excess_kurtosis = (s4 / nn) / (m2 * m2) - 3.0;
  return out;
}

ReferenceInterval normal_reference_interval(double mean, double sd, double z) {
  if (!(sd > 0.0)) throw Error(ErrorKind::InvalidInput, "sd must be > 0");
  if (!(z > 0.0)) throw Error(ErrorKind::InvalidInput, "z must be > 0");
  ReferenceInterval out;
  const double lo = mean - z * sd;
  out.hi = mean + z * sd;
  out.clamped = lo < -100.0;
  out.lo = out.clamped ? -100.0 : lo;
  out.empty = out.lo > out.hi;
  return out;
}

SurvivalCurve empirical_survival(std::span<const double> sample) {
  if (sample.empty()) throw Error(ErrorKind::EmptySample, "survival curve of an empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  SurvivalCurve curve;
  curve.n = sorted.size();
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size();) {
    const double x = sorted[i];
    // #{x_j >= x} counts this value and everything after it.
    curve.points.push_back({x, static_cast<double>(sorted.size() - i) / n});
    while (i < sorted.size() && sorted[i] == x) ++i;
  }
  return curve;
}

LogLogPoints loglog_points(const SurvivalCurve& curve) {
  if (curve.points.empty()) throw Error(ErrorKind::EmptySample, "empty survival curve");
  LogLogPoints out;
  for (const auto& pt : curve.points) {
    if (pt.x <= 0.0 || pt.p <= 0.0) {
      ++out.dropped;
      continue;
    }
    out.points.push_back({std::log10(pt.x), std::log10(pt.p)});
  }
  if (out.points.empty()) {
    throw Error(ErrorKind::EmptySample, "no positive abscissae remain for the log-log view");
  }
  return out;
}

namespace {

struct CellAccumulator {
  std::size_t count = 0;
  double cost_sum = 0.0;
  std::size_t schedule_count = 0;
  double schedule_sum = 0.0;

  void add(const ProjectRecord& r, double cost_overrun) {
    ++count;
    cost_sum += cost_overrun;
    if (r.forecast_months && r.actual_months) {
      ++schedule_count;
      schedule_sum += compute_overrun(*r.forecast_months, *r.actual_months);
    }
  }

  ImpactCell finish() const {
    ImpactCell cell;
    cell.count = count;
    cell.schedule_count = schedule_count;
    if (count > 0) cell.mean_cost_overrun = cost_sum / static_cast<double>(count);
    if (schedule_count > 0) {
      cell.mean_schedule_overrun = schedule_sum / static_cast<double>(schedule_count);
    }
    return cell;
  }
};

}  // namespace

ImpactTable impact_table(const Portfolio& portfolio, const RegimeBounds& bounds) {
  validate(bounds);
  if (portfolio.records.empty()) throw Error(ErrorKind::EmptySample, "empty portfolio");
  CellAccumulator all, over, swan;
  for (const auto& r : portfolio.records) {
    const double o = compute_overrun(r.forecast_cost, r.actual_cost);
    all.add(r, o);
    if (o > 0.0) over.add(r, o);
    if (to_ratio_percent(o) > bounds.b2) swan.add(r, o);
  }
  return {all.finish(), over.finish(), swan.finish()};
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorKind::InvalidInput, "length mismatch");
  if (xs.size() < 2) throw Error(ErrorKind::Degenerate, "need at least 2 pairs");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw Error(ErrorKind::Degenerate, "correlation undefined for a constant series");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace tailrisk
