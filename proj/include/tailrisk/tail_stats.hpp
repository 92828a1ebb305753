#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tailrisk/bounds.hpp"
#include "tailrisk/portfolio.hpp"

namespace tailrisk {

// Sample moments on the caller's scale. sd uses the n-1 convention;
// skewness and excess kurtosis are the standardized central moments
// m3/m2^1.5 and m4/m2^2 - 3 (a normal sample gives 0).
struct MomentsSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

MomentsSummary moments(std::span<const double> sample);

struct ReferenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool clamped = false;
  bool empty = false;  // clamp pushed lo above hi
};

// (max(-100, mean - z*sd), mean + z*sd) on the percent overrun scale.
ReferenceInterval normal_reference_interval(double mean, double sd, double z);

struct SurvivalPoint {
  double x = 0.0;
  double p = 0.0;

  friend bool operator==(const SurvivalPoint&, const SurvivalPoint&) = default;
};

// p(x) = #{x_j >= x} / n at each distinct value; ties collapse to one point.
struct SurvivalCurve {
  std::vector<SurvivalPoint> points;
  std::size_t n = 0;
};

SurvivalCurve empirical_survival(std::span<const double> sample);

struct LogLogPoint {
  double log10x = 0.0;
  double log10p = 0.0;
};

struct LogLogPoints {
  std::vector<LogLogPoint> points;
  std::size_t dropped = 0;  // points with x <= 0
};

LogLogPoints loglog_points(const SurvivalCurve& curve);

struct ImpactCell {
  std::size_t count = 0;
  std::optional<double> mean_cost_overrun;      // fraction; nullopt = undefined
  std::size_t schedule_count = 0;
  std::optional<double> mean_schedule_overrun;  // fraction over eligible records
};

// Conditional means by subset: whole portfolio, cost overrun > 0, and cost
// ratio above the Black Swan bound b2.
struct ImpactTable {
  ImpactCell all;
  ImpactCell overrun_only;
  ImpactCell black_swan;
};

ImpactTable impact_table(const Portfolio& portfolio, const RegimeBounds& bounds);

double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

}  // namespace tailrisk
