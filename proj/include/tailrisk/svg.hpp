#pragma once

#include <span>
#include <string>
#include <vector>

#include "tailrisk/tail_stats.hpp"

namespace tailrisk {

// A fitted line log10 p = intercept + slope * log10 x drawn between two
// abscissae given on the data scale.
struct SlopeOverlay {
  double slope = 0.0;
  double intercept = 0.0;
  double x_from = 1.0;
  double x_to = 10.0;
  std::string label;
};

struct LogLogAnnotations {
  std::vector<SlopeOverlay> overlays;
  std::vector<double> bound_markers;  // data-scale x positions, drawn at log10 x
  std::string title = "Survival function (log-log)";
};

// Scatter of (log10 x, log10 p) with optional overlays and vertical bound
// markers. Output depends only on the inputs.
std::string render_loglog_svg(std::span<const LogLogPoint> points,
                              const LogLogAnnotations& annotations = {});

}  // namespace tailrisk
