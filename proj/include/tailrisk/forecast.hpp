#pragma once

#include <optional>

#include "tailrisk/extended.hpp"
#include "tailrisk/regime.hpp"

namespace tailrisk {

// Earned-value baseline: the overrun observed so far scaled by 1/progress.
double linear_evm_forecast(double current_overrun_pct, double progress);

/// Power-law escalation of a current overrun: current_overrun_pct^alpha.
///
/// The rule is evaluated on the percent scale (20 -> 20^2.1 ~ 540), so it is
/// unit dependent and only meaningful for overruns of at least 1 percent;
/// below that it would shrink the forecast and is rejected. It is calibrated
/// at halfway progress and carries no progress dependence.
double powerlaw_forecast(double current_overrun_pct, double alpha);

struct ForecastResult {
  double current_overrun_pct = 0.0;
  double progress = 1.0;
  double linear_forecast_pct = 0.0;
  std::optional<double> powerlaw_forecast_pct;  // absent below the validity domain
  double alpha_used = 2.1;
};

ForecastResult make_forecast(double current_overrun_pct, double progress, double alpha);

// Expected ratio-percent outcome of a project known to sit in each regime.
// std::nullopt marks an absent regime.
struct RegimeConditionalForecast {
  std::optional<Extended> political;
  std::optional<Extended> performance;
  std::optional<Extended> black_swan;
};

RegimeConditionalForecast regime_conditional_forecast(const RegimeModel& model);

}  // namespace tailrisk
