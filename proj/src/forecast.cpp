#include "tailrisk/forecast.hpp"

#include <cmath>

#include "tailrisk/error.hpp"

namespace tailrisk {

double linear_evm_forecast(double current_overrun_pct, double progress) {
  if (!(progress > 0.0 && progress <= 1.0)) {
    throw Error(ErrorKind::InvalidInput, "progress must lie in (0, 1]");
  }
  if (!(current_overrun_pct >= -100.0) || !std::isfinite(current_overrun_pct)) {
    throw Error(ErrorKind::InvalidInput, "current overrun must be >= -100 percent");
  }
  return current_overrun_pct / progress;
}

double powerlaw_forecast(double current_overrun_pct, double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::InvalidInput, "power-law exponent must be > 1");
  }
  if (!(current_overrun_pct >= 1.0) || !std::isfinite(current_overrun_pct)) {
    throw Error(ErrorKind::BelowValidity,
                "power-law rule needs a current overrun of at least 1 percent");
  }
  return std::pow(current_overrun_pct, alpha);
}

ForecastResult make_forecast(double current_overrun_pct, double progress, double alpha) {
  ForecastResult r;
  r.current_overrun_pct = current_overrun_pct;
  r.progress = progress;
  r.alpha_used = alpha;
  r.linear_forecast_pct = linear_evm_forecast(current_overrun_pct, progress);
  try {
    r.powerlaw_forecast_pct = powerlaw_forecast(current_overrun_pct, alpha);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BelowValidity) throw;
  }
  return r;
}

RegimeConditionalForecast regime_conditional_forecast(const RegimeModel& model) {
  validate(model);
  RegimeConditionalForecast out;
  if (model.present(Regime::Political)) {
    out.political = Extended::finite(model.political_law().mean());
  }
  if (model.present(Regime::Performance)) {
    out.performance = Extended::finite(model.performance_law().mean());
  }
  if (model.present(Regime::BlackSwan)) {
    out.black_swan = conditional_tail_mean(model.black_swan_law(), model.bounds.b2);
  }
  return out;
}

}  // namespace tailrisk
