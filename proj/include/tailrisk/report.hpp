#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tailrisk/forecast.hpp"
#include "tailrisk/generators.hpp"
#include "tailrisk/portfolio.hpp"
#include "tailrisk/powerlaw.hpp"
#include "tailrisk/regime.hpp"
#include "tailrisk/tail_stats.hpp"

namespace tailrisk::report {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchemaVersion = "1.0.0";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Scale labels attached to every object that carries scaled numbers.
inline constexpr std::string_view kOverrunFraction = "overrun-fraction";
inline constexpr std::string_view kRatioPercent = "ratio-percent";
inline constexpr std::string_view kPercent = "percent";

struct SeedInfo {
  std::uint64_t seed = 0;
  std::string source;  // "flag", "env" or "default"
};

// Common header: schema/tool versions, kind, timestamp, optional seed registry.
Json envelope(std::string_view kind, const std::string& generated_at,
              const std::optional<SeedInfo>& seed = std::nullopt);

// Finite numbers stay numbers; the infinite marker becomes "infinite".
Json extended(const Extended& value);
Json number_or_infinite(double value);

Json portfolio_json(const Portfolio& portfolio);
Json portfolio_summary(const Portfolio& portfolio);
Json moments_json(const MomentsSummary& m, std::string_view scale);
Json interval_json(const ReferenceInterval& r, double z);
Json tail_fit_json(const TailFitReport& fit);
Json hill_json(const HillEstimate& h, double x0);
Json impact_json(const ImpactTable& table);

// One row per regime with the tabulated labels: lower_bound, upper_bound,
// probability, slope, mean, std_dev, F, p, r_squared.
Json regime_table(const RegimeModel& model);

// Exact parameters, readable back with model_from_json.
Json model_json(const RegimeModel& model);
RegimeModel model_from_json(const Json& j);

Json fit_json(const RegimeModel& model);
Json conditional_forecast_json(const RegimeConditionalForecast& f);
Json forecast_json(const ForecastResult& f, std::string_view alpha_source);
Json simulation_json(const PortfolioSimulationResult& r);

// Drops the timestamp so two reports can be compared for determinism.
Json without_timestamp(Json j);

}  // namespace tailrisk::report
