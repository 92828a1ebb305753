#include "tailrisk/report.hpp"

#include <cmath>

#include "tailrisk/error.hpp"

namespace tailrisk::report {
namespace {

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

double read_number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw Error(ErrorKind::Format, std::string("model JSON: missing number '") + key + "'");
  }
  return j.at(key).get<double>();
}

const Json& read_object(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_object()) {
    throw Error(ErrorKind::Format, std::string("model JSON: missing object '") + key + "'");
  }
  return j.at(key);
}

}  // namespace

Json envelope(std::string_view kind, const std::string& generated_at,
              const std::optional<SeedInfo>& seed) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["kind"] = kind;
  j["generated_at"] = generated_at;
  if (seed) j["seeds"] = {{"seed", seed->seed}, {"source", seed->source}};
  return j;
}

Json extended(const Extended& value) {
  return value.is_infinite() ? Json("infinite") : Json(value.value());
}

Json number_or_infinite(double value) {
  return std::isinf(value) ? Json("infinite") : Json(value);
}

Json portfolio_json(const Portfolio& portfolio) {
  Json records = Json::array();
  for (const auto& r : portfolio.records) {
    records.push_back({
        {"id", r.id},
        {"forecast_cost", r.forecast_cost},
        {"actual_cost", r.actual_cost},
        {"forecast_months", optional_number(r.forecast_months)},
        {"actual_months", optional_number(r.actual_months)},
        {"project_type", to_string(r.project_type)},
        {"system_type", to_string(r.system_type)},
        {"decision_year", r.decision_year ? Json(*r.decision_year) : Json(nullptr)},
        {"cost_overrun", compute_overrun(r.forecast_cost, r.actual_cost)},
    });
  }
  return {
      {"scales", {{"cost", "currency"}, {"months", "months"}, {"cost_overrun", kOverrunFraction}}},
      {"currency_label", portfolio.currency_label},
      {"provenance_note", portfolio.provenance_note},
      {"n", portfolio.records.size()},
      {"records", std::move(records)},
  };
}

Json portfolio_summary(const Portfolio& portfolio) {
  double forecast = 0.0, actual = 0.0;
  std::size_t with_schedule = 0;
  for (const auto& r : portfolio.records) {
    forecast += r.forecast_cost;
    actual += r.actual_cost;
    if (r.forecast_months && r.actual_months) ++with_schedule;
  }
  return {
      {"scale", kOverrunFraction},
      {"n", portfolio.records.size()},
      {"n_with_schedule", with_schedule},
      {"total_forecast_cost", forecast},
      {"total_actual_cost", actual},
      {"total_overrun", forecast > 0.0 ? Json((actual - forecast) / forecast) : Json(nullptr)},
  };
}

Json moments_json(const MomentsSummary& m, std::string_view scale) {
  return {
      {"scale", scale},
      {"n", m.n},
      {"mean", m.mean},
      {"sd", m.sd},
      {"skewness", m.skewness},
      {"excess_kurtosis", m.excess_kurtosis},
  };
}

Json interval_json(const ReferenceInterval& r, double z) {
  return {
      {"scale", kPercent},
      {"z", z},
      {"lower", r.lo},
      {"upper", r.hi},
      {"clamped", r.clamped},
      {"empty", r.empty},
  };
}

Json tail_fit_json(const TailFitReport& fit) {
  return {
      {"scale", kRatioPercent},
      {"region", {{"lo", number_or_infinite(fit.region.lo)}, {"hi", number_or_infinite(fit.region.hi)}}},
      {"slope", fit.slope},
      {"intercept", fit.intercept},
      {"F", number_or_infinite(fit.f_statistic)},
      {"p", fit.p_value},
      {"r_squared", fit.r_squared},
      {"n_points", fit.n_points},
  };
}

Json hill_json(const HillEstimate& h, double x0) {
  return {
      {"scale", kRatioPercent},
      {"x0", x0},
      {"alpha", h.alpha},
      {"std_error", h.std_error},
      {"n_used", h.n_used},
  };
}

Json impact_json(const ImpactTable& table) {
  const auto cell = [](const ImpactCell& c) {
    return Json{
        {"count", c.count},
        {"mean_cost_overrun", optional_number(c.mean_cost_overrun)},
        {"schedule_count", c.schedule_count},
        {"mean_schedule_overrun", optional_number(c.mean_schedule_overrun)},
    };
  };
  return {
      {"scale", kOverrunFraction},
      {"all", cell(table.all)},
      {"overrun_only", cell(table.overrun_only)},
      {"black_swan", cell(table.black_swan)},
  };
}

Json regime_table(const RegimeModel& model) {
  const auto& d = model.diagnostics;
  const auto fit_cells = [](Json& row, const std::optional<TailFitReport>& fit) {
    row["F"] = fit ? number_or_infinite(fit->f_statistic) : Json(nullptr);
    row["p"] = fit ? Json(fit->p_value) : Json(nullptr);
    row["r_squared"] = fit ? Json(fit->r_squared) : Json(nullptr);
  };
  Json rows = Json::array();

  Json political{{"regime", "political"}, {"scale", kRatioPercent}};
  political["lower_bound"] = 0.0;
  political["upper_bound"] = model.bounds.b1;
  political["probability"] = model.weights[0];
  political["slope"] = d.political_ols ? Json(d.political_ols->slope) : Json(nullptr);
  political["mean"] = nullptr;
  political["std_dev"] = nullptr;
  fit_cells(political, d.political_ols);
  political["count"] = d.counts[0];
  rows.push_back(std::move(political));

  Json performance{{"regime", "performance"}, {"scale", kRatioPercent}};
  performance["lower_bound"] = model.bounds.b1;
  performance["upper_bound"] = model.bounds.b2;
  performance["probability"] = model.weights[1];
  performance["slope"] = nullptr;
  const bool has_mid = model.present(Regime::Performance);
  performance["mean"] = d.performance_subset_mean ? Json(*d.performance_subset_mean)
                        : has_mid                 ? Json(model.performance.mu)
                                                  : Json(nullptr);
  performance["std_dev"] = d.performance_subset_sd ? Json(*d.performance_subset_sd)
                           : has_mid               ? Json(model.performance.sigma)
                                                   : Json(nullptr);
  fit_cells(performance, std::nullopt);
  performance["count"] = d.counts[1];
  rows.push_back(std::move(performance));

  Json swan{{"regime", "black_swan"}, {"scale", kRatioPercent}};
  swan["lower_bound"] = model.bounds.b2;
  swan["upper_bound"] = "infinite";
  swan["probability"] = model.weights[2];
  if (d.black_swan_ols) {
    swan["slope"] = d.black_swan_ols->slope;
  } else if (model.present(Regime::BlackSwan)) {
    swan["slope"] = -model.black_swan.alpha;
  } else {
    swan["slope"] = nullptr;
  }
  swan["mean"] = nullptr;
  swan["std_dev"] = nullptr;
  fit_cells(swan, d.black_swan_ols);
  swan["count"] = d.counts[2];
  rows.push_back(std::move(swan));
  return rows;
}

Json model_json(const RegimeModel& model) {
  const auto param = [&](Regime r, Json value) {
    return model.present(r) ? std::move(value) : Json(nullptr);
  };
  return {
      {"scale", kRatioPercent},
      {"bounds", {{"b1", model.bounds.b1}, {"b2", model.bounds.b2}}},
      {"weights",
       {{"political", model.weights[0]},
        {"performance", model.weights[1]},
        {"black_swan", model.weights[2]}}},
      {"political", param(Regime::Political, {{"alpha", model.political.alpha},
                                              {"epsilon", model.political.epsilon}})},
      {"performance", param(Regime::Performance, {{"mu", model.performance.mu},
                                                  {"sigma", model.performance.sigma}})},
      {"black_swan", param(Regime::BlackSwan, {{"alpha", model.black_swan.alpha}})},
  };
}

RegimeModel model_from_json(const Json& j) {
  const Json& m = j.contains("model") && j.at("model").is_object() ? j.at("model") : j;
  RegimeModel model;
  const Json& bounds = read_object(m, "bounds");
  model.bounds = {read_number(bounds, "b1"), read_number(bounds, "b2")};
  const Json& w = read_object(m, "weights");
  model.weights = {read_number(w, "political"), read_number(w, "performance"),
                   read_number(w, "black_swan")};
  if (model.present(Regime::Political)) {
    const Json& p = read_object(m, "political");
    model.political = {read_number(p, "alpha"), read_number(p, "epsilon")};
  }
  if (model.present(Regime::Performance)) {
    const Json& p = read_object(m, "performance");
    model.performance = {read_number(p, "mu"), read_number(p, "sigma")};
  }
  if (model.present(Regime::BlackSwan)) {
    model.black_swan = {read_number(read_object(m, "black_swan"), "alpha")};
  }
  model.diagnostics.method = "loaded";
  validate(model);
  return model;
}

Json fit_json(const RegimeModel& model) {
  const auto& d = model.diagnostics;
  Json j{
      {"method", d.method},
      {"log_likelihood", model.log_likelihood},
      {"bic", model.bic},
      {"free_parameters", free_parameter_count(model)},
      {"iterations", d.iterations},
      {"log_likelihood_trace", d.log_likelihood_trace},
      {"n_used", d.n_used},
      {"n_dropped_nonpositive", d.n_dropped_nonpositive},
      {"truncated_gaussian",
       model.present(Regime::Performance)
           ? Json{{"scale", kRatioPercent}, {"mu", model.performance.mu}, {"sigma", model.performance.sigma}}
           : Json(nullptr)},
      {"black_swan_hill",
       d.black_swan_hill ? hill_json(*d.black_swan_hill, model.bounds.b2) : Json(nullptr)},
  };
  return j;
}

Json conditional_forecast_json(const RegimeConditionalForecast& f) {
  const auto cell = [](const std::optional<Extended>& v) {
    return v ? extended(*v) : Json(nullptr);
  };
  return {
      {"scale", kRatioPercent},
      {"political", cell(f.political)},
      {"performance", cell(f.performance)},
      {"black_swan", cell(f.black_swan)},
  };
}

Json forecast_json(const ForecastResult& f, std::string_view alpha_source) {
  return {
      {"scale", kPercent},
      {"current_overrun", f.current_overrun_pct},
      {"progress", f.progress},
      {"linear_forecast", f.linear_forecast_pct},
      {"powerlaw_forecast", optional_number(f.powerlaw_forecast_pct)},
      {"alpha_used", f.alpha_used},
      {"alpha_source", alpha_source},
      {"calibration", "halftime-calibrated"},
  };
}

Json simulation_json(const PortfolioSimulationResult& r) {
  return {
      {"scale", kOverrunFraction},
      {"n_trials", r.n_trials},
      {"n_projects", r.n_projects},
      {"probability_at_least_one_black_swan", r.probability_at_least_one_black_swan},
      {"closed_form_probability", r.closed_form_probability},
      {"mean_total_overrun", r.mean_total_overrun},
      {"quantiles", {{"p50", r.p50}, {"p90", r.p90}, {"p99", r.p99}}},
  };
}

Json without_timestamp(Json j) {
  j.erase("generated_at");
  return j;
}

}  // namespace tailrisk::report
