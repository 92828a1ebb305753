#include "tailrisk/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <unistd.h>

#include <CLI11.hpp>

#include "tailrisk/error.hpp"
#include "tailrisk/format.hpp"
#include "tailrisk/forecast.hpp"
#include "tailrisk/generators.hpp"
#include "tailrisk/portfolio.hpp"
#include "tailrisk/powerlaw.hpp"
#include "tailrisk/regime.hpp"
#include "tailrisk/report.hpp"
#include "tailrisk/svg.hpp"
#include "tailrisk/tail_stats.hpp"

namespace tailrisk::cli {
namespace {

using report::Json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Staged outputs, committed together after the command succeeds. Files are
// written to a temporary sibling and renamed into place.
class Outputs {
 public:
  explicit Outputs(std::ostream& out) : out_(out) {}

  void add(const std::string& path, std::string content) {
    pending_.emplace_back(path, std::move(content));
  }

  void commit() {
    std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged;
    try {
      for (const auto& [path, content] : pending_) {
        if (path == "-") continue;
        std::filesystem::path target(path);
        std::filesystem::path tmp = target;
        tmp += ".tmp." + std::to_string(::getpid());
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
        f << content;
        f.close();
        if (!f) throw Error(ErrorKind::InvalidInput, "failed writing '" + path + "'");
        staged.emplace_back(tmp, target);
      }
    } catch (...) {
      for (const auto& [tmp, _] : staged) std::filesystem::remove(tmp);
      throw;
    }
    for (const auto& [tmp, target] : staged) std::filesystem::rename(tmp, target);
    for (const auto& [path, content] : pending_) {
      if (path == "-") out_ << content;
    }
    out_.flush();
  }

 private:
  std::ostream& out_;
  std::vector<std::pair<std::string, std::string>> pending_;
};

std::string timestamp() {
  std::time_t t = 0;
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"); sde && *sde) {
    t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

report::SeedInfo resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return {*flag, "flag"};
  if (const char* env = std::getenv("TAILRISK_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return {v, "env"};
    throw UsageError("TAILRISK_SEED must be a non-negative integer");
  }
  return {kDefaultSeed, "default"};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Portfolio load_portfolio(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
  Portfolio p = parse_portfolio_csv(in);
  if (p.records.empty()) throw Error(ErrorKind::EmptySample, "'" + path + "' has no data rows");
  p.provenance_note = std::filesystem::path(path).filename().string();
  return p;
}

Json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Format, "'" + path + "' is not valid JSON: " + e.what());
  }
}

Dimension parse_dimension(const std::string& s) {
  if (s == "cost") return Dimension::Cost;
  if (s == "schedule") return Dimension::Schedule;
  throw UsageError("--dimension must be 'cost' or 'schedule'");
}

std::vector<double> ratio_sample(const Portfolio& p, Dimension d) {
  auto sample = extract_overruns(p, d);
  std::vector<double> out;
  out.reserve(sample.values.size());
  for (double o : sample.values) out.push_back(to_ratio_percent(o));
  return out;
}

std::vector<double> parse_grid(const std::string& spec) {
  // lo:hi:count
  double lo = 0.0, hi = 0.0;
  std::size_t count = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count == 0 || lo > hi) {
    throw UsageError("grid must look like lo:hi:count, got '" + spec + "'");
  }
  return linear_grid(lo, hi, count);
}

std::string csv_column(const std::string& header, const std::vector<double>& values) {
  std::string s = header + "\n";
  for (double v : values) s += format_double(v) + "\n";
  return s;
}

std::string classifications_csv(const std::vector<RegimeAssignment>& rows) {
  std::string s = "id,ratio_percent,p_political,p_performance,p_black_swan,label,error\n";
  for (const auto& a : rows) {
    s += a.id + "," + format_double(a.ratio_percent) + "," + format_double(a.posterior[0]) + "," +
         format_double(a.posterior[1]) + "," + format_double(a.posterior[2]) + "," +
         (a.label ? std::string(to_string(*a.label)) : "") + "," + a.error.value_or("") + "\n";
  }
  return s;
}

// ---- subcommands -----------------------------------------------------------

struct CommonOpts {
  std::string input;
  std::string out = "-";
  std::string dimension = "cost";
};

void cmd_ingest(const CommonOpts& o, Outputs& outputs) {
  const Portfolio p = load_portfolio(o.input);
  Json j = report::envelope("portfolio", timestamp());
  j["portfolio"] = report::portfolio_json(p);
  j["summary"] = report::portfolio_summary(p);
  outputs.add(o.out, dump(j));
}

void cmd_stats(const CommonOpts& o, double z, Outputs& outputs) {
  const Portfolio p = load_portfolio(o.input);
  const Dimension dim = parse_dimension(o.dimension);
  auto sample = extract_overruns(p, dim).values;
  for (auto& v : sample) v *= 100.0;
  const MomentsSummary m = moments(sample);
  Json j = report::envelope("stats", timestamp());
  j["dimension"] = to_string(dim);
  j["summary"] = report::portfolio_summary(p);
  j["moments"] = report::moments_json(m, report::kPercent);
  j["normal_reference_interval"] =
      report::interval_json(normal_reference_interval(m.mean, m.sd, z), z);
  outputs.add(o.out, dump(j));
}

void cmd_survival(const CommonOpts& o, bool loglog, const std::string& svg_path,
                  std::optional<double> b1, std::optional<double> b2, Outputs& outputs) {
  const Portfolio p = load_portfolio(o.input);
  const auto sample = ratio_sample(p, parse_dimension(o.dimension));
  const SurvivalCurve curve = empirical_survival(sample);
  std::string csv;
  std::optional<LogLogPoints> ll;
  if (loglog || !svg_path.empty()) ll = loglog_points(curve);
  if (loglog) {
    csv = "log10x,log10p\n";
    for (const auto& pt : ll->points) {
      csv += format_double(pt.log10x) + "," + format_double(pt.log10p) + "\n";
    }
  } else {
    csv = "x,p\n";
    for (const auto& pt : curve.points) {
      csv += format_double(pt.x) + "," + format_double(pt.p) + "\n";
    }
  }
  outputs.add(o.out, std::move(csv));
  if (!svg_path.empty()) {
    LogLogAnnotations notes;
    notes.title = "Survival function of the cost ratio (ratio-percent, log-log)";
    if (b1) notes.bound_markers.push_back(*b1);
    if (b2) notes.bound_markers.push_back(*b2);
    const auto overlay = [&](TailRegion region, double from, double to, const char* name) {
      try {
        const TailFitReport fit = fit_tail_ols(curve, region);
        notes.overlays.push_back({fit.slope, fit.intercept, from, to,
                                  std::string(name) + " slope " + format_double(std::round(fit.slope * 1000) / 1000)});
      } catch (const Error&) {
      }
    };
    if (b1) overlay({0.0, *b1}, std::max(curve.points.front().x, 1e-9), *b1, "political");
    if (b2) overlay({*b2, std::numeric_limits<double>::infinity()}, *b2, curve.points.back().x, "black swan");
    outputs.add(svg_path, render_loglog_svg(ll->points, notes));
  }
}

void cmd_fit_tail(const CommonOpts& o, double lo, double hi, std::size_t bins, Outputs& outputs) {
  const Portfolio p = load_portfolio(o.input);
  const Dimension dim = parse_dimension(o.dimension);
  const auto sample = ratio_sample(p, dim);
  const SurvivalCurve curve = empirical_survival(sample);
  const TailFitReport fit = fit_tail_ols(curve, {lo, hi}, {bins});
  Json j = report::envelope("tail-fit", timestamp());
  j["dimension"] = to_string(dim);
  j["fit"] = report::tail_fit_json(fit);
  j["implied_alpha"] = -fit.slope;
  std::vector<double> tail;
  for (double x : sample) {
    if (x > lo && x <= hi) tail.push_back(x);
  }
  Json hill = nullptr;
  if (lo > 0.0) {
    try {
      hill = report::hill_json(fit_tail_hill(tail, lo), lo);
    } catch (const Error&) {
    }
  }
  j["hill"] = hill;
  outputs.add(o.out, dump(j));
}

struct RegimeOpts {
  std::optional<double> b1, b2;
  bool search = false;
  std::string b1_grid = "50:90:10";
  std::string b2_grid = "128:168:10";
  bool em = false;
  double tol = 1e-8;
  std::size_t max_iter = 500;
  std::optional<double> epsilon;
  std::string classes_path;
  std::optional<std::uint64_t> seed;
};

void cmd_fit_regimes(const CommonOpts& o, const RegimeOpts& r, Outputs& outputs) {
  if (r.search && (r.b1 || r.b2)) throw UsageError("--search cannot be combined with --b1/--b2");
  const report::SeedInfo seed = resolve_seed(r.seed);
  const Portfolio p = load_portfolio(o.input);
  const Dimension dim = parse_dimension(o.dimension);
  const auto sample = ratio_sample(p, dim);
  FitOptions fit_options;
  fit_options.epsilon = r.epsilon;
  const EmConfig em_config{r.tol, r.max_iter};

  Json search = nullptr;
  RegimeModel model;
  if (r.search) {
    const BoundsGrid grid{parse_grid(r.b1_grid), parse_grid(r.b2_grid)};
    const BoundsSearchResult result = search_bounds(sample, grid, em_config, fit_options);
    model = result.model;
    std::size_t admissible = 0;
    for (const auto& c : result.cells) admissible += c.admissible ? 1 : 0;
    search = {{"scale", report::kRatioPercent},
              {"b1_candidates", grid.b1},
              {"b2_candidates", grid.b2},
              {"admissible_pairs", admissible},
              {"selected", {{"b1", result.bounds.b1}, {"b2", result.bounds.b2}}},
              {"criterion", "bic"}};
    // Report the fixed-bounds diagnostics at the selected pair alongside EM.
    const RegimeModel fixed = fit_fixed_bounds(sample, result.bounds, fit_options);
    model.diagnostics.political_ols = fixed.diagnostics.political_ols;
    model.diagnostics.black_swan_ols = fixed.diagnostics.black_swan_ols;
    model.diagnostics.performance_subset_mean = fixed.diagnostics.performance_subset_mean;
    model.diagnostics.performance_subset_sd = fixed.diagnostics.performance_subset_sd;
  } else {
    const RegimeBounds bounds{r.b1.value_or(70.0), r.b2.value_or(148.0)};
    model = fit_fixed_bounds(sample, bounds, fit_options);
    if (r.em) {
      RegimeModel fitted = fit_em(sample, model, em_config);
      fitted.diagnostics.political_ols = model.diagnostics.political_ols;
      fitted.diagnostics.black_swan_ols = model.diagnostics.black_swan_ols;
      fitted.diagnostics.performance_subset_mean = model.diagnostics.performance_subset_mean;
      fitted.diagnostics.performance_subset_sd = model.diagnostics.performance_subset_sd;
      if (!fitted.diagnostics.black_swan_hill) {
        fitted.diagnostics.black_swan_hill = model.diagnostics.black_swan_hill;
      }
      model = std::move(fitted);
    }
  }

  std::vector<double> pct = extract_overruns(p, dim).values;
  for (auto& v : pct) v *= 100.0;

  Json j = report::envelope("regime-fit", timestamp(), seed);
  j["dimension"] = to_string(dim);
  j["mode"] = model.diagnostics.method;
  j["summary"] = report::portfolio_summary(p);
  if (pct.size() >= 2) {
    try {
      j["moments"] = report::moments_json(moments(pct), report::kPercent);
    } catch (const Error&) {
      j["moments"] = nullptr;
    }
  } else {
    j["moments"] = nullptr;
  }
  j["regimes"] = report::regime_table(model);
  j["model"] = report::model_json(model);
  j["fit"] = report::fit_json(model);
  j["search"] = search;
  j["impact_table"] = report::impact_json(impact_table(p, model.bounds));
  j["conditional_forecast"] = report::conditional_forecast_json(regime_conditional_forecast(model));
  j["black_swan_probability"] = black_swan_probability(model);
  j["classifications_file"] = r.classes_path.empty() ? Json(nullptr) : Json(r.classes_path);
  outputs.add(o.out, dump(j));
  if (!r.classes_path.empty()) {
    const auto mode = model.diagnostics.method == "em" ? ClassifyMode::Posterior
                                                       : ClassifyMode::FixedBounds;
    outputs.add(r.classes_path, classifications_csv(classify(model, p, mode)));
  }
}

void cmd_forecast(double overrun_pct, double progress, std::optional<double> alpha,
                  const std::string& model_path, const std::string& out, Outputs& outputs) {
  std::string source = "default";
  double a = 2.1;
  if (alpha) {
    a = *alpha;
    source = "flag";
  } else if (!model_path.empty()) {
    const RegimeModel m = report::model_from_json(load_json(model_path));
    if (!m.present(Regime::BlackSwan)) {
      throw Error(ErrorKind::Validation, "model has no black swan regime to take alpha from");
    }
    a = m.black_swan.alpha;
    source = "model";
  }
  const ForecastResult f = make_forecast(overrun_pct, progress, a);
  Json j = report::envelope("forecast", timestamp());
  j["forecast"] = report::forecast_json(f, source);
  outputs.add(out, dump(j));
}

void cmd_simulate(const std::string& model_path, std::size_t projects, std::size_t trials,
                  std::optional<std::uint64_t> seed_flag, const std::string& out,
                  const std::string& trials_csv, Outputs& outputs) {
  const report::SeedInfo seed = resolve_seed(seed_flag);
  const RegimeModel model = report::model_from_json(load_json(model_path));
  const PortfolioSimulationResult r = portfolio_monte_carlo(model, projects, trials, seed.seed);
  Json j = report::envelope("simulation", timestamp(), seed);
  j["simulation"] = report::simulation_json(r);
  j["model"] = report::model_json(model);
  j["trials_file"] = trials_csv.empty() ? Json(nullptr) : Json(trials_csv);
  outputs.add(out, dump(j));
  if (!trials_csv.empty()) outputs.add(trials_csv, csv_column("total_overrun", r.total_overrun));
}

struct GenerateOpts {
  std::optional<std::uint64_t> seed;
  std::string out = "-";
  std::string meta;
  // mixture
  std::string model_path;
  std::size_t n = 10000;
  bool as_portfolio = false;
  // pareto
  double x0 = 1.0, alpha = 2.1;
  // gibrat
  GibratParams gibrat;
  // simon
  double p_new = 0.1;
  // monkey
  std::size_t alphabet = 26;
  double space_prob = 0.2;
  // double pareto
  double rate_up = 2.1, rate_down = 2.1;
};

void cmd_generate(const std::string& mechanism, const GenerateOpts& g, Outputs& outputs) {
  const report::SeedInfo seed = resolve_seed(g.seed);
  Json params;
  std::string csv;
  std::string value_scale = "dimensionless";
  std::size_t count = 0;
  if (mechanism == "mixture") {
    if (g.model_path.empty()) throw UsageError("generate mixture needs --model");
    const RegimeModel model = report::model_from_json(load_json(g.model_path));
    const auto xs = sample_mixture({model, g.n, seed.seed});
    params = {{"model", report::model_json(model)}, {"n", g.n}};
    value_scale = std::string(report::kRatioPercent);
    count = xs.size();
    if (g.as_portfolio) {
      Portfolio p;
      p.provenance_note = "synthetic";
      for (std::size_t i = 0; i < xs.size(); ++i) {
        ProjectRecord r;
        r.id = "s" + std::to_string(i + 1);
        r.forecast_cost = 100.0;
        r.actual_cost = xs[i];
        p.records.push_back(std::move(r));
      }
      std::ostringstream s;
      write_portfolio_csv(s, p);
      csv = s.str();
    } else {
      csv = csv_column("ratio_percent", xs);
    }
  } else if (mechanism == "pareto") {
    const auto xs = sample_pareto({g.x0, g.alpha, 1.0}, g.n, seed.seed);
    params = {{"x0", g.x0}, {"alpha", g.alpha}, {"n", g.n}};
    count = xs.size();
    csv = csv_column("value", xs);
  } else if (mechanism == "gibrat") {
    const auto xs = gibrat_process(g.gibrat, seed.seed);
    params = {{"units", g.gibrat.n_units},       {"steps", g.gibrat.n_steps},
              {"shock_sd", g.gibrat.shock_sd},   {"drift_ratio", g.gibrat.drift_ratio},
              {"barrier", g.gibrat.lower_barrier}, {"initial_size", g.gibrat.initial_size}};
    count = xs.size();
    csv = csv_column("size", xs);
  } else if (mechanism == "simon") {
    const auto sizes = simon_preferential(g.n, g.p_new, seed.seed);
    params = {{"items", g.n}, {"p_new", g.p_new}};
    count = sizes.size();
    csv = "class_size\n";
    for (auto s : sizes) csv += std::to_string(s) + "\n";
  } else if (mechanism == "monkey") {
    const auto freq = monkey_typing(g.alphabet, g.space_prob, g.n, seed.seed);
    params = {{"alphabet", g.alphabet}, {"space_prob", g.space_prob}, {"words", g.n}};
    count = freq.size();
    csv = "frequency\n";
    for (auto f : freq) csv += std::to_string(f) + "\n";
  } else if (mechanism == "double-pareto") {
    const auto xs = double_pareto(g.rate_up, g.rate_down, g.n, seed.seed);
    params = {{"rate_up", g.rate_up}, {"rate_down", g.rate_down}, {"n", g.n}};
    count = xs.size();
    csv = csv_column("value", xs);
  } else {
    throw UsageError("unknown mechanism '" + mechanism + "'");
  }
  Json meta = report::envelope("generate", timestamp(), seed);
  meta["generator"] = {{"mechanism", mechanism},
                       {"scale", value_scale},
                       {"parameters", params},
                       {"count", count},
                       {"format", g.as_portfolio && mechanism == "mixture" ? "portfolio-csv" : "single-column-csv"},
                       {"samples_file", g.out}};
  outputs.add(g.out, std::move(csv));
  const std::string meta_path = !g.meta.empty() ? g.meta : (g.out == "-" ? "" : g.out + ".meta.json");
  if (!meta_path.empty()) outputs.add(meta_path, dump(meta));
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heavy-tail risk analysis for project portfolios", "tailrisk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(report::kToolVersion));

  CommonOpts common;
  const auto add_common = [&](CLI::App* sub, bool with_input) {
    if (with_input) sub->add_option("csv", common.input, "Portfolio CSV")->required();
    sub->add_option("-o,--out", common.out, "Output path ('-' for stdout)");
  };

  auto* ingest = app.add_subcommand("ingest", "Validate a portfolio CSV and echo canonical JSON");
  add_common(ingest, true);

  double z = 1.96;
  auto* stats = app.add_subcommand("stats", "Moments and the normal reference interval");
  add_common(stats, true);
  stats->add_option("--dimension", common.dimension, "cost or schedule");
  stats->add_option("--z", z, "Coverage multiplier")->check(CLI::PositiveNumber);

  bool loglog = false;
  std::string svg_path;
  std::optional<double> mark_b1, mark_b2;
  auto* survival = app.add_subcommand("survival", "Empirical survival curve as CSV (and SVG)");
  add_common(survival, true);
  survival->add_option("--dimension", common.dimension, "cost or schedule");
  survival->add_flag("--loglog", loglog, "Emit log10x,log10p instead of x,p");
  survival->add_option("--svg", svg_path, "Also write a log-log SVG scatter");
  survival->add_option("--b1", mark_b1, "Lower regime bound marker (ratio percent)");
  survival->add_option("--b2", mark_b2, "Upper regime bound marker (ratio percent)");

  double tail_lo = 0.0, tail_hi = std::numeric_limits<double>::infinity();
  std::size_t tail_bins = 0;
  auto* fit_tail = app.add_subcommand("fit-tail", "Log-log OLS tail fit over (lo, hi]");
  add_common(fit_tail, true);
  fit_tail->add_option("--dimension", common.dimension, "cost or schedule");
  fit_tail->add_option("--lo", tail_lo, "Region lower edge (ratio percent, exclusive)")->required();
  fit_tail->add_option("--hi", tail_hi, "Region upper edge (ratio percent, inclusive)");
  fit_tail->add_option("--log-bins", tail_bins, "Thin to one point per log-spaced bin");

  RegimeOpts regime_opts;
  auto* fit_regimes = app.add_subcommand("fit-regimes", "Three-regime fit and classification");
  add_common(fit_regimes, true);
  fit_regimes->add_option("--dimension", common.dimension, "cost or schedule");
  fit_regimes->add_option("--b1", regime_opts.b1, "Political/performance bound (ratio percent)");
  fit_regimes->add_option("--b2", regime_opts.b2, "Performance/Black Swan bound (ratio percent)");
  fit_regimes->add_flag("--search", regime_opts.search, "Select bounds by BIC over a grid");
  fit_regimes->add_option("--b1-grid", regime_opts.b1_grid, "lo:hi:count");
  fit_regimes->add_option("--b2-grid", regime_opts.b2_grid, "lo:hi:count");
  fit_regimes->add_flag("--em", regime_opts.em, "Refine the fixed-bounds fit with EM");
  fit_regimes->add_option("--tol", regime_opts.tol, "EM log-likelihood tolerance");
  fit_regimes->add_option("--max-iter", regime_opts.max_iter, "EM iteration cap");
  fit_regimes->add_option("--epsilon", regime_opts.epsilon, "Political lower cutoff");
  fit_regimes->add_option("--classes", regime_opts.classes_path, "Per-project classification CSV");
  fit_regimes->add_option("--seed", regime_opts.seed, "Seed recorded in the report");

  double overrun_pct = 0.0, progress = 0.0;
  std::optional<double> alpha;
  std::string forecast_model;
  auto* forecast = app.add_subcommand("forecast", "Linear EVM and power-law final overrun");
  add_common(forecast, false);
  forecast->add_option("--overrun-pct", overrun_pct, "Current overrun in percent")->required();
  forecast->add_option("--progress", progress, "Progress fraction in (0, 1]")->required();
  forecast->add_option("--alpha", alpha, "Power-law exponent (default: model alpha or 2.1)");
  forecast->add_option("--model", forecast_model, "Regime model JSON providing alpha");

  std::string sim_model, trials_csv;
  std::size_t projects = 0, trials = 0;
  std::optional<std::uint64_t> sim_seed;
  auto* simulate = app.add_subcommand("simulate", "Portfolio Monte Carlo from a regime model");
  add_common(simulate, false);
  simulate->add_option("--model", sim_model, "Regime model JSON")->required();
  simulate->add_option("--projects", projects, "Projects per portfolio")->required();
  simulate->add_option("--trials", trials, "Number of simulated portfolios")->required();
  simulate->add_option("--seed", sim_seed, "Seed (default: $TAILRISK_SEED)");
  simulate->add_option("--trials-csv", trials_csv, "Per-trial total overrun CSV");

  GenerateOpts gen;
  std::string mechanism;
  auto* generate = app.add_subcommand("generate", "Synthetic samples from a generator");
  generate->add_option("mechanism", mechanism,
                       "mixture | pareto | gibrat | simon | monkey | double-pareto")
      ->required()
      ->check(CLI::IsMember({"mixture", "pareto", "gibrat", "simon", "monkey", "double-pareto"}));
  generate->add_option("--seed", gen.seed, "Seed (default: $TAILRISK_SEED)");
  generate->add_option("-o,--out", gen.out, "Sample CSV path ('-' for stdout)");
  generate->add_option("--meta", gen.meta, "Metadata JSON path (default: <out>.meta.json)");
  generate->add_option("--n", gen.n, "Draws, items or words");
  generate->add_option("--model", gen.model_path, "Regime model JSON (mixture)");
  generate->add_flag("--as-portfolio", gen.as_portfolio, "Write mixture draws as a portfolio CSV");
  generate->add_option("--x0", gen.x0, "Pareto cutoff");
  generate->add_option("--alpha", gen.alpha, "Pareto exponent");
  generate->add_option("--units", gen.gibrat.n_units, "Gibrat units");
  generate->add_option("--steps", gen.gibrat.n_steps, "Gibrat steps");
  generate->add_option("--shock-sd", gen.gibrat.shock_sd, "Gibrat log-shock sd");
  generate->add_option("--drift-ratio", gen.gibrat.drift_ratio, "Gibrat drift ratio");
  generate->add_option("--barrier", gen.gibrat.lower_barrier, "Gibrat lower barrier");
  generate->add_option("--p-new", gen.p_new, "Simon new-class probability");
  generate->add_option("--alphabet", gen.alphabet, "Monkey alphabet size");
  generate->add_option("--space-prob", gen.space_prob, "Monkey space probability");
  generate->add_option("--rate-up", gen.rate_up, "Double Pareto upper rate");
  generate->add_option("--rate-down", gen.rate_down, "Double Pareto lower rate");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << report::kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "tailrisk: " << e.what() << "\n";
    if (const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << "run 'tailrisk " << sub->get_name() << " --help' for usage\n";
    }
    return kUsage;
  }

  Outputs outputs(out);
  try {
    if (*ingest) {
      cmd_ingest(common, outputs);
    } else if (*stats) {
      cmd_stats(common, z, outputs);
    } else if (*survival) {
      cmd_survival(common, loglog, svg_path, mark_b1, mark_b2, outputs);
    } else if (*fit_tail) {
      cmd_fit_tail(common, tail_lo, tail_hi, tail_bins, outputs);
    } else if (*fit_regimes) {
      cmd_fit_regimes(common, regime_opts, outputs);
    } else if (*forecast) {
      cmd_forecast(overrun_pct, progress, alpha, forecast_model, common.out, outputs);
    } else if (*simulate) {
      cmd_simulate(sim_model, projects, trials, sim_seed, common.out, trials_csv, outputs);
    } else if (*generate) {
      cmd_generate(mechanism, gen, outputs);
    }
    outputs.commit();
  } catch (const UsageError& e) {
    err << "tailrisk: usage: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "tailrisk: " << to_string(e.kind()) << " error: " << e.what() << "\n";
    return e.is_numeric() ? kNumericError : kDataError;
  } catch (const std::exception& e) {
    err << "tailrisk: error: " << e.what() << "\n";
    return kDataError;
  }
  return kOk;
}

}  // namespace tailrisk::cli
