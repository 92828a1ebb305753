// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes. Tolerances and seeds are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "schema_validator.hpp"
#include "tailrisk/error.hpp"
#include "tailrisk/forecast.hpp"
#include "tailrisk/generators.hpp"
#include "tailrisk/portfolio.hpp"
#include "tailrisk/powerlaw.hpp"
#include "tailrisk/regime.hpp"
#include "tailrisk/tail_stats.hpp"

namespace fs = std::filesystem;
using namespace tailrisk;

namespace {

constexpr std::uint64_t kSeed = 20111;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string source(const std::string& rel) { return std::string(TAILRISK_SOURCE_DIR) + "/" + rel; }

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

// 1. Pareto alpha 2 normalized to P(>=1) = 1/62.6.
Outcome table4() {
  const ParetoModel m{1.0, 2.0, 1.0 / 62.6};
  const double p2 = pareto_survival(m, 2.0), p4 = pareto_survival(m, 4.0);
  const double e2 = std::abs(p2 * 250.0 - 1.0), e4 = std::abs(p4 * 1000.0 - 1.0);
  return {e2 <= 0.005 && e4 <= 0.005,
          fmt("P(>=2)=1/%.1f (rel err %.4f), P(>=4)=1/%.1f (rel err %.4f), tol 0.005", 1 / p2, e2, 1 / p4, e4)};
}

// 2. Power-law and linear forecasts.
Outcome forecast_rule() {
  const double pl = powerlaw_forecast(20.0, 2.1);
  const double lin = linear_evm_forecast(20.0, 0.5);
  return {within(pl, 539.7, 0.1) && lin == 40.0, fmt("20^2.1=%.4f (539.7+-0.1), linear=%.17g (40 exact)", pl, lin)};
}

// 3. Normal reference interval with the lower clamp.
Outcome reference_interval() {
  const auto r = normal_reference_interval(26.74, 82.23, 1.96);
  return {within(r.hi, 187.9, 0.1) && r.lo == -100.0 && r.clamped,
          fmt("(%.4f, %.4f) clamped=%d; want upper 187.9+-0.1, lower -100", r.lo, r.hi, r.clamped ? 1 : 0)};
}

// 4. OLS and Hill on 1e4 Pareto(2.1) draws.
Outcome tail_estimators() {
  Clock clock;
  const ParetoModel m{1.0, 2.1, 1.0};
  const auto xs = sample_pareto(m, 10000, kSeed);
  const auto ols = fit_tail_ols(empirical_survival(xs), {0.0, std::numeric_limits<double>::infinity()});
  const auto hill = fit_tail_hill(xs, 1.0);
  const double t = clock.seconds();
  const bool ok = within(ols.slope, -2.1, 0.05) && ols.r_squared > 0.98 && within(hill.alpha, 2.1, 0.03) && t < 1.0;
  return {ok, fmt("seed %llu: OLS slope %.4f (-2.1+-0.05), R2 %.4f (>0.98), Hill %.4f (2.1+-0.03), %.2fs (<1s)",
                  static_cast<unsigned long long>(kSeed), ols.slope, ols.r_squared, hill.alpha, t)};
}

bool recovers(const RegimeModel& f) {
  return within(f.weights[0], 0.06, 0.03) && within(f.weights[1], 0.77, 0.03) && within(f.weights[2], 0.17, 0.03) &&
         within(f.performance.mu, 103.58, 1.0) && within(f.performance.sigma, 14.79, 1.0) &&
         within(f.black_swan.alpha, 2.1, 0.15);
}

// 5. Regime recovery from n = 5000 draws of the reference model, 10 seeds.
Outcome regime_recovery() {
  Clock clock;
  int fixed_ok = 0, em_ok = 0;
  bool monotone = true;
  std::string worst;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto xs = sample_mixture({reference_regime_model(), 5000, kSeed + k});
    const RegimeModel fixed = fit_fixed_bounds(xs, RegimeBounds{70.0, 148.0});
    const RegimeModel em = fit_em(xs, fixed);
    fixed_ok += recovers(fixed) ? 1 : 0;
    em_ok += recovers(em) ? 1 : 0;
    const auto& trace = em.diagnostics.log_likelihood_trace;
    for (std::size_t i = 1; i < trace.size(); ++i) monotone = monotone && trace[i] >= trace[i - 1] - 1e-10;
    if (!recovers(fixed) || !recovers(em)) {
      worst += fmt(" [seed %llu w=%.3f/%.3f/%.3f mu=%.2f sd=%.2f aR=%.3f]", static_cast<unsigned long long>(kSeed + k),
                   em.weights[0], em.weights[1], em.weights[2], em.performance.mu, em.performance.sigma,
                   em.black_swan.alpha);
    }
  }
  const double t = clock.seconds();
  return {fixed_ok >= 9 && em_ok >= 9 && monotone && t < 30.0,
          fmt("fixed %d/10, EM %d/10 (need >=9), EM monotone=%d, %.2fs (<30s)", fixed_ok, em_ok, monotone ? 1 : 0, t) +
              worst};
}

// 6. Bounds search on the frozen synthetic fixture.
Outcome bounds_search() {
  Clock clock;
  std::ifstream in(source("tests/data/synthetic.csv"));
  const auto xs = cost_ratio_percent(parse_portfolio_csv(in));
  const BoundsGrid grid{linear_grid(50.0, 90.0, 10), linear_grid(128.0, 168.0, 10)};
  const double step1 = grid.b1[1] - grid.b1[0], step2 = grid.b2[1] - grid.b2[0];
  const auto r = search_bounds(xs, grid);
  const double t = clock.seconds();
  const bool ok = std::abs(r.bounds.b1 - 70.0) <= step1 + 1e-9 && std::abs(r.bounds.b2 - 148.0) <= step2 + 1e-9;
  return {ok && t < 300.0, fmt("selected (%.2f, %.2f), truth (70, 148), steps (%.2f, %.2f), n=%zu, %.2fs (<300s)",
                               r.bounds.b1, r.bounds.b2, step1, step2, xs.size(), t)};
}

// 7. Probability of at least one Black Swan in a 6-project portfolio.
Outcome portfolio_mc() {
  Clock clock;
  const auto r = portfolio_monte_carlo(reference_regime_model(), 6, 100000, kSeed);
  const double t = clock.seconds();
  return {within(r.probability_at_least_one_black_swan, 0.673, 0.01) && t < 5.0,
          fmt("P(>=1 black swan)=%.5f (0.673+-0.01; closed form %.5f), %.2fs (<5s)",
              r.probability_at_least_one_black_swan, r.closed_form_probability, t)};
}

// 8. Closed-form moments against Monte Carlo, infinite marker for m >= alpha.
Outcome moment_dichotomy() {
  Clock clock;
  const ParetoModel m{1.0, 2.1, 1.0};
  const double m1 = pareto_moment(m, 1).value(), m2 = pareto_moment(m, 2).value();
  const auto mc1 = pareto_moment_monte_carlo(m, 1, 1000000, kSeed);
  const auto mc2 = pareto_moment_monte_carlo(m, 2, 1000000, kSeed + 1);
  const double r1 = std::abs(mc1.estimate.value() / m1 - 1.0), r2 = std::abs(mc2.estimate.value() / m2 - 1.0);
  bool infinite = pareto_moment(m, 3).is_infinite() && pareto_moment(ParetoModel{1.0, 2.0, 1.0}, 2).is_infinite() &&
                  pareto_moment(ParetoModel{1.0, 0.8, 1.0}, 1).is_infinite();
  const auto mc3 = pareto_moment_monte_carlo(m, 3, 1000000, kSeed);
  infinite = infinite && mc3.estimate.is_infinite() && mc3.n_draws == 0;
  // Direct sample mean of X^2 for reference; its variance is infinite at alpha 2.1.
  const auto xs = sample_pareto(m, 1000000, kSeed + 2);
  const double plain2 = std::accumulate(xs.begin(), xs.end(), 0.0, [](double a, double x) { return a + x * x; }) /
                        static_cast<double>(xs.size());
  const double t = clock.seconds();
  return {r1 <= 0.01 && r2 <= 0.10 && infinite && t < 10.0,
          fmt("m=1 %.4f vs %.4f (rel %.4f, tol 0.01); m=2 %.3f vs %.1f (rel %.4f, tol 0.10, proposal alpha %.3f; "
              "direct mean %.2f); infinite marker=%d; %.2fs (<10s)",
              mc1.estimate.value(), m1, r1, mc2.estimate.value(), m2, r2, mc2.proposal_alpha, plain2,
              infinite ? 1 : 0, t)};
}

// 9. Generator tails.
Outcome generators() {
  constexpr double kGibratFrozen = 2.015, kSimonFrozen = 1.073;
  Clock clock;
  const auto dp = double_pareto(2.1, 2.1, 1000000, kSeed);
  const double dp_hill = fit_tail_hill(dp, 1.0).alpha;
  GibratParams gp;
  gp.n_units = 100000;
  gp.n_steps = 2000;
  gp.shock_sd = 0.1;
  gp.drift_ratio = 2.0;
  const double gibrat = fit_tail_hill(gibrat_process(gp, kSeed), std::exp(1.0)).alpha;
  const auto sizes = simon_preferential(1000000, 0.1, kSeed);
  const std::vector<double> sd(sizes.begin(), sizes.end());
  const double simon = fit_tail_hill(sd, 9.5).alpha;
  const double t = clock.seconds();
  return {within(dp_hill, 2.1, 0.1) && within(gibrat, kGibratFrozen, 0.1) && within(simon, kSimonFrozen, 0.1) &&
              t < 60.0,
          fmt("double_pareto Hill %.4f (2.1+-0.1), Gibrat %.4f (%.3f+-0.1), Simon %.4f (%.3f+-0.1), %.2fs (<60s)",
              dp_hill, gibrat, kGibratFrozen, simon, kSimonFrozen, t)};
}

// 10. CLI determinism and schema validity.
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

Outcome cli_smoke(const std::string& cli) {
  Clock clock;
  const fs::path dir = fs::temp_directory_path() / "tailrisk_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto validator = testing::SchemaValidator::from_file(source("schema/report.schema.json"));
  const std::string fixture = quote(source("tests/data/synthetic.csv"));
  const std::string model = quote(source("data/reference_model.json"));

  struct Case {
    std::string name;
    std::string args;
    std::vector<std::string> files;  // outputs relative to the run directory; first is stdout
    std::vector<bool> json;
  };
  const std::vector<Case> cases{
      {"ingest", "ingest " + fixture, {"stdout"}, {true}},
      {"stats", "stats " + fixture, {"stdout"}, {true}},
      {"survival", "survival " + fixture + " --svg plot.svg --b1 70 --b2 148", {"stdout", "plot.svg"}, {false, false}},
      {"survival-loglog", "survival " + fixture + " --loglog", {"stdout"}, {false}},
      {"fit-tail", "fit-tail " + fixture + " --lo 148", {"stdout"}, {true}},
      {"fit-regimes", "fit-regimes " + fixture + " --b1 70 --b2 148 --classes classes.csv --seed 3",
       {"stdout", "classes.csv"}, {true, false}},
      {"fit-regimes-em", "fit-regimes " + fixture + " --em", {"stdout"}, {true}},
      {"fit-regimes-search", "fit-regimes " + fixture + " --search --b1-grid 60:80:3 --b2-grid 138:158:3",
       {"stdout"}, {true}},
      {"forecast", "forecast --overrun-pct 20 --progress 0.5 --alpha 2.1", {"stdout"}, {true}},
      {"simulate", "simulate --model " + model + " --projects 6 --trials 20000 --seed 7 --trials-csv trials.csv",
       {"stdout", "trials.csv"}, {true, false}},
      {"generate-mixture", "generate mixture --model " + model + " --n 2000 --seed 7 -o g.csv", {"g.csv", "g.csv.meta.json"},
       {false, true}},
      {"generate-pareto", "generate pareto --n 2000 --seed 7 -o g.csv", {"g.csv", "g.csv.meta.json"}, {false, true}},
      {"generate-gibrat", "generate gibrat --units 2000 --steps 200 --seed 7 -o g.csv", {"g.csv", "g.csv.meta.json"},
       {false, true}},
      {"generate-simon", "generate simon --n 20000 --seed 7 -o g.csv", {"g.csv", "g.csv.meta.json"}, {false, true}},
      {"generate-monkey", "generate monkey --n 20000 --seed 7 -o g.csv", {"g.csv", "g.csv.meta.json"}, {false, true}},
      {"generate-double-pareto", "generate double-pareto --n 2000 --seed 7 -o g.csv",
       {"g.csv", "g.csv.meta.json"}, {false, true}},
  };

  std::vector<std::string> problems;
  const auto strip = [](const std::string& text) {
    auto j = nlohmann::json::parse(text);
    j.erase("generated_at");
    return j.dump();
  };
  for (const auto& c : cases) {
    std::vector<std::string> runs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path run_dir = dir / (c.name + "_" + std::to_string(rep));
      fs::create_directories(run_dir);
      const std::string cmd = "cd " + quote(run_dir.string()) + " && env -u SOURCE_DATE_EPOCH -u TAILRISK_SEED " +
                              quote(cli) + " " + c.args + " > stdout 2> stderr";
      const int rc = std::system(cmd.c_str());
      if (rc != 0) {
        problems.push_back(c.name + ": exit " + std::to_string(rc) + " " + slurp(run_dir / "stderr"));
        break;
      }
      for (const auto& f : c.files) runs[rep].push_back(slurp(run_dir / f));
    }
    if (runs[1].size() != c.files.size()) continue;
    for (std::size_t i = 0; i < c.files.size(); ++i) {
      if (runs[0][i].empty()) problems.push_back(c.name + ": empty " + c.files[i]);
      if (c.json[i]) {
        try {
          if (strip(runs[0][i]) != strip(runs[1][i])) problems.push_back(c.name + ": " + c.files[i] + " differs");
          const auto errors = validator.validate(nlohmann::json::parse(runs[0][i]));
          if (!errors.empty()) problems.push_back(c.name + ": schema: " + errors.front());
        } catch (const std::exception& e) {
          problems.push_back(c.name + ": " + e.what());
        }
      } else if (runs[0][i] != runs[1][i]) {
        problems.push_back(c.name + ": " + c.files[i] + " differs");
      }
    }
  }
  const double t = clock.seconds();
  fs::remove_all(dir);
  std::string detail = fmt("%zu invocations x2, %zu problems, %.2fs (<10s)", cases.size(), problems.size(), t);
  for (std::size_t i = 0; i < problems.size() && i < 3; ++i) detail += "; " + problems[i];
  return {problems.empty() && t < 10.0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: tailrisk_acceptance <path-to-tailrisk-cli>\n");
    return 2;
  }
  const std::string cli = fs::absolute(argv[1]).string();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"table4-pareto-odds", table4},
      {"forecast-rule", forecast_rule},
      {"normal-reference-interval", reference_interval},
      {"tail-estimator-recovery", tail_estimators},
      {"regime-recovery", regime_recovery},
      {"boundary-search", bounds_search},
      {"portfolio-monte-carlo", portfolio_mc},
      {"moment-dichotomy", moment_dichotomy},
      {"generator-tails", generators},
      {"cli-determinism-schema", [&] { return cli_smoke(cli); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %2zu %-26s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
