#pragma once

// Data-parallel kernels. Every kernel has a plain serial reference and an
// OpenMP variant. Parallel reductions run over fixed-size blocks combined in
// block order, and Monte Carlo streams are seeded per fixed chunk, so the
// parallel results do not depend on the thread count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tailrisk/regime.hpp"

namespace tailrisk::kernels {

inline constexpr std::size_t kReductionBlock = 4096;
inline constexpr std::size_t kTrialChunk = 512;

// Sufficient statistics of one E-step under the current model.
struct EStepSums {
  RegimeArray resp{};             // sum of responsibilities per regime
  double political_log_x = 0.0;   // sum r_L ln x
  double performance_x = 0.0;     // sum r_M x
  double performance_x2 = 0.0;    // sum r_M x^2
  double black_swan_log_ratio = 0.0;  // sum r_R ln(x / b2)
  double log_likelihood = 0.0;

  EStepSums& operator+=(const EStepSums& o);
};

double log_likelihood_serial(const RegimeModel& model, std::span<const double> sample);
double log_likelihood_parallel(const RegimeModel& model, std::span<const double> sample);

EStepSums e_step_serial(const RegimeModel& model, std::span<const double> sample);
EStepSums e_step_parallel(const RegimeModel& model, std::span<const double> sample);

// Per-trial outcomes of equal-budget portfolios drawn from a regime model.
struct PortfolioTrials {
  std::vector<double> total_overrun;       // mean overrun fraction per trial
  std::vector<std::uint8_t> any_black_swan;  // 1 if some project drew the right regime
};

PortfolioTrials portfolio_trials_serial(const RegimeModel& model, std::size_t n_projects,
                                        std::size_t n_trials, std::uint64_t seed);
PortfolioTrials portfolio_trials_parallel(const RegimeModel& model, std::size_t n_projects,
                                          std::size_t n_trials, std::uint64_t seed);

struct CellOutcome {
  GridCell cell;
  std::optional<RegimeModel> model;
};

std::vector<CellOutcome> evaluate_grid_serial(std::span<const double> ratio_percent,
                                              const BoundsGrid& grid, const EmConfig& config,
                                              const FitOptions& options);
std::vector<CellOutcome> evaluate_grid_parallel(std::span<const double> ratio_percent,
                                                const BoundsGrid& grid, const EmConfig& config,
                                                const FitOptions& options);

}  // namespace tailrisk::kernels
