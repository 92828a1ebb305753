#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tailrisk {

enum class ProjectType {
  Unknown,
  ItIntegration,
  StandardSoftware,
  BespokeSoftware,
  ItInfrastructure,
  ItArchitecture,
  Other,
};

enum class SystemType { Unknown, Erp, Mis, Office, Disposition, Transaction, Other };

std::string_view to_string(ProjectType t);
std::string_view to_string(SystemType t);
std::optional<ProjectType> parse_project_type(std::string_view tag);
std::optional<SystemType> parse_system_type(std::string_view tag);

struct ProjectRecord {
  std::string id;
  double forecast_cost = 0.0;
  double actual_cost = 0.0;
  std::optional<double> forecast_months;
  std::optional<double> actual_months;
  ProjectType project_type = ProjectType::Unknown;
  SystemType system_type = SystemType::Unknown;
  std::optional<int> decision_year;

  friend bool operator==(const ProjectRecord&, const ProjectRecord&) = default;
};

struct Portfolio {
  std::vector<ProjectRecord> records;
  std::string currency_label = "USD";
  std::string provenance_note;

  friend bool operator==(const Portfolio&, const Portfolio&) = default;
};

enum class Dimension { Cost, Schedule };

std::string_view to_string(Dimension d);

// Overrun fractions o = (actual - forecast) / forecast, each >= -1.
struct OverrunSample {
  std::vector<double> values;
  Dimension dimension = Dimension::Cost;
};

inline constexpr std::string_view kPortfolioHeader =
    "id,forecast_cost,actual_cost,forecast_months,actual_months,project_type,system_type,"
    "decision_year";

double compute_overrun(double forecast, double actual);

// Ratio percent is (actual / forecast) * 100; on budget maps to 100.
double to_ratio_percent(double overrun);
double from_ratio_percent(double ratio_percent);

// Throws Error(Format) for header problems, RowError for bad rows and
// Error(Validation) for duplicate ids.
Portfolio parse_portfolio_csv(std::istream& in);
Portfolio parse_portfolio_csv_text(std::string_view text);
void write_portfolio_csv(std::ostream& out, const Portfolio& portfolio);

OverrunSample extract_overruns(const Portfolio& portfolio, Dimension dimension);

// Cost ratios on the ratio-percent scale, in record order.
std::vector<double> cost_ratio_percent(const Portfolio& portfolio);

}  // namespace tailrisk
