#include "tailrisk/portfolio.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "tailrisk/error.hpp"
#include "tailrisk/format.hpp"

namespace tailrisk {
namespace {

constexpr std::array<std::pair<ProjectType, std::string_view>, 7> kProjectTags{{
    {ProjectType::Unknown, "unknown"},
    {ProjectType::ItIntegration, "it_integration"},
    {ProjectType::StandardSoftware, "standard_software"},
    {ProjectType::BespokeSoftware, "bespoke_software"},
    {ProjectType::ItInfrastructure, "it_infrastructure"},
    {ProjectType::ItArchitecture, "it_architecture"},
    {ProjectType::Other, "other"},
}};

constexpr std::array<std::pair<SystemType, std::string_view>, 7> kSystemTags{{
    {SystemType::Unknown, "unknown"},
    {SystemType::Erp, "erp"},
    {SystemType::Mis, "mis"},
    {SystemType::Office, "office"},
    {SystemType::Disposition, "disposition"},
    {SystemType::Transaction, "transaction"},
    {SystemType::Other, "other"},
}};

constexpr std::array<std::string_view, 8> kColumns{
    "id",            "forecast_cost", "actual_cost", "forecast_months",
    "actual_months", "project_type",  "system_type", "decision_year"};

// Splits one CSV line; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t row) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  if (quoted) throw RowError(row, "unterminated quoted field");
  cells.push_back(std::move(cell));
  return cells;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_number(std::string_view text, std::size_t row, std::string_view column) {
  text = trim(text);
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw RowError(row, "column " + std::string(column) + ": cannot parse number '" +
                            std::string(text) + "'");
  }
  return value;
}

std::optional<double> parse_optional_number(std::string_view text, std::size_t row,
                                            std::string_view column) {
  if (trim(text).empty()) return std::nullopt;
  return parse_number(text, row, column);
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string_view to_string(ProjectType t) {
  for (const auto& [value, tag] : kProjectTags) {
    if (value == t) return tag;
  }
  return "unknown";
}

std::string_view to_string(SystemType t) {
  for (const auto& [value, tag] : kSystemTags) {
    if (value == t) return tag;
  }
  return "unknown";
}

std::optional<ProjectType> parse_project_type(std::string_view tag) {
  tag = trim(tag);
  if (tag.empty()) return ProjectType::Unknown;
  for (const auto& [value, name] : kProjectTags) {
    if (name == tag) return value;
  }
  return std::nullopt;
}

std::optional<SystemType> parse_system_type(std::string_view tag) {
  tag = trim(tag);
  if (tag.empty()) return SystemType::Unknown;
  for (const auto& [value, name] : kSystemTags) {
    if (name == tag) return value;
  }
  return std::nullopt;
}

std::string_view to_string(Dimension d) { return d == Dimension::Cost ? "cost" : "schedule"; }

double compute_overrun(double forecast, double actual) {
  if (!(forecast > 0.0) || !std::isfinite(forecast)) {
    throw Error(ErrorKind::InvalidInput, "forecast must be strictly positive");
  }
  if (!(actual >= 0.0) || !std::isfinite(actual)) {
    throw Error(ErrorKind::InvalidInput, "actual must be non-negative");
  }
  return (actual - forecast) / forecast;
}

double to_ratio_percent(double overrun) {
  if (!(overrun >= -1.0)) {
    throw Error(ErrorKind::InvalidInput, "overrun fraction must be >= -1");
  }
  return (1.0 + overrun) * 100.0;
}

double from_ratio_percent(double ratio_percent) {
  if (!(ratio_percent >= 0.0)) {
    throw Error(ErrorKind::InvalidInput, "ratio percent must be >= 0");
  }
  return ratio_percent / 100.0 - 1.0;
}

Portfolio parse_portfolio_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::Format, "empty input: missing header");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_csv_line(line, 0);
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    if (i >= header.size()) {
      throw Error(ErrorKind::Format, "missing column '" + std::string(kColumns[i]) + "'");
    }
    if (trim(header[i]) != kColumns[i]) {
      throw Error(ErrorKind::Format, "unexpected column '" + std::string(trim(header[i])) +
                                         "', expected '" + std::string(kColumns[i]) + "'");
    }
  }
  if (header.size() > kColumns.size()) {
    throw Error(ErrorKind::Format,
                "unknown column '" + std::string(trim(header[kColumns.size()])) + "'");
  }

  Portfolio portfolio;
  std::unordered_set<std::string> seen;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split_csv_line(line, row);
    if (cells.size() != kColumns.size()) {
      throw RowError(row, "expected " + std::to_string(kColumns.size()) + " fields, got " +
                              std::to_string(cells.size()));
    }
    ProjectRecord rec;
    rec.id = std::string(trim(cells[0]));
    if (rec.id.empty()) throw RowError(row, "empty id");
    rec.forecast_cost = parse_number(cells[1], row, "forecast_cost");
    if (!(rec.forecast_cost > 0.0)) throw RowError(row, "forecast_cost must be > 0");
    rec.actual_cost = parse_number(cells[2], row, "actual_cost");
    if (rec.actual_cost < 0.0) throw RowError(row, "actual_cost must be >= 0");
    rec.forecast_months = parse_optional_number(cells[3], row, "forecast_months");
    if (rec.forecast_months && !(*rec.forecast_months > 0.0)) {
      throw RowError(row, "forecast_months must be > 0");
    }
    rec.actual_months = parse_optional_number(cells[4], row, "actual_months");
    if (rec.actual_months && *rec.actual_months < 0.0) {
      throw RowError(row, "actual_months must be >= 0");
    }
    const auto ptype = parse_project_type(cells[5]);
    if (!ptype) throw RowError(row, "unknown project_type '" + cells[5] + "'");
    rec.project_type = *ptype;
    const auto stype = parse_system_type(cells[6]);
    if (!stype) throw RowError(row, "unknown system_type '" + cells[6] + "'");
    rec.system_type = *stype;
    if (const auto year = parse_optional_number(cells[7], row, "decision_year")) {
      if (*year != std::floor(*year)) throw RowError(row, "decision_year must be an integer");
      rec.decision_year = static_cast<int>(*year);
    }
    if (!seen.insert(rec.id).second) {
      throw Error(ErrorKind::Validation, "duplicate id '" + rec.id + "' at row " +
                                             std::to_string(row));
    }
    portfolio.records.push_back(std::move(rec));
  }
  return portfolio;
}

Portfolio parse_portfolio_csv_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_portfolio_csv(in);
}

void write_portfolio_csv(std::ostream& out, const Portfolio& portfolio) {
  out << kPortfolioHeader << '\n';
  for (const auto& r : portfolio.records) {
    out << quote_if_needed(r.id) << ',' << format_double(r.forecast_cost) << ','
        << format_double(r.actual_cost) << ','
        << (r.forecast_months ? format_double(*r.forecast_months) : "") << ','
        << (r.actual_months ? format_double(*r.actual_months) : "") << ','
        << to_string(r.project_type) << ',' << to_string(r.system_type) << ','
        << (r.decision_year ? std::to_string(*r.decision_year) : "") << '\n';
  }
}

OverrunSample extract_overruns(const Portfolio& portfolio, Dimension dimension) {
  OverrunSample sample;
  sample.dimension = dimension;
  for (const auto& r : portfolio.records) {
    if (dimension == Dimension::Cost) {
      sample.values.push_back(compute_overrun(r.forecast_cost, r.actual_cost));
    } else if (r.forecast_months && r.actual_months) {
      sample.values.push_back(compute_overrun(*r.forecast_months, *r.actual_months));
    }
  }
  if (sample.values.empty()) {
    throw Error(ErrorKind::EmptySample,
                "no eligible records for dimension '" + std::string(to_string(dimension)) + "'");
  }
  return sample;
}

std::vector<double> cost_ratio_percent(const Portfolio& portfolio) {
  std::vector<double> out;
  out.reserve(portfolio.records.size());
  for (const auto& r : portfolio.records) {
    out.push_back(to_ratio_percent(compute_overrun(r.forecast_cost, r.actual_cost)));
  }
  return out;
}

}  // namespace tailrisk
