#pragma once

#include <stdexcept>
#include <string>

namespace tailrisk {

enum class ErrorKind {
  InvalidInput,
  Domain,
  Format,
  Row,
  Validation,
  EmptySample,
  Degenerate,
  InsufficientData,
  InvalidBounds,
  ComponentCollapse,
  BelowValidity,
  NoAdmissible,
  Numeric,
};

const char* to_string(ErrorKind kind);

// Every library failure surfaces as an Error carrying a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  // Numeric failures are reported separately from bad data by the CLI.
  bool is_numeric() const {
    return kind_ == ErrorKind::Numeric || kind_ == ErrorKind::ComponentCollapse;
  }

 private:
  ErrorKind kind_;
};

// Row-level parse/validation failure; row numbers are 1-based data rows.
class RowError : public Error {
 public:
  RowError(std::size_t row, const std::string& message)
      : Error(ErrorKind::Row, "row " + std::to_string(row) + ": " + message), row_(row) {}

  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

}  // namespace tailrisk
