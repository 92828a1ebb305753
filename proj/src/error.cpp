#include "tailrisk/error.hpp"

#include <cmath>

#include "tailrisk/bounds.hpp"

namespace tailrisk {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Format: return "format";
    case ErrorKind::Row: return "row";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::EmptySample: return "empty-sample";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::InvalidBounds: return "invalid-bounds";
    case ErrorKind::ComponentCollapse: return "component-collapse";
    case ErrorKind::BelowValidity: return "below-validity-domain";
    case ErrorKind::NoAdmissible: return "no-admissible-bounds";
    case ErrorKind::Numeric: return "numeric";
  }
  return "unknown";
}

void validate(const RegimeBounds& bounds) {
  if (!std::isfinite(bounds.b1) || !std::isfinite(bounds.b2) || !(bounds.b1 > 0.0) ||
      !(bounds.b1 < bounds.b2)) {
    throw Error(ErrorKind::InvalidBounds, "regime bounds must satisfy 0 < b1 < b2, got b1=" +
                                              std::to_string(bounds.b1) +
                                              " b2=" + std::to_string(bounds.b2));
  }
}

}  // namespace tailrisk
