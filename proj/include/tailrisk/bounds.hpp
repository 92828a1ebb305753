#pragma once

namespace tailrisk {

// Regime boundaries on the ratio-percent scale. Political: (eps, b1],
// performance: (b1, b2], Black Swan: (b2, inf).
struct RegimeBounds {
  double b1 = 70.0;   // -30% overrun
  double b2 = 148.0;  // +48% overrun

  friend bool operator==(const RegimeBounds&, const RegimeBounds&) = default;
};

// Throws Error(InvalidBounds) unless 0 < b1 < b2 (both finite).
void validate(const RegimeBounds& bounds);

}  // namespace tailrisk
