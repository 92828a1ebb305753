#pragma once

#include <limits>

namespace tailrisk {

// A real number that may instead be the explicit "does not exist" marker used
// for divergent moments and tail means. Never produced by float overflow.
class Extended {
 public:
  static constexpr Extended finite(double v) { return Extended(v, false); }
  static constexpr Extended infinite() { return Extended(0.0, true); }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  // Precondition: is_finite().
  constexpr double value() const { return value_; }

  double value_or_inf() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend constexpr bool operator==(const Extended&, const Extended&) = default;

 private:
  constexpr Extended(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

}  // namespace tailrisk
