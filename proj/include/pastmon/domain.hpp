#pragma once

#include <algorithm>
#include <limits>

namespace pastmon {

/// Two-valued lattice used by the Boolean engines.
struct BooleanDomain {
  using value_type = bool;
  static constexpr bool bottom() { return false; }
  static constexpr bool top() { return true; }
  static constexpr bool join(bool a, bool b) { return a || b; }
  static constexpr bool meet(bool a, bool b) { return a && b; }
  static constexpr bool negate(bool a) { return !a; }
  static constexpr bool leq(bool a, bool b) { return !a || b; }
};

/// Extended reals under max/min; robustness values.
struct RobustDomain {
  using value_type = double;
  static constexpr double bottom() { return -std::numeric_limits<double>::infinity(); }
  static constexpr double top() { return std::numeric_limits<double>::infinity(); }
  static double join(double a, double b) { return std::max(a, b); }
  static double meet(double a, double b) { return std::min(a, b); }
  static double negate(double a) { return -a; }
  static bool leq(double a, double b) { return a <= b; }
};

}  // namespace pastmon
