#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace miqs {

using Index = std::int32_t;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IntVector = Eigen::VectorXi;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed interval [lo, hi]; lo > hi denotes an (invalid) empty interval.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool empty() const { return lo > hi; }
  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  double width() const { return hi - lo; }
  double clamp(double v) const { return std::min(hi, std::max(lo, v)); }
  bool contains(double v, double tol = 0.0) const {
    return v >= lo - tol && v <= hi + tol;
  }
};

enum class Sense { LessEqual, Equal, GreaterEqual };

inline std::string to_string(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::Equal: return "=";
    default: return ">=";
  }
}

/// Violation amount of "lhs (sense) rhs"; zero when satisfied.
inline double sense_violation(Sense s, double lhs, double rhs) {
  switch (s) {
    case Sense::LessEqual: return std::max(0.0, lhs - rhs);
    case Sense::Equal: return std::abs(lhs - rhs);
    default: return std::max(0.0, rhs - lhs);
  }
}

}  // namespace miqs
