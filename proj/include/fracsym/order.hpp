#pragma once

#include <cmath>
#include <sstream>

#include "fracsym/errors.hpp"

namespace fracsym {

/// Fractional order p >= 0 together with [p], the integer part.
class FracOrder {
 public:
  FracOrder() = default;
  explicit FracOrder(double p) : value_(p) {
    if (!std::isfinite(p) || p < 0.0) {
      std::ostringstream os;
      os << "fractional order must be finite and >= 0, got " << p;
      throw DomainError(os.str());
    }
    floor_ = static_cast<int>(std::floor(p));
  }

  double value() const { return value_; }
  int floor() const { return floor_; }
  bool is_integer() const { return value_ == static_cast<double>(floor_); }
  /// [p] + 1, the number of classical derivatives in the RL construction.
  int derivative_count() const { return floor_ + 1; }

  friend FracOrder operator+(FracOrder a, double k) { return FracOrder(a.value_ + k); }

 private:
  double value_ = 0.0;
  int floor_ = 0;
};

/// True if p is an integer (the classical, local case).
inline bool is_integer_order(double p) { return p == std::floor(p); }

}  // namespace fracsym
