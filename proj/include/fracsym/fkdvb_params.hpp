#pragma once

#include <string>

#include "fracsym/order.hpp"

namespace fracsym {

/// Orders of D^p_{x2} u + u D^q_{x1} u + D^r_{x1} u = 0, all with terminal 0.
struct FkdvbParams {
  enum class Branch {
    QLessR,     // non-integer p, q, r with q < r
    QEqualsR,   // non-integer p, q = r
    Classical,  // at least one integer order (only when explicitly allowed)
  };

  FracOrder p;
  FracOrder q;
  FracOrder r;
  Branch branch = Branch::QLessR;

  FkdvbParams() = default;
  /// Requires p, q, r > 0 and q <= r. Integer orders are rejected unless
  /// allow_integer is set, in which case the branch is Classical.
  FkdvbParams(double p_, double q_, double r_, bool allow_integer = false);

  /// Equivariance exponent s = pq - 2pr of the residual under the scaling group.
  double equivariance_exponent() const { return p.value() * q.value() - 2.0 * p.value() * r.value(); }
};

std::string to_string(FkdvbParams::Branch b);

}  // namespace fracsym
