#pragma once

// The fractional KdV-Burgers model
//   R[u] = D^p_{x2} u + u D^q_{x1} u + D^r_{x1} u,  terminal 0 on both axes,
// its scaling symmetry, and the invariants of that symmetry.

#include <string>
#include <vector>

#include "fracsym/discrepancy.hpp"
#include "fracsym/fkdvb_params.hpp"
#include "fracsym/frlnum.hpp"
#include "fracsym/power_sum.hpp"

namespace fracsym {

BivariatePowerSum residual(const BivariatePowerSum& u, const FkdvbParams& params);
GridFunction2D<double> residual(const GridFunction2D<double>& u, const FkdvbParams& params,
                                SchemeKind scheme = SchemeKind::ProductTrapezoid);

/// v = alpha x1 d/dx1 + beta x2 d/dx2 + gamma u d/du.
struct ScalingGenerator {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// Null space of the on-shell determining coefficients, normalized to alpha = p.
ScalingGenerator solve_scaling(const FkdvbParams& params);

/// u_lambda(x1, x2) = lambda^gamma u(lambda^-alpha x1, lambda^-beta x2).
BivariatePowerSum group_action(const BivariatePowerSum& u, double lambda,
                               const ScalingGenerator& gen);
/// Grid form: the transformed function sampled on the image grid
/// (axes scaled by lambda^alpha and lambda^beta), so no interpolation occurs.
GridFunction2D<double> group_action(const GridFunction2D<double>& u, double lambda,
                                    const ScalingGenerator& gen);

struct EquivarianceReport {
  double exponent = 0.0;  // s with R[u_lambda] = lambda^s R[u] o S_lambda
  Discrepancy deviation;
};

/// The exponent s, checked to be common to the three terms of R.
double equivariance_exponent(const ScalingGenerator& gen, const FkdvbParams& params);

/// R[u_lambda](x) against lambda^s R[u](lambda^-alpha x1, lambda^-beta x2) at the points
/// (default: the 11 x 11 window grid on [0.1, 1]^2).
EquivarianceReport equivariance_check(const BivariatePowerSum& u, const FkdvbParams& params,
                                      double lambda, std::vector<Point2D> points = {});

/// z = x1 x2^z_exp2, w = u x2^w_exp2.
struct Invariants {
  double z_exp2 = 0.0;
  double w_exp2 = 0.0;

  double z(double x1, double x2) const;
  double w(double x1, double x2, double u) const;
  std::string z_text() const;
  std::string w_text() const;
};

Invariants invariants(const FkdvbParams& params);

/// key: value report of generator, invariants and equivariance exponent,
/// numbers rounded to 12 significant digits.
std::string symmetry_report(const FkdvbParams& params);

}  // namespace fracsym
