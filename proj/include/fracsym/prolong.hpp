#pragma once

// Prolongation of point vector fields v = xi1 d/dx1 + xi2 d/dx2 + phi d/du
// to fractional jets with terminal 0, and the determining expression of the
// fKdV-Burgers equation.

#include <vector>

#include "fracsym/discrepancy.hpp"
#include "fracsym/fkdvb_params.hpp"
#include "fracsym/frlnum.hpp"
#include "fracsym/power_sum.hpp"

namespace fracsym {

/// xi1 = c1 x1, xi2 = c2 x2, phi = cu u.
struct ScalingField {
  double c1 = 0.0;
  double c2 = 0.0;
  double cu = 0.0;

  ScalingField() = default;
  ScalingField(double c1_, double c2_, double cu_);
  double c(int axis) const { return axis == 1 ? c1 : c2; }
  bool is_zero() const { return c1 == 0.0 && c2 == 0.0 && cu == 0.0; }
};

/// Point field with xi independent of u and phi = phi0(x) + phi1(x) u.
struct PointField {
  BivariatePowerSum xi1;
  BivariatePowerSum xi2;
  BivariatePowerSum phi0;
  BivariatePowerSum phi1;

  static PointField from(const ScalingField& f);
  const BivariatePowerSum& xi(int axis) const { return axis == 1 ? xi1 : xi2; }
};

/// xi1, xi2, phi sampled along a given u-surface.
struct SampledField {
  GridFunction2D<double> xi1;
  GridFunction2D<double> xi2;
  GridFunction2D<double> phi;

  const GridFunction2D<double>& xi(int axis) const { return axis == 1 ? xi1 : xi2; }
};

SampledField sample_field(const PointField& f, const GridFunction2D<double>& u);
SampledField sample_field(const ScalingField& f, const GridFunction2D<double>& u);

/// D^p_{x_m} D^q_{x_{3-m}}: p is the outer order along axis m.
struct MixedOrderSpec {
  int m = 1;
  FracOrder p;
  FracOrder q;

  MixedOrderSpec() = default;
  MixedOrderSpec(int m_, double p_, double q_);
  int other() const { return 3 - m; }
};

// --- single-order coefficient ---------------------------------------------
//
// phi^p_m = D^p phi + D^p(u D_m xi^m) - D^{p+1}(xi^m u) + xi^m D^{p+1} u
//         + xi^o D^p d_o u - D^p(xi^o d_o u),   o = 3 - m, all along x_m.
// For a scaling field the sum collapses to (cu - p c_m) D^p_m u.

BivariatePowerSum phi_p(int m, const PointField& field, const BivariatePowerSum& u, double p);
BivariatePowerSum phi_p(int m, const ScalingField& field, const BivariatePowerSum& u, double p);
GridFunction2D<double> phi_p(int m, const SampledField& field, const GridFunction2D<double>& u,
                             double p, SchemeKind scheme = SchemeKind::ProductTrapezoid);

/// Terminal-0 series form of the coefficient, summed to n = N. Only the
/// scaling family is supported: for it the triple sum and the n >= 1 terms
/// vanish identically and the leading term cancels against -u D^p d_u phi.
BivariatePowerSum phi_p_series(int m, const ScalingField& field, const BivariatePowerSum& u,
                               double p, int N = 8);

// --- mixed-order coefficient ----------------------------------------------
//
// phi^{p,q} = D^{p,q}(phi - xi^i d_i u) + xi^i d_i D^{p,q} u + D^{p,q} D_o(xi^o u)
//           + D^p D_m(xi^m D^q_o u) - D^{p,q+1}(xi^o u) - D^{p+1}(xi^m D^q_o u)

BivariatePowerSum phi_pq_mixed(const MixedOrderSpec& spec, const PointField& field,
                               const BivariatePowerSum& u);
BivariatePowerSum phi_pq_mixed(const MixedOrderSpec& spec, const ScalingField& field,
                               const BivariatePowerSum& u);
GridFunction2D<double> phi_pq_mixed(const MixedOrderSpec& spec, const SampledField& field,
                                    const GridFunction2D<double>& u,
                                    SchemeKind scheme = SchemeKind::ProductTrapezoid);

/// d/deps [D^p_m D^q_o u~](x~) at eps = 0, where u~(x~) = e^(eps cu) u(e^(-eps c) x~) and x~ is
/// the image e^(eps c) x of each point. Central difference with step eps_step,
/// Richardson-extrapolated once against eps_step/2.
Eigen::VectorXd group_deformation_oracle(const ScalingField& field, const BivariatePowerSum& u,
                                         const MixedOrderSpec& spec,
                                         const std::vector<Point2D>& points,
                                         double eps_step = 1e-4, bool richardson = true);

// --- determining expression ------------------------------------------------

/// Coefficients of phi^p_2 + u phi^q_1 + phi u^(q,0) + phi^r_1 in the basis
/// {u^(0,p), u u^(q,0), u^(r,0)}, and on-shell after u^(0,p) -> -u u^(q,0) - u^(r,0).
struct DeterminingCoefficients {
  double dp = 0.0;          // u^(0,p)
  double uq = 0.0;          // u u^(q,0)
  double r = 0.0;           // u^(r,0)
  double onshell_uq = 0.0;
  double onshell_r = 0.0;

  bool vanishes_onshell(double tol = 0.0) const;
};

/// The multiplier k with phi^s_m = k D^s_m u for a scaling field, read off
/// the exact six-term coefficient on probe monomials.
double scaling_multiplier(const ScalingField& field, int m, double s);

DeterminingCoefficients determining_coefficients(const ScalingField& field,
                                                 const FkdvbParams& params);

enum class Shell { Off, On };

/// Exact determining expression for u. Off: the literal sum of prolongation
/// coefficients. On: the u^(0,p) component replaced through the equation.
BivariatePowerSum determining_eval(const ScalingField& field, const BivariatePowerSum& u,
                                   const FkdvbParams& params, Shell shell = Shell::On);

/// First-order change of D^s_{x_m} (terminal 0) when the flow moves the
/// terminal line: xi^m(x_m=0) u(x_m=0) x_m^(-s-1) / Gamma(-s). Zero for
/// integer s and for fields with xi^m = 0 on the terminal line (every
/// scaling field). Node 0 along x_m is set to 0 and flagged.
GridFunction2D<double> terminal_term(int m, const SampledField& field,
                                     const GridFunction2D<double>& u, double s);

/// Numeric off-shell determining expression including the terminal terms.
/// Those terms contain no jet variable, so on-shell substitution leaves them
/// unchanged; a field that moves a terminal line is not a symmetry.
GridFunction2D<double> determining_eval(const SampledField& field, const GridFunction2D<double>& u,
                                        const FkdvbParams& params,
                                        SchemeKind scheme = SchemeKind::ProductTrapezoid);

}  // namespace fracsym
