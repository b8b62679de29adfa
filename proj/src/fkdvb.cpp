#include "fracsym/fkdvb.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fracsym/errors.hpp"
#include "fracsym/prolong.hpp"

namespace fracsym {

namespace {

std::string short_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

BivariatePowerSum residual(const BivariatePowerSum& u, const FkdvbParams& params) {
  return partial_rl_deriv(u, 2, params.p.value()) + u * partial_rl_deriv(u, 1, params.q.value()) +
         partial_rl_deriv(u, 1, params.r.value());
}

GridFunction2D<double> residual(const GridFunction2D<double>& u, const FkdvbParams& params,
                                SchemeKind scheme) {
  auto dp = partial_rl_deriv_2d(u, 2, params.p, scheme);
  const auto dq = partial_rl_deriv_2d(u, 1, params.q, scheme);
  const auto dr = partial_rl_deriv_2d(u, 1, params.r, scheme);
  dp.samples += u.samples.cwiseProduct(dq.samples) + dr.samples;
  // dq and dr carry the x1 flags of u plus their own; dp already carries the x2 flags.
  dp.reduced1 = detail::merge_flags(dq.reduced1, dr.reduced1);
  return dp;
}

ScalingGenerator solve_scaling(const FkdvbParams& params) {
  // The on-shell coefficients are linear in (c1, c2, cu); read the two rows
  // off the unit fields.
  Eigen::Vector3d row_uq, row_r;
  const ScalingField basis[3] = {ScalingField(1, 0, 0), ScalingField(0, 1, 0), ScalingField(0, 0, 1)};
  for (int i = 0; i < 3; ++i) {
    const auto c = determining_coefficients(basis[i], params);
    row_uq(i) = c.onshell_uq;
    row_r(i) = c.onshell_r;
  }
  const Eigen::Vector3d n = row_uq.cross(row_r);
  if (!(n.norm() > 1e-12 * row_uq.norm() * row_r.norm())) {
    throw NumericError("solve_scaling: determining system has a null space of dimension > 1");
  }
  if (n(0) == 0.0) throw NumericError("solve_scaling: generator has no x1 component");
  const double s = params.p.value() / n(0);
  ScalingGenerator g{params.p.value(), n(1) * s, n(2) * s};
  if (params.branch == FkdvbParams::Branch::QEqualsR) {
    if (std::abs(g.gamma) > 1e-12 * std::abs(g.beta)) {
      throw NumericError("solve_scaling: q = r but the u component does not vanish");
    }
    g.gamma = 0.0;
  }
  return g;
}

BivariatePowerSum group_action(const BivariatePowerSum& u, double lambda,
                               const ScalingGenerator& gen) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("group_action: lambda must be > 0");
  return std::pow(lambda, gen.gamma) *
         rescale(u, std::pow(lambda, -gen.alpha), std::pow(lambda, -gen.beta));
}

GridFunction2D<double> group_action(const GridFunction2D<double>& u, double lambda,
                                    const ScalingGenerator& gen) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("group_action: lambda must be > 0");
  const double s1 = std::pow(lambda, gen.alpha), s2 = std::pow(lambda, gen.beta);
  GridFunction2D<double> out(Grid1D(u.axis1.terminal * s1, u.axis1.step * s1, u.axis1.count),
                             Grid1D(u.axis2.terminal * s2, u.axis2.step * s2, u.axis2.count),
                             std::pow(lambda, gen.gamma) * u.samples);
  out.reduced1 = u.reduced1;
  out.reduced2 = u.reduced2;
  return out;
}

double equivariance_exponent(const ScalingGenerator& gen, const FkdvbParams& params) {
  // Per-term exponents of lambda in R[u_lambda] after pulling back the argument.
  const double t1 = gen.gamma - gen.beta * params.p.value();
  const double t2 = 2.0 * gen.gamma - gen.alpha * params.q.value();
  const double t3 = gen.gamma - gen.alpha * params.r.value();
  const double scale = std::max({1.0, std::abs(t1), std::abs(t2), std::abs(t3)});
  if (std::abs(t1 - t2) > 1e-12 * scale || std::abs(t1 - t3) > 1e-12 * scale) {
    std::ostringstream os;
    os << "generator is not a symmetry: term exponents " << t1 << ", " << t2 << ", " << t3;
    throw DomainError(os.str());
  }
  return t1;
}

EquivarianceReport equivariance_check(const BivariatePowerSum& u, const FkdvbParams& params,
                                      double lambda, std::vector<Point2D> points) {
  if (points.empty()) points = window_points(Grid1D::span(0.0, 1.0, 11), Grid1D::span(0.0, 1.0, 11));
  const ScalingGenerator gen = solve_scaling(params);
  EquivarianceReport rep;
  rep.exponent = equivariance_exponent(gen, params);
  const BivariatePowerSum lhs = residual(group_action(u, lambda, gen), params);
  const BivariatePowerSum rhs = residual(u, params);
  const double f = std::pow(lambda, rep.exponent);
  const double s1 = std::pow(lambda, -gen.alpha), s2 = std::pow(lambda, -gen.beta);
  Eigen::VectorXd l(static_cast<Eigen::Index>(points.size())), r(l.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [x1, x2] = points[i];
    l(static_cast<Eigen::Index>(i)) = lhs(x1, x2);
    r(static_cast<Eigen::Index>(i)) = f * rhs(s1 * x1, s2 * x2);
  }
  rep.deviation = compare(l, r);
  return rep;
}

double Invariants::z(double x1, double x2) const { return x1 * std::pow(x2, z_exp2); }
double Invariants::w(double x1, double x2, double u) const {
  (void)x1;
  return u * std::pow(x2, w_exp2);
}
std::string Invariants::z_text() const { return "x1*x2^" + short_num(z_exp2); }
std::string Invariants::w_text() const {
  return w_exp2 == 0.0 ? std::string("u") : "u*x2^" + short_num(w_exp2);
}

Invariants invariants(const FkdvbParams& params) {
  // Characteristics of the generator: dx1/(alpha x1) = dx2/(beta x2) = du/(gamma u).
  const ScalingGenerator g = solve_scaling(params);
  Invariants inv;
  inv.z_exp2 = -g.alpha / g.beta;
  inv.w_exp2 = -g.gamma / g.beta;
  if (inv.w_exp2 == 0.0) inv.w_exp2 = 0.0;  // drop a negative zero
  return inv;
}

std::string symmetry_report(const FkdvbParams& params) {
  const ScalingGenerator g = solve_scaling(params);
  const Invariants inv = invariants(params);
  std::ostringstream os;
  os << "params: p=" << short_num(params.p.value()) << " q=" << short_num(params.q.value())
     << " r=" << short_num(params.r.value()) << "\n";
  os << "branch: " << to_string(params.branch) << "\n";
  os << "generator: (" << short_num(g.alpha) << ", " << short_num(g.beta) << ", "
     << short_num(g.gamma) << ")\n";
  os << "vector_field: " << short_num(g.alpha) << "*x1*d/dx1 + " << short_num(g.beta)
     << "*x2*d/dx2 + " << short_num(g.gamma) << "*u*d/du\n";
  os << "invariant_z: " << inv.z_text() << "\n";
  os << "invariant_w: " << inv.w_text() << "\n";
  os << "equivariance_exponent: " << short_num(equivariance_exponent(g, params)) << "\n";
  return os.str();
}

}  // namespace fracsym
