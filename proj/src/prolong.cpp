#include "fracsym/prolong.hpp"

#include <cmath>
#include <sstream>

#include "fracsym/errors.hpp"
#include "fracsym/special.hpp"

namespace fracsym {

namespace {

void check_axis(int m) {
  if (m != 1 && m != 2) throw DomainError("axis must be 1 or 2");
}

void check_order(double p) {
  if (!std::isfinite(p) || p < 0.0) throw DomainError("prolongation order must be finite and >= 0");
}

// Exact operations on power sums.
struct ExactOps {
  using V = BivariatePowerSum;
  V d(const V& v, int axis, double order) const { return partial_rl_deriv(v, axis, order); }
  V diff(const V& v, int axis) const { return partial_diff(v, axis, 1); }
  V mul(const V& a, const V& b) const { return a * b; }
  V add(const V& a, const V& b) const { return a + b; }
  V sub(const V& a, const V& b) const { return a - b; }
};

using Grid2 = GridFunction2D<double>;

void check_same_grid(const Grid2& a, const Grid2& b) {
  if (!(a.axis1 == b.axis1) || !(a.axis2 == b.axis2)) {
    throw SizeError("grid functions live on different grids");
  }
}

template <typename Op>
Grid2 pointwise(const Grid2& a, const Grid2& b, Op op) {
  check_same_grid(a, b);
  Grid2 out;
  out.axis1 = a.axis1;
  out.axis2 = a.axis2;
  out.samples = a.samples.binaryExpr(b.samples, op);
  out.reduced1 = detail::merge_flags(a.reduced1, b.reduced1);
  out.reduced2 = detail::merge_flags(a.reduced2, b.reduced2);
  return out;
}

// Finite-difference and product-trapezoid operations on grid samples.
struct NumericOps {
  using V = Grid2;
  SchemeKind scheme;
  V d(const V& v, int axis, double order) const {
    return partial_rl_deriv_2d(v, axis, FracOrder(order), scheme);
  }
  V diff(const V& v, int axis) const { return partial_diff_2d(v, axis, 1); }
  V mul(const V& a, const V& b) const { return pointwise(a, b, std::multiplies<double>()); }
  V add(const V& a, const V& b) const { return pointwise(a, b, std::plus<double>()); }
  V sub(const V& a, const V& b) const { return pointwise(a, b, std::minus<double>()); }
};

template <typename Ops, typename V = typename Ops::V>
V six_term(const Ops& ops, int m, double p, const V& xi_m, const V& xi_o, const V& phi, const V& u) {
  const int o = 3 - m;
  const V u_o = ops.diff(u, o);
  V t = ops.d(phi, m, p);
  t = ops.add(t, ops.d(ops.mul(u, ops.diff(xi_m, m)), m, p));
  t = ops.sub(t, ops.d(ops.mul(xi_m, u), m, p + 1.0));
  t = ops.add(t, ops.mul(xi_m, ops.d(u, m, p + 1.0)));
  t = ops.add(t, ops.mul(xi_o, ops.d(u_o, m, p)));
  t = ops.sub(t, ops.d(ops.mul(xi_o, u_o), m, p));
  return t;
}

template <typename Ops, typename V = typename Ops::V>
V mixed_terms(const Ops& ops, const MixedOrderSpec& s, const V& xi_m, const V& xi_o, const V& phi,
              const V& u) {
  const int m = s.m, o = s.other();
  const double p = s.p.value(), q = s.q.value();
  auto dpq = [&](const V& v) { return ops.d(ops.d(v, o, q), m, p); };
  const V& xi1 = m == 1 ? xi_m : xi_o;
  const V& xi2 = m == 1 ? xi_o : xi_m;
  const V char_part =
      ops.sub(phi, ops.add(ops.mul(xi1, ops.diff(u, 1)), ops.mul(xi2, ops.diff(u, 2))));
  const V dpq_u = dpq(u);
  const V dq_u = ops.d(u, o, q);
  V t = dpq(char_part);
  t = ops.add(t, ops.add(ops.mul(xi1, ops.diff(dpq_u, 1)), ops.mul(xi2, ops.diff(dpq_u, 2))));
  t = ops.add(t, dpq(ops.diff(ops.mul(xi_o, u), o)));
  t = ops.add(t, ops.d(ops.diff(ops.mul(xi_m, dq_u), m), m, p));
  t = ops.sub(t, ops.d(ops.d(ops.mul(xi_o, u), o, q + 1.0), m, p));
  t = ops.sub(t, ops.d(ops.mul(xi_m, dq_u), m, p + 1.0));
  return t;
}

BivariatePowerSum power(const BivariatePowerSum& u, int k) {
  BivariatePowerSum out = BivariatePowerSum::constant(1.0);
  for (int i = 0; i < k; ++i) out = out * u;
  return out;
}

// D^s along axis m for any real s: derivative for s >= 0, integral otherwise.
BivariatePowerSum rl_any(const BivariatePowerSum& v, int m, double s) {
  return s >= 0.0 ? partial_rl_deriv(v, m, s) : partial_rl_integral(v, m, -s);
}

}  // namespace

// --- fields ------------------------------------------------------------------

ScalingField::ScalingField(double c1_, double c2_, double cu_) : c1(c1_), c2(c2_), cu(cu_) {
  if (!std::isfinite(c1) || !std::isfinite(c2) || !std::isfinite(cu)) {
    throw DomainError("scaling field coefficients must be finite");
  }
}

PointField PointField::from(const ScalingField& f) {
  PointField pf;
  pf.xi1 = f.c1 * BivariatePowerSum::coordinate(1);
  pf.xi2 = f.c2 * BivariatePowerSum::coordinate(2);
  pf.phi1 = BivariatePowerSum::constant(f.cu);
  return pf;
}

SampledField sample_field(const PointField& f, const GridFunction2D<double>& u) {
  SampledField s;
  s.xi1 = sample(f.xi1, u.axis1, u.axis2);
  s.xi2 = sample(f.xi2, u.axis1, u.axis2);
  s.phi = sample(f.phi0, u.axis1, u.axis2);
  s.phi.samples += sample(f.phi1, u.axis1, u.axis2).samples.cwiseProduct(u.samples);
  s.phi.reduced1 = u.reduced1;
  s.phi.reduced2 = u.reduced2;
  return s;
}

SampledField sample_field(const ScalingField& f, const GridFunction2D<double>& u) {
  return sample_field(PointField::from(f), u);
}

MixedOrderSpec::MixedOrderSpec(int m_, double p_, double q_) : m(m_), p(p_), q(q_) {
  check_axis(m_);
  if (p_ == 0.0 && q_ == 0.0) throw DomainError("mixed order spec needs p or q nonzero");
}

// --- phi_p -------------------------------------------------------------------

BivariatePowerSum phi_p(int m, const PointField& field, const BivariatePowerSum& u, double p) {
  check_axis(m);
  check_order(p);
  const BivariatePowerSum phi = field.phi0 + field.phi1 * u;
  return six_term(ExactOps{}, m, p, field.xi(m), field.xi(3 - m), phi, u);
}

BivariatePowerSum phi_p(int m, const ScalingField& field, const BivariatePowerSum& u, double p) {
  return phi_p(m, PointField::from(field), u, p);
}

GridFunction2D<double> phi_p(int m, const SampledField& field, const GridFunction2D<double>& u,
                             double p, SchemeKind scheme) {
  check_axis(m);
  check_order(p);
  check_same_grid(field.xi1, u);
  check_same_grid(field.xi2, u);
  check_same_grid(field.phi, u);
  return six_term(NumericOps{scheme}, m, p, field.xi(m), field.xi(3 - m), field.phi, u);
}

// --- series ------------------------------------------------------------------

BivariatePowerSum phi_p_series(int m, const ScalingField& field, const BivariatePowerSum& u,
                               double p, int N) {
  check_axis(m);
  check_order(p);
  if (N < 1) throw DomainError("phi_p_series: truncation N must be >= 1");
  const int o = 3 - m;
  const BivariatePowerSum xi_m = field.c(m) * BivariatePowerSum::coordinate(m);
  const BivariatePowerSum xi_o = field.c(o) * BivariatePowerSum::coordinate(o);

  // phi as a polynomial in an independent symbol U: phi = sum_j a_j(x) U^j.
  const std::vector<BivariatePowerSum> a{BivariatePowerSum(), BivariatePowerSum::constant(field.cu)};

  // (op applied to d^k phi / dU^k) with U = u afterwards.
  auto u_partial = [&](int k, auto&& op) {
    BivariatePowerSum out;
    for (int j = k; j < static_cast<int>(a.size()); ++j) {
      if (a[static_cast<std::size_t>(j)].is_zero()) continue;
      double falling = 1.0;
      for (int i = 0; i < k; ++i) falling *= static_cast<double>(j - i);
      out += falling * op(a[static_cast<std::size_t>(j)]) * power(u, j - k);
    }
    return out;
  };
  auto x_diff = [&](int n) {
    return [n, m](const BivariatePowerSum& v) { return partial_diff(v, m, n); };
  };
  auto x_frac = [&](const BivariatePowerSum& v) { return partial_rl_deriv(v, m, p); };
  auto ident = [](const BivariatePowerSum& v) { return v; };

  // Leading terms.
  BivariatePowerSum out = u_partial(0, x_frac);
  const BivariatePowerSum dpu = partial_rl_deriv(u, m, p);
  out += dpu * (u_partial(1, ident) - p * partial_diff(xi_m, m, 1));
  out -= u * u_partial(1, x_frac);

  // Triple sum: every term carries d^k phi / dU^k with k >= 2.
  for (int n = 2; n <= N; ++n) {
    for (int l = 2; l <= n; ++l) {
      for (int k = 2; k <= l; ++k) {
        const BivariatePowerSum phi_part = u_partial(k, x_diff(n - l));
        if (phi_part.is_zero()) continue;
        double kfact = 1.0;
        for (int i = 2; i <= k; ++i) kfact *= i;
        const double base = binomial(p, n) * binomial(static_cast<double>(n), l) *
                            rgamma(static_cast<double>(n) + 1.0 - p) / kfact;
        if (base == 0.0) continue;
        const BivariatePowerSum xm =
            m == 1 ? BivariatePowerSum::monomial(1.0, n - p, 0.0)
                   : BivariatePowerSum::monomial(1.0, 0.0, n - p);
        for (int r = 0; r < k; ++r) {
          const double c = base * binomial(static_cast<double>(k), r);
          out += c * xm * power(-1.0 * u, r) * partial_diff(power(u, k - r), m, l) * phi_part;
        }
      }
    }
  }

  // n >= 1 sums.
  for (int n = 1; n <= N; ++n) {
    const BivariatePowerSum coef_a = binomial(p, n) * u_partial(1, x_diff(n)) -
                                     binomial(p, n + 1) * partial_diff(xi_m, m, n + 1);
    const BivariatePowerSum coef_b = binomial(p, n) * partial_diff(xi_o, m, n);
    if (coef_a.is_zero() && coef_b.is_zero()) continue;
    const BivariatePowerSum lower = rl_any(u, m, p - static_cast<double>(n));
    if (!coef_a.is_zero()) out += coef_a * lower;
    if (!coef_b.is_zero()) out -= coef_b * partial_diff(lower, o, 1);
  }
  return out;
}

// --- mixed -------------------------------------------------------------------

BivariatePowerSum phi_pq_mixed(const MixedOrderSpec& spec, const PointField& field,
                               const BivariatePowerSum& u) {
  const BivariatePowerSum phi = field.phi0 + field.phi1 * u;
  return mixed_terms(ExactOps{}, spec, field.xi(spec.m), field.xi(spec.other()), phi, u);
}

BivariatePowerSum phi_pq_mixed(const MixedOrderSpec& spec, const ScalingField& field,
                               const BivariatePowerSum& u) {
  return phi_pq_mixed(spec, PointField::from(field), u);
}

GridFunction2D<double> phi_pq_mixed(const MixedOrderSpec& spec, const SampledField& field,
                                    const GridFunction2D<double>& u, SchemeKind scheme) {
  check_same_grid(field.xi1, u);
  check_same_grid(field.xi2, u);
  check_same_grid(field.phi, u);
  return mixed_terms(NumericOps{scheme}, spec, field.xi(spec.m), field.xi(spec.other()), field.phi,
                     u);
}

// --- oracle ------------------------------------------------------------------

Eigen::VectorXd group_deformation_oracle(const ScalingField& field, const BivariatePowerSum& u,
                                         const MixedOrderSpec& spec,
                                         const std::vector<Point2D>& points, double eps_step,
                                         bool richardson) {
  if (!(eps_step > 0.0) || !std::isfinite(eps_step)) {
    throw DomainError("group_deformation_oracle: eps_step must be positive");
  }
  const int m = spec.m, o = spec.other();
  auto transformed = [&](double eps) {
    const BivariatePowerSum ut =
        std::exp(eps * field.cu) * rescale(u, std::exp(-eps * field.c1), std::exp(-eps * field.c2));
    const BivariatePowerSum d = partial_rl_deriv(partial_rl_deriv(ut, o, spec.q.value()), m,
                                                 spec.p.value());
    Eigen::VectorXd v(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
      v(static_cast<Eigen::Index>(i)) = d(std::exp(eps * field.c1) * points[i].first,
                                          std::exp(eps * field.c2) * points[i].second);
    }
    return v;
  };
  auto central = [&](double h) -> Eigen::VectorXd {
    return (transformed(h) - transformed(-h)) / (2.0 * h);
  };
  const Eigen::VectorXd dh = central(eps_step);
  if (!richardson) return dh;
  return (4.0 * central(0.5 * eps_step) - dh) / 3.0;
}

// --- determining expression --------------------------------------------------

bool DeterminingCoefficients::vanishes_onshell(double tol) const {
  return std::abs(onshell_uq) <= tol && std::abs(onshell_r) <= tol;
}

double scaling_multiplier(const ScalingField& field, int m, double s) {
  check_axis(m);
  check_order(s);
  // Transcendental exponents keep the probe's derivative off every Gamma pole.
  for (double e : {2.718281828459045, 3.141592653589793, 1.4142135623730951}) {
    const BivariatePowerSum probe = BivariatePowerSum::monomial(1.0, e, e);
    const BivariatePowerSum ds = partial_rl_deriv(probe, m, s);
    if (ds.is_zero()) continue;
    const BivariatePowerSum ph = phi_p(m, field, probe, s);
    if (ph.is_zero()) return 0.0;
    const auto& t = ph.terms();
    const auto& ref = ds.terms().front();
    if (t.size() != 1 || !exponents_equal(t[0].exp1, ref.exp1) ||
        !exponents_equal(t[0].exp2, ref.exp2)) {
      throw NumericError("scaling_multiplier: coefficient is not proportional to D^s u");
    }
    return t[0].coeff / ref.coeff;
  }
  throw NumericError("scaling_multiplier: no usable probe");
}

DeterminingCoefficients determining_coefficients(const ScalingField& field,
                                                 const FkdvbParams& params) {
  DeterminingCoefficients c;
  c.dp = scaling_multiplier(field, 2, params.p.value());
  c.uq = scaling_multiplier(field, 1, params.q.value()) + field.cu;
  c.r = scaling_multiplier(field, 1, params.r.value());
  c.onshell_uq = c.uq - c.dp;
  c.onshell_r = c.r - c.dp;
  return c;
}

BivariatePowerSum determining_eval(const ScalingField& field, const BivariatePowerSum& u,
                                   const FkdvbParams& params, Shell shell) {
  const double p = params.p.value(), q = params.q.value(), r = params.r.value();
  const BivariatePowerSum uq = partial_rl_deriv(u, 1, q);
  BivariatePowerSum e = phi_p(2, field, u, p);
  e += u * phi_p(1, field, u, q);
  e += (field.cu * u) * uq;
  e += phi_p(1, field, u, r);
  if (shell == Shell::Off) return e;
  // phi^p_2 = k D^p_2 u is the only place u^(0,p) enters.
  const double k = scaling_multiplier(field, 2, p);
  const BivariatePowerSum residual = partial_rl_deriv(u, 2, p) + u * uq + partial_rl_deriv(u, 1, r);
  return e - k * residual;
}

GridFunction2D<double> terminal_term(int m, const SampledField& field,
                                     const GridFunction2D<double>& u, double s) {
  check_axis(m);
  check_order(s);
  check_same_grid(field.xi(m), u);
  const auto& g = u.axis(m);
  if (g.terminal != 0.0) throw DomainError("terminal_term: axis grid must start at the terminal 0");
  GridFunction2D<double> out = u;
  out.samples.setZero();
  const double rg = rgamma(-s);
  const auto& xi = field.xi(m).samples;
  for (Eigen::Index j = 0; j < u.samples.cols(); ++j) {
    for (Eigen::Index i = 0; i < u.samples.rows(); ++i) {
      const Eigen::Index k = m == 1 ? i : j;
      if (k == 0 || rg == 0.0) continue;
      const Eigen::Index i0 = m == 1 ? 0 : i, j0 = m == 1 ? j : 0;
      out.samples(i, j) = xi(i0, j0) * u.samples(i0, j0) * std::pow(g.node(k), -s - 1.0) * rg;
    }
  }
  auto& flags = m == 1 ? out.reduced1 : out.reduced2;
  if (flags.empty()) flags.assign(static_cast<std::size_t>(g.count), false);
  flags[0] = true;
  return out;
}

GridFunction2D<double> determining_eval(const SampledField& field, const GridFunction2D<double>& u,
                                        const FkdvbParams& params, SchemeKind scheme) {
  const double p = params.p.value(), q = params.q.value(), r = params.r.value();
  const NumericOps ops{scheme};
  GridFunction2D<double> e = ops.add(phi_p(2, field, u, p, scheme), terminal_term(2, field, u, p));
  e = ops.add(e, ops.mul(u, ops.add(phi_p(1, field, u, q, scheme), terminal_term(1, field, u, q))));
  e = ops.add(e, ops.mul(field.phi, ops.d(u, 1, q)));
  e = ops.add(e, ops.add(phi_p(1, field, u, r, scheme), terminal_term(1, field, u, r)));
  return e;
}

}  // namespace fracsym
