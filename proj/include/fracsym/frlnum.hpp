#pragma once

// Riemann-Liouville operators on uniformly sampled data. The lower terminal
// of every operator is the first node of the grid it acts along.

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "fracsym/errors.hpp"
#include "fracsym/grid.hpp"
#include "fracsym/order.hpp"
#include "fracsym/parallel.hpp"
#include "fracsym/special.hpp"

namespace fracsym {

enum class SchemeKind { ProductTrapezoid, GrunwaldLetnikov };

namespace detail {

/// Fornberg weights for the k-th derivative at x0 from nodes x (unit spacing
/// is fine; caller rescales by h^-k).
inline Eigen::VectorXd fornberg_weights(const Eigen::VectorXd& x, double x0, int k) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, k + 1);
  double c1 = 1.0;
  double c4 = x(0) - x0;
  c(0, 0) = 1.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    const int mn = static_cast<int>(std::min<Eigen::Index>(i, k));
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x(i) - x0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double c3 = x(i) - x(j);
      c2 *= c3;
      if (j == i - 1) {
        for (int s = mn; s >= 1; --s) c(i, s) = c1 * (s * c(i - 1, s - 1) - c5 * c(i - 1, s)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int s = mn; s >= 1; --s) c(j, s) = (c4 * c(j, s) - s * c(j, s - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c.col(k);
}

/// Second-order finite-difference stencils for the k-th derivative on n nodes.
/// Interior nodes use the central stencil of half-width (k+1)/2; the nodes
/// within that distance of either end use one-sided k+2 point stencils.
struct DiffStencils {
  int order = 1;
  int half_width = 1;
  Eigen::VectorXd central;                 // offsets -r..r
  std::vector<Eigen::VectorXd> left;       // node i < r, points 0..k+1
  std::vector<Eigen::VectorXd> right;      // node n-1-i, points n-k-2..n-1

  explicit DiffStencils(int k) : order(k), half_width((k + 1) / 2) {
    const int r = half_width;
    Eigen::VectorXd xc(2 * r + 1);
    for (int i = 0; i < 2 * r + 1; ++i) xc(i) = i - r;
    central = fornberg_weights(xc, 0.0, k);
    Eigen::VectorXd xs(k + 2);
    for (int i = 0; i < k + 2; ++i) xs(i) = i;
    for (int i = 0; i < r; ++i) {
      left.push_back(fornberg_weights(xs, static_cast<double>(i), k));
      right.push_back(fornberg_weights(xs, static_cast<double>(k + 1 - i), k));
    }
  }

  Eigen::Index min_nodes() const { return order + 2; }
};

template <typename Scalar>
VectorX<Scalar> apply_stencils(const VectorX<Scalar>& g, Scalar h, const DiffStencils& st) {
  const Eigen::Index n = g.size();
  const int k = st.order;
  const int r = st.half_width;
  VectorX<Scalar> out(n);
  const Scalar scale = Scalar(1) / std::pow(h, Scalar(k));
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar s(0);
    if (i < r) {
      const auto& w = st.left[static_cast<std::size_t>(i)];
      for (int j = 0; j < k + 2; ++j) s += Scalar(w(j)) * g(j);
    } else if (i >= n - r) {
      const auto& w = st.right[static_cast<std::size_t>(n - 1 - i)];
      const Eigen::Index base = n - k - 2;
      for (int j = 0; j < k + 2; ++j) s += Scalar(w(j)) * g(base + j);
    } else {
      for (int j = 0; j < 2 * r + 1; ++j) s += Scalar(st.central(j)) * g(i - r + j);
    }
    out(i) = s * scale;
  }
  return out;
}

inline std::vector<bool> stencil_flags(Eigen::Index n, const DiffStencils& st) {
  std::vector<bool> flags(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < st.half_width; ++i) {
    flags[static_cast<std::size_t>(i)] = true;
    flags[static_cast<std::size_t>(n - 1 - i)] = true;
  }
  return flags;
}

/// Piecewise-linear product integration of the kernel (t_n - s)^(mu-1).
template <typename Scalar>
VectorX<Scalar> pt_integral_line(const VectorX<Scalar>& f, Scalar h, double mu) {
  const Eigen::Index n = f.size();
  VectorX<Scalar> pw(n + 1);  // m^(mu+1)
  for (Eigen::Index m = 0; m <= n; ++m) pw(m) = std::pow(Scalar(m), Scalar(mu + 1.0));
  VectorX<Scalar> b(n);
  b(0) = Scalar(0);
  for (Eigen::Index m = 1; m < n; ++m) b(m) = pw(m + 1) - Scalar(2) * pw(m) + pw(m - 1);
  const Scalar scale = std::pow(h, Scalar(mu)) * Scalar(rgamma(mu + 2.0));
  VectorX<Scalar> out(n);
  out(0) = Scalar(0);
  for (Eigen::Index i = 1; i < n; ++i) {
    const Scalar ni(i);
    const Scalar a0 = pw(i - 1) - (ni - Scalar(mu) - Scalar(1)) * pw(i) / ni;
    Scalar s = a0 * f(0);
    for (Eigen::Index j = 1; j < i; ++j) s += b(i - j) * f(j);
    s += f(i);
    out(i) = scale * s;
  }
  return out;
}

template <typename Scalar>
VectorX<Scalar> gl_deriv_line(const VectorX<Scalar>& f, Scalar h, double p) {
  const Eigen::Index n = f.size();
  VectorX<Scalar> w(n);
  w(0) = Scalar(1);
  for (Eigen::Index k = 1; k < n; ++k) w(k) = w(k - 1) * (Scalar(1) - Scalar(p + 1.0) / Scalar(k));
  const Scalar scale = std::pow(h, Scalar(-p));
  VectorX<Scalar> out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar s(0);
    for (Eigen::Index k = 0; k <= i; ++k) s += w(k) * f(i - k);
    out(i) = scale * s;
  }
  return out;
}

/// D^p along one line; `flags` receives the reduced-accuracy nodes.
template <typename Scalar>
VectorX<Scalar> deriv_line(const VectorX<Scalar>& f, Scalar h, const FracOrder& p,
                           SchemeKind scheme, std::vector<bool>* flags) {
  const Eigen::Index n = f.size();
  if (p.value() == 0.0) {
    if (flags) flags->assign(static_cast<std::size_t>(n), false);
    return f;
  }
  if (scheme == SchemeKind::GrunwaldLetnikov) {
    if (flags) flags->assign(static_cast<std::size_t>(n), false);
    return gl_deriv_line(f, h, p.value());
  }
  const int k = p.is_integer() ? p.floor() : p.derivative_count();
  const DiffStencils st(k);
  if (n < st.min_nodes()) {
    throw SizeError("rl_deriv_num: order " + std::to_string(p.value()) + " needs at least " +
                    std::to_string(st.min_nodes()) + " nodes");
  }
  if (flags) *flags = stencil_flags(n, st);
  if (p.is_integer()) return apply_stencils(f, h, st);
  return apply_stencils(pt_integral_line(f, h, static_cast<double>(k) - p.value()), h, st);
}

inline std::vector<bool> merge_flags(const std::vector<bool>& a, const std::vector<bool>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<bool> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] || b[i];
  return out;
}

inline void check_axis(int axis) {
  if (axis != 1 && axis != 2) throw DomainError("axis must be 1 or 2");
}

/// Applies a line operation along `axis`; line_op(line, h, flags*) -> line.
/// Lines are processed independently, so the result does not depend on the
/// worker count.
template <typename Scalar, typename LineOp>
GridFunction2D<Scalar> map_lines(const GridFunction2D<Scalar>& u, int axis, LineOp&& line_op) {
  check_axis(axis);
  const auto& g = u.axis(axis);
  const Eigen::Index lines = axis == 1 ? u.samples.cols() : u.samples.rows();
  MatrixX<Scalar> out(u.samples.rows(), u.samples.cols());
  std::vector<bool> flags;
  // First line computed up front to learn the flag pattern, shared by all lines.
  auto run = [&](Eigen::Index l, std::vector<bool>* fl) {
    VectorX<Scalar> line = axis == 1 ? VectorX<Scalar>(u.samples.col(l))
                                     : VectorX<Scalar>(u.samples.row(l).transpose());
    VectorX<Scalar> res = line_op(line, g.step, fl);
    if (axis == 1) {
      out.col(l) = res;
    } else {
      out.row(l) = res.transpose();
    }
  };
  if (lines > 0) run(0, &flags);
  parallel_for(lines - 1, [&](std::ptrdiff_t l) { run(static_cast<Eigen::Index>(l) + 1, nullptr); });
  GridFunction2D<Scalar> result;
  result.axis1 = u.axis1;
  result.axis2 = u.axis2;
  result.samples = std::move(out);
  if (!result.samples.allFinite()) throw NumericError("non-finite value in grid operator output");
  result.reduced1 = axis == 1 ? merge_flags(u.reduced1, flags) : u.reduced1;
  result.reduced2 = axis == 2 ? merge_flags(u.reduced2, flags) : u.reduced2;
  return result;
}

}  // namespace detail

/// Product-trapezoid approximation of I^p f at every node; node 0 is 0.
template <typename Scalar>
GridFunction1D<Scalar> rl_integral_num(const GridFunction1D<Scalar>& f, const FracOrder& p) {
  if (!(p.value() > 0.0)) throw DomainError("rl_integral_num: order must be > 0");
  GridFunction1D<Scalar> out(f.grid, detail::pt_integral_line(f.samples, f.grid.step, p.value()));
  out.reduced = f.reduced;
  return out;
}

/// D^p f. ProductTrapezoid: ([p]+1)-th finite difference of the order
/// ([p]+1-p) product-trapezoid integral (integer p: finite difference of f),
/// with the one-sided boundary nodes flagged. GrunwaldLetnikov: first-order
/// shifted GL sum. Node 0 is the raw scheme value and never accurate.
template <typename Scalar>
GridFunction1D<Scalar> rl_deriv_num(const GridFunction1D<Scalar>& f, const FracOrder& p,
                                    SchemeKind scheme = SchemeKind::ProductTrapezoid) {
  std::vector<bool> flags;
  VectorX<Scalar> s = detail::deriv_line(f.samples, f.grid.step, p, scheme, &flags);
  if (!s.allFinite()) throw NumericError("rl_deriv_num: non-finite output");
  GridFunction1D<Scalar> out(f.grid, std::move(s));
  out.reduced = detail::merge_flags(f.reduced, flags);
  return out;
}

/// Total fractional derivative: the caller samples tau -> f(tau, g(tau)),
/// after which the operator is the one-variable RL derivative.
template <typename Scalar>
GridFunction1D<Scalar> total_rl_deriv(const GridFunction1D<Scalar>& composed, const FracOrder& p,
                                      SchemeKind scheme = SchemeKind::ProductTrapezoid) {
  return rl_deriv_num(composed, p, scheme);
}

/// D^q (D^p f): p is applied first.
template <typename Scalar>
GridFunction1D<Scalar> sequential_deriv(const GridFunction1D<Scalar>& f, const FracOrder& p,
                                        const FracOrder& q,
                                        SchemeKind scheme = SchemeKind::ProductTrapezoid) {
  return rl_deriv_num(rl_deriv_num(f, p, scheme), q, scheme);
}

template <typename Scalar>
GridFunction2D<Scalar> partial_rl_deriv_2d(const GridFunction2D<Scalar>& u, int axis,
                                           const FracOrder& p,
                                           SchemeKind scheme = SchemeKind::ProductTrapezoid) {
  return detail::map_lines(u, axis, [&](const VectorX<Scalar>& line, Scalar h, std::vector<bool>* fl) {
    return detail::deriv_line(line, h, p, scheme, fl);
  });
}

template <typename Scalar>
GridFunction2D<Scalar> partial_rl_integral_2d(const GridFunction2D<Scalar>& u, int axis,
                                              const FracOrder& p) {
  if (!(p.value() > 0.0)) throw DomainError("partial_rl_integral_2d: order must be > 0");
  return detail::map_lines(u, axis, [&](const VectorX<Scalar>& line, Scalar h, std::vector<bool>* fl) {
    if (fl) fl->clear();
    return detail::pt_integral_line(line, h, p.value());
  });
}

/// Classical k-th partial derivative by second-order finite differences.
template <typename Scalar>
GridFunction2D<Scalar> partial_diff_2d(const GridFunction2D<Scalar>& u, int axis, int k) {
  if (k < 0) throw DomainError("partial_diff_2d: negative order");
  return partial_rl_deriv_2d(u, axis, FracOrder(static_cast<double>(k)));
}

struct MixedOrderResult2D {
  GridFunction2D<double> p_outer;  // D^p_m D^q_{3-m} u
  GridFunction2D<double> q_outer;  // D^q_{3-m} D^p_m u
};

/// Both orderings of a mixed partial derivative, p along axis m and q along
/// the other axis, so callers can measure the discrepancy.
inline MixedOrderResult2D mixed_deriv_both_orders(const GridFunction2D<double>& u, int m,
                                                  const FracOrder& p, const FracOrder& q,
                                                  SchemeKind scheme = SchemeKind::ProductTrapezoid) {
  detail::check_axis(m);
  const int other = 3 - m;
  MixedOrderResult2D r;
  r.p_outer = partial_rl_deriv_2d(partial_rl_deriv_2d(u, other, q, scheme), m, p, scheme);
  r.q_outer = partial_rl_deriv_2d(partial_rl_deriv_2d(u, m, p, scheme), other, q, scheme);
  return r;
}

}  // namespace fracsym
