#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "fracsym/errors.hpp"
#include "fracsym/power_sum.hpp"

namespace fracsym {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Nodes t_k = a + k h, k = 0..n-1. The first node is the operators' terminal.
template <typename Scalar>
struct UniformGrid1D {
  Scalar terminal = Scalar(0);
  Scalar step = Scalar(1);
  Eigen::Index count = 2;

  UniformGrid1D() = default;
  UniformGrid1D(Scalar a, Scalar h, Eigen::Index n) : terminal(a), step(h), count(n) {
    if (!(h > Scalar(0)) || !std::isfinite(static_cast<double>(h))) {
      throw DomainError("grid step must be positive and finite");
    }
    if (n < 2) throw SizeError("grid needs at least 2 nodes");
  }

  /// n nodes spanning [a, b].
  static UniformGrid1D span(Scalar a, Scalar b, Eigen::Index n) {
    if (n < 2) throw SizeError("grid needs at least 2 nodes");
    if (!(b > a)) throw DomainError("grid span must satisfy b > a");
    return UniformGrid1D(a, (b - a) / Scalar(n - 1), n);
  }

  Scalar node(Eigen::Index k) const { return terminal + Scalar(k) * step; }
  Scalar length() const { return step * Scalar(count - 1); }
  Scalar end() const { return node(count - 1); }

  VectorX<Scalar> nodes() const {
    VectorX<Scalar> t(count);
    for (Eigen::Index k = 0; k < count; ++k) t(k) = node(k);
    return t;
  }

  friend bool operator==(const UniformGrid1D&, const UniformGrid1D&) = default;
};

/// Samples of a function on a uniform grid. `reduced` marks nodes whose
/// values come from a lower-accuracy boundary stencil (empty = none).
template <typename Scalar>
struct GridFunction1D {
  UniformGrid1D<Scalar> grid;
  VectorX<Scalar> samples;
  std::vector<bool> reduced;

  GridFunction1D() = default;
  GridFunction1D(UniformGrid1D<Scalar> g, VectorX<Scalar> s) : grid(g), samples(std::move(s)) {
    if (samples.size() != grid.count) throw SizeError("sample count does not match grid size");
    if (!samples.allFinite()) throw DomainError("grid function samples must be finite");
  }

  bool is_reduced(Eigen::Index k) const {
    return !reduced.empty() && reduced[static_cast<std::size_t>(k)];
  }
};

/// Samples u(x1_i, x2_j) stored at samples(i, j). Column j is the x1-line at
/// fixed x2_j, so memory order is x2-outer, x1-inner.
template <typename Scalar>
struct GridFunction2D {
  UniformGrid1D<Scalar> axis1;
  UniformGrid1D<Scalar> axis2;
  MatrixX<Scalar> samples;
  std::vector<bool> reduced1;  // per x1 node
  std::vector<bool> reduced2;  // per x2 node

  GridFunction2D() = default;
  GridFunction2D(UniformGrid1D<Scalar> g1, UniformGrid1D<Scalar> g2, MatrixX<Scalar> s)
      : axis1(g1), axis2(g2), samples(std::move(s)) {
    if (samples.rows() != axis1.count || samples.cols() != axis2.count) {
      throw SizeError("sample matrix does not match grid sizes");
    }
    if (!samples.allFinite()) throw DomainError("grid function samples must be finite");
  }

  const UniformGrid1D<Scalar>& axis(int a) const { return a == 1 ? axis1 : axis2; }
  bool is_reduced(Eigen::Index i, Eigen::Index j) const {
    return (!reduced1.empty() && reduced1[static_cast<std::size_t>(i)]) ||
           (!reduced2.empty() && reduced2[static_cast<std::size_t>(j)]);
  }
};

using Grid1D = UniformGrid1D<double>;
using Grid1Dd = UniformGrid1D<double>;
using GridFunction1Dd = GridFunction1D<double>;
using GridFunction2Dd = GridFunction2D<double>;

template <typename Scalar, typename Fn>
GridFunction1D<Scalar> sample_fn(Fn&& f, const UniformGrid1D<Scalar>& grid) {
  VectorX<Scalar> s(grid.count);
  for (Eigen::Index k = 0; k < grid.count; ++k) s(k) = f(grid.node(k));
  return GridFunction1D<Scalar>(grid, std::move(s));
}

template <typename Scalar, typename Fn>
GridFunction2D<Scalar> sample_fn(Fn&& f, const UniformGrid1D<Scalar>& g1,
                                 const UniformGrid1D<Scalar>& g2) {
  MatrixX<Scalar> s(g1.count, g2.count);
  for (Eigen::Index j = 0; j < g2.count; ++j) {
    for (Eigen::Index i = 0; i < g1.count; ++i) s(i, j) = f(g1.node(i), g2.node(j));
  }
  return GridFunction2D<Scalar>(g1, g2, std::move(s));
}

/// Samples of an exact generalized polynomial.
GridFunction1D<double> sample(const GeneralizedPolynomial& f, const UniformGrid1D<double>& grid);
GridFunction2D<double> sample(const BivariatePowerSum& u, const UniformGrid1D<double>& g1,
                              const UniformGrid1D<double>& g2);

// --- error norms -----------------------------------------------------------

/// Error window [a + lo (b-a), a + hi (b-a)] of a grid, node 0 and reduced
/// nodes excluded.
struct ErrorWindow {
  double lo = 0.1;
  double hi = 1.0;
};

template <typename Scalar>
std::vector<Eigen::Index> window_nodes(const GridFunction1D<Scalar>& f, ErrorWindow w = {}) {
  std::vector<Eigen::Index> idx;
  const double a = static_cast<double>(f.grid.terminal);
  const double len = static_cast<double>(f.grid.length());
  const double lo = a + w.lo * len - 1e-12 * len;
  const double hi = a + w.hi * len + 1e-12 * len;
  for (Eigen::Index k = 1; k < f.grid.count; ++k) {
    const double t = static_cast<double>(f.grid.node(k));
    if (t >= lo && t <= hi && !f.is_reduced(k)) idx.push_back(k);
  }
  return idx;
}

/// max_k |f_k - g(t_k)| / |g(t_k)| over the window.
template <typename Scalar, typename Exact>
double max_rel_error(const GridFunction1D<Scalar>& f, Exact&& exact, ErrorWindow w = {}) {
  double err = 0.0;
  for (Eigen::Index k : window_nodes(f, w)) {
    const double t = static_cast<double>(f.grid.node(k));
    const double ex = exact(t);
    const double d = std::abs(static_cast<double>(f.samples(k)) - ex);
    err = std::max(err, ex != 0.0 ? d / std::abs(ex) : d);
  }
  return err;
}

template <typename Scalar, typename Exact>
double max_abs_error(const GridFunction1D<Scalar>& f, Exact&& exact, ErrorWindow w = {}) {
  double err = 0.0;
  for (Eigen::Index k : window_nodes(f, w)) {
    const double t = static_cast<double>(f.grid.node(k));
    err = std::max(err, std::abs(static_cast<double>(f.samples(k)) - exact(t)));
  }
  return err;
}

/// Window over both axes of a 2D grid function.
struct ErrorWindow2D {
  ErrorWindow axis1{};
  ErrorWindow axis2{};
};

template <typename Scalar>
std::vector<std::pair<Eigen::Index, Eigen::Index>> window_nodes(const GridFunction2D<Scalar>& u,
                                                                ErrorWindow2D w = {}) {
  auto axis_nodes = [](const UniformGrid1D<Scalar>& g, const std::vector<bool>& red,
                       ErrorWindow ew) {
    std::vector<Eigen::Index> idx;
    const double a = static_cast<double>(g.terminal);
    const double len = static_cast<double>(g.length());
    for (Eigen::Index k = 1; k < g.count; ++k) {
      const double t = static_cast<double>(g.node(k));
      if (t >= a + ew.lo * len - 1e-12 * len && t <= a + ew.hi * len + 1e-12 * len &&
          (red.empty() || !red[static_cast<std::size_t>(k)])) {
        idx.push_back(k);
      }
    }
    return idx;
  };
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  for (auto j : axis_nodes(u.axis2, u.reduced2, w.axis2)) {
    for (auto i : axis_nodes(u.axis1, u.reduced1, w.axis1)) out.emplace_back(i, j);
  }
  return out;
}

template <typename Scalar, typename Exact>
double max_rel_error(const GridFunction2D<Scalar>& u, Exact&& exact, ErrorWindow2D w = {}) {
  double err = 0.0;
  for (auto [i, j] : window_nodes(u, w)) {
    const double ex = exact(static_cast<double>(u.axis1.node(i)), static_cast<double>(u.axis2.node(j)));
    const double d = std::abs(static_cast<double>(u.samples(i, j)) - ex);
    err = std::max(err, ex != 0.0 ? d / std::abs(ex) : d);
  }
  return err;
}

/// max |a - b| / max(max|a|, max|b|); 0 when both vanish.
double max_relative_deviation(const Eigen::Ref<const Eigen::VectorXd>& a,
                              const Eigen::Ref<const Eigen::VectorXd>& b);

}  // namespace fracsym
