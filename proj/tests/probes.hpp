#pragma once

// Probe generators and comparison helpers shared by the test suites.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fracsym/discrepancy.hpp"
#include "fracsym/power_sum.hpp"

namespace probes {

using fracsym::BivariatePowerSum;

inline std::vector<fracsym::Point2D> window() {
  return fracsym::window_points(fracsym::Grid1D::span(0.0, 1.0, 11), fracsym::Grid1D::span(0.0, 1.0, 11));
}

inline Eigen::VectorXd eval(const BivariatePowerSum& u, const std::vector<fracsym::Point2D>& pts) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) v(static_cast<Eigen::Index>(i)) = u(pts[i].first, pts[i].second);
  return v;
}

inline double deviation(const BivariatePowerSum& a, const BivariatePowerSum& b) {
  auto pts = window();
  return fracsym::compare(eval(a, pts), eval(b, pts)).max_rel_deviation;
}

inline double max_abs(const BivariatePowerSum& a) { return eval(a, window()).cwiseAbs().maxCoeff(); }

// Random power sum with up to four terms, exponents in (0, 2].
inline BivariatePowerSum random_bivariate(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> e(0.05, 2.0), c(-2.0, 2.0);
  std::uniform_int_distribution<int> n(1, 4);
  std::vector<fracsym::BivariateTerm> t;
  const int k = n(rng);
  for (int i = 0; i < k; ++i) t.push_back({c(rng), e(rng), e(rng)});
  return BivariatePowerSum(t);
}

// Random generalized polynomial in z with up to four terms, exponents in [0, 1.9].
inline fracsym::GeneralizedPolynomial random_gp(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> e(0.0, 1.9), c(-2.0, 2.0);
  std::uniform_int_distribution<int> n(1, 4);
  std::vector<fracsym::PowerTerm> t;
  const int k = n(rng);
  for (int i = 0; i < k; ++i) t.push_back({c(rng), e(rng)});
  return fracsym::GeneralizedPolynomial(t, "z");
}

// Relative error over the interior window, measured against 1e-3 of the
// window scale where the exact value is small.
inline double window_rel_error(const fracsym::GridFunction2D<double>& num, const BivariatePowerSum& exact,
                               fracsym::ErrorWindow2D w = {}) {
  double scale = 0.0, err = 0.0;
  auto idx = fracsym::window_nodes(num, w);
  for (auto [i, j] : idx) scale = std::max(scale, std::abs(exact(num.axis1.node(i), num.axis2.node(j))));
  for (auto [i, j] : idx) {
    const double ex = exact(num.axis1.node(i), num.axis2.node(j));
    err = std::max(err, std::abs(num.samples(i, j) - ex) / std::max(std::abs(ex), 1e-3 * scale));
  }
  return err;
}

}  // namespace probes
