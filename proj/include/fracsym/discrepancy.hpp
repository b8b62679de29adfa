#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "fracsym/grid.hpp"

namespace fracsym {

/// Outcome of comparing two independently computed sides of an identity.
struct Discrepancy {
  // max over points of |L-R| / max(|L|,|R|); points where both sides are
  // below 1e-8 of the overall scale are measured against that scale.
  double max_rel_deviation = 0.0;
  double max_abs_deviation = 0.0;
  double max_abs_lhs = 0.0;
  double max_abs_rhs = 0.0;
  std::size_t points = 0;
};

Discrepancy compare(const Eigen::Ref<const Eigen::VectorXd>& lhs,
                    const Eigen::Ref<const Eigen::VectorXd>& rhs);

using Point2D = std::pair<double, double>;

/// Grid nodes inside the window, node 0 of either axis excluded.
std::vector<Point2D> window_points(const Grid1D& g1, const Grid1D& g2, ErrorWindow2D window = {});

}  // namespace fracsym
