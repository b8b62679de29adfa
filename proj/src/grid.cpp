#include "fracsym/grid.hpp"

#include "fracsym/discrepancy.hpp"

#include <algorithm>

namespace fracsym {

GridFunction1D<double> sample(const GeneralizedPolynomial& f, const UniformGrid1D<double>& grid) {
  return sample_fn([&f](double t) { return f(t); }, grid);
}

GridFunction2D<double> sample(const BivariatePowerSum& u, const UniformGrid1D<double>& g1,
                              const UniformGrid1D<double>& g2) {
  return sample_fn([&u](double x1, double x2) { return u(x1, x2); }, g1, g2);
}

double max_relative_deviation(const Eigen::Ref<const Eigen::VectorXd>& a,
                              const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size()) throw SizeError("max_relative_deviation: size mismatch");
  if (a.size() == 0) return 0.0;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  if (scale == 0.0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

Discrepancy compare(const Eigen::Ref<const Eigen::VectorXd>& lhs,
                    const Eigen::Ref<const Eigen::VectorXd>& rhs) {
  if (lhs.size() != rhs.size()) throw SizeError("compare: size mismatch");
  Discrepancy d;
  d.points = static_cast<std::size_t>(lhs.size());
  if (lhs.size() == 0) return d;
  d.max_abs_lhs = lhs.cwiseAbs().maxCoeff();
  d.max_abs_rhs = rhs.cwiseAbs().maxCoeff();
  d.max_abs_deviation = (lhs - rhs).cwiseAbs().maxCoeff();
  const double scale = std::max(d.max_abs_lhs, d.max_abs_rhs);
  if (scale == 0.0) return d;
  // Pointwise relative deviation; points where both sides are negligible
  // against the overall scale are measured against the scale instead.
  for (Eigen::Index k = 0; k < lhs.size(); ++k) {
    const double mag = std::max(std::abs(lhs(k)), std::abs(rhs(k)));
    const double ref = mag > 1e-8 * scale ? mag : scale;
    d.max_rel_deviation = std::max(d.max_rel_deviation, std::abs(lhs(k) - rhs(k)) / ref);
  }
  return d;
}

std::vector<Point2D> window_points(const Grid1D& g1, const Grid1D& g2, ErrorWindow2D window) {
  GridFunction2D<double> probe(g1, g2, Eigen::MatrixXd::Zero(g1.count, g2.count));
  std::vector<Point2D> out;
  for (auto [i, j] : window_nodes(probe, window)) out.emplace_back(g1.node(i), g2.node(j));
  return out;
}

}  // namespace fracsym
