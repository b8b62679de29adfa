#pragma once

// Symmetry reduction of the fKdV-Burgers equation. An invariant solution
// u = x2^(p(q-r)/r) v(z), z = x1 x2^(-p/r), turns R[u] into
//   x2^((pq-2pr)/r) G[v](z),
//   G[v] = z^(q-r) D^{1-p,p}_{r/p}(z^(r-q) v) + v D^q v + D^r v.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fracsym/discrepancy.hpp"
#include "fracsym/ekober.hpp"
#include "fracsym/fkdvb.hpp"

namespace fracsym {

/// The terms of G that are linear in v.
GeneralizedPolynomial reduced_linear_part(const GeneralizedPolynomial& v, const FkdvbParams& params,
                                          EKFlags* flags = nullptr);
/// G[v], exact. The EK term is continued analytically outside its
/// convergence strip (reported through flags); denominator poles give exact zeros.
GeneralizedPolynomial reduced_lhs(const GeneralizedPolynomial& v, const FkdvbParams& params,
                                  EKFlags* flags = nullptr);

/// u_v(x1, x2) as an exact power sum, built from the generator's invariants.
BivariatePowerSum invariant_solution(const GeneralizedPolynomial& v, const FkdvbParams& params);

/// R[u_v](x) against x2^(s/beta) G[v](z(x)) at the points (default: the
/// 11 x 11 window grid on [0.1, 1]^2).
Discrepancy reduction_consistency(const GeneralizedPolynomial& v, const FkdvbParams& params,
                                  std::vector<Point2D> points = {});

struct ReducedProblem {
  FkdvbParams params;
  double z0 = 0.2;
  double z1 = 2.0;
  int basis_size = 8;          // K
  int collocation_points = 24;  // M
  double gamma0 = -0.2;        // leading exponent (scan centre when free)
  bool free_gamma0 = true;
  double gamma0_span = 0.3;    // scan half-width when free
  int gamma0_scan = 13;        // scan nodes when free
  double delta = 0.0;          // exponent increment; <= 0 means q
  double z_ref = std::numeric_limits<double>::quiet_NaN();  // NaN means the midpoint
  double w0 = 1.0;
  double normalization_weight = 1.0;
  double tolerance = 1e-6;
  int max_iterations = 200;
  int starts = 8;
  std::uint64_t seed = 1;

  ReducedProblem() = default;
  explicit ReducedProblem(const FkdvbParams& p) : params(p) {}

  void validate() const;
  double increment() const { return delta > 0.0 ? delta : params.q.value(); }
  double reference() const { return std::isnan(z_ref) ? 0.5 * (z0 + z1) : z_ref; }
  std::vector<double> collocation() const;
  std::vector<double> exponents(double g0) const;
};

struct ReducedSolutionCandidate {
  FkdvbParams params;
  double gamma0 = 0.0;
  double delta = 0.0;
  std::vector<double> exponents;
  std::vector<double> coefficients;
  double z0 = 0.0;
  double z1 = 0.0;
  double z_ref = 0.0;
  double w0 = 0.0;
  int collocation_points = 0;
  double residual_norm = 0.0;        // max |G[v](z_i)| over the collocation points
  double normalization_error = 0.0;  // |v(z_ref) - w0|
  int iterations = 0;
  bool converged = false;
  int best_start = -1;
  std::vector<double> cost_history;  // least-squares cost after each accepted step
  std::string diagnostics;

  GeneralizedPolynomial v() const;
};

/// Levenberg-Marquardt over the coefficients on the collocation residuals plus
/// a normalization row, from several deterministic starts. A free gamma0 is
/// tuned by a coarse scan and Brent refinement of the least-squares cost.
/// Failure to converge is reported in the candidate, not thrown.
ReducedSolutionCandidate solve_reduced(const ReducedProblem& problem);

/// Samples of u_v on the grid. Nodes on x1 = 0 or x2 = 0, where u_v is
/// singular, are set to 0 and flagged.
GridFunction2D<double> reconstruct(const ReducedSolutionCandidate& candidate, const Grid1D& g1,
                                   const Grid1D& g2);

struct VerifyReport {
  double linf = 0.0;
  double l2 = 0.0;  // root mean square over the window nodes
  std::size_t points = 0;
};

/// Numeric residual norms of R[u] on the window (reduced nodes excluded).
VerifyReport verify_2d(const GridFunction2D<double>& u, const FkdvbParams& params,
                       ErrorWindow2D window = {},
                       SchemeKind scheme = SchemeKind::ProductTrapezoid);
GridFunction2D<double> residual_field(const GridFunction2D<double>& u, const FkdvbParams& params,
                                      SchemeKind scheme = SchemeKind::ProductTrapezoid);

struct RefinementReport {
  VerifyReport coarse;  // step h
  VerifyReport fine;    // step h/2
  double ratio = 0.0;   // coarse.linf / fine.linf
};

/// verify_2d on the grids (n1, n2) and (2 n1 - 1, 2 n2 - 1) over the same spans.
RefinementReport verify_refinement(const ReducedSolutionCandidate& candidate, const Grid1D& g1,
                                   const Grid1D& g2, ErrorWindow2D window = {});

}  // namespace fracsym
