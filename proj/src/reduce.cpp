#include "fracsym/reduce.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <random>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "fracsym/csv.hpp"
#include "fracsym/errors.hpp"
#include "fracsym/parallel.hpp"

namespace fracsym {

GeneralizedPolynomial reduced_linear_part(const GeneralizedPolynomial& v, const FkdvbParams& params,
                                          EKFlags* flags) {
  const double p = params.p.value(), q = params.q.value(), r = params.r.value();
  const GeneralizedPolynomial shifted = gp_mul_monomial(v, 1.0, r - q);
  const GeneralizedPolynomial ek =
      ek_diff(shifted, EKParams(1.0 - p, p, r / p), EKDomain::Continue, flags);
  return gp_mul_monomial(ek, 1.0, q - r) + gp_rl_deriv(v, r);
}

GeneralizedPolynomial reduced_lhs(const GeneralizedPolynomial& v, const FkdvbParams& params,
                                  EKFlags* flags) {
  return reduced_linear_part(v, params, flags) + v * gp_rl_deriv(v, params.q.value());
}

BivariatePowerSum invariant_solution(const GeneralizedPolynomial& v, const FkdvbParams& params) {
  // u = x2^(-w_exp2) w with w = v(z), z = x1 x2^z_exp2.
  const Invariants inv = invariants(params);
  std::vector<BivariateTerm> terms;
  for (const auto& t : v.terms()) {
    terms.push_back({t.coeff, t.exponent, t.exponent * inv.z_exp2 - inv.w_exp2});
  }
  return BivariatePowerSum(std::move(terms));
}

Discrepancy reduction_consistency(const GeneralizedPolynomial& v, const FkdvbParams& params,
                                  std::vector<Point2D> points) {
  if (points.empty()) points = window_points(Grid1D::span(0.0, 1.0, 11), Grid1D::span(0.0, 1.0, 11));
  const ScalingGenerator gen = solve_scaling(params);
  const double prefactor = equivariance_exponent(gen, params) / gen.beta;
  const Invariants inv = invariants(params);
  const BivariatePowerSum lhs = residual(invariant_solution(v, params), params);
  const GeneralizedPolynomial g = reduced_lhs(v, params);
  Eigen::VectorXd l(static_cast<Eigen::Index>(points.size())), r(l.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [x1, x2] = points[i];
    l(static_cast<Eigen::Index>(i)) = lhs(x1, x2);
    r(static_cast<Eigen::Index>(i)) = std::pow(x2, prefactor) * g(inv.z(x1, x2));
  }
  return compare(l, r);
}

// --- problem -------------------------------------------------------------------

void ReducedProblem::validate() const {
  auto fail = [](const std::string& m) { throw DomainError("reduced problem: " + m); };
  if (!(z0 > 0.0) || !(z1 > z0) || !std::isfinite(z1)) fail("need 0 < zmin < zmax");
  if (basis_size < 1) fail("basis size K must be >= 1");
  if (collocation_points < basis_size) fail("collocation points M must be >= K");
  if (!(increment() > 0.0)) fail("exponent increment must be > 0");
  const double zr = reference();
  if (!(zr >= z0 && zr <= z1)) fail("normalization point must lie in [zmin, zmax]");
  if (!std::isfinite(w0)) fail("normalization value must be finite");
  if (!(gamma0 > -1.0)) fail("leading exponent must be > -1");
  if (!(tolerance > 0.0)) fail("tolerance must be > 0");
  if (max_iterations < 1 || starts < 1) fail("iteration and start counts must be >= 1");
  if (free_gamma0 && (gamma0_scan < 2 || !(gamma0_span > 0.0))) fail("gamma0 scan needs >= 2 nodes and a positive span");
  if (!(normalization_weight > 0.0)) fail("normalization weight must be > 0");
}

std::vector<double> ReducedProblem::collocation() const {
  std::vector<double> z(static_cast<std::size_t>(collocation_points));
  if (collocation_points == 1) {
    z[0] = 0.5 * (z0 + z1);
    return z;
  }
  const double h = (z1 - z0) / (collocation_points - 1);
  for (int i = 0; i < collocation_points; ++i) z[static_cast<std::size_t>(i)] = z0 + i * h;
  return z;
}

std::vector<double> ReducedProblem::exponents(double g0) const {
  std::vector<double> e(static_cast<std::size_t>(basis_size));
  for (int k = 0; k < basis_size; ++k) e[static_cast<std::size_t>(k)] = g0 + k * increment();
  return e;
}

GeneralizedPolynomial ReducedSolutionCandidate::v() const {
  std::vector<PowerTerm> t;
  for (std::size_t k = 0; k < coefficients.size(); ++k) t.push_back({coefficients[k], exponents[k]});
  return GeneralizedPolynomial(std::move(t), "z");
}

// --- solver --------------------------------------------------------------------

namespace {

// Basis values at the collocation points: B = z^mu, Q = D^q z^mu, L = linear part of G.
struct BasisTables {
  Eigen::MatrixXd B, Q, L;
  Eigen::RowVectorXd ref;  // z_ref^mu
};

BasisTables tabulate(const ReducedProblem& pb, double g0, const std::vector<double>& z) {
  const auto ex = pb.exponents(g0);
  const Eigen::Index M = static_cast<Eigen::Index>(z.size()), K = static_cast<Eigen::Index>(ex.size());
  BasisTables t{Eigen::MatrixXd(M, K), Eigen::MatrixXd(M, K), Eigen::MatrixXd(M, K),
                Eigen::RowVectorXd(K)};
  for (Eigen::Index k = 0; k < K; ++k) {
    const GeneralizedPolynomial b = GeneralizedPolynomial::monomial(1.0, ex[static_cast<std::size_t>(k)], "z");
    const GeneralizedPolynomial dq = gp_rl_deriv(b, pb.params.q.value());
    const GeneralizedPolynomial lin = reduced_linear_part(b, pb.params);
    for (Eigen::Index i = 0; i < M; ++i) {
      const double zi = z[static_cast<std::size_t>(i)];
      t.B(i, k) = b(zi);
      t.Q(i, k) = dq(zi);
      t.L(i, k) = lin(zi);
    }
    t.ref(k) = b(pb.reference());
  }
  if (!t.B.allFinite() || !t.Q.allFinite() || !t.L.allFinite()) {
    throw NumericError("reduced solver: non-finite basis values");
  }
  return t;
}

// Residual rows: G(z_i) for every collocation point, then the weighted normalization.
Eigen::VectorXd rows(const ReducedProblem& pb, const BasisTables& t, const Eigen::VectorXd& c) {
  const Eigen::Index M = t.B.rows();
  Eigen::VectorXd r(M + 1);
  r.head(M) = t.L * c + (t.B * c).cwiseProduct(t.Q * c);
  r(M) = pb.normalization_weight * (t.ref.dot(c) - pb.w0);
  return r;
}

struct StartResult {
  bool ok = false;
  Eigen::VectorXd c;
  double cost = std::numeric_limits<double>::infinity();
  int iterations = 0;
  std::vector<double> history;
  std::string note;
};

// Levenberg-Marquardt over the coefficients at fixed gamma0. G is quadratic
// in c, so the Jacobian is exact: L + diag(Qc) B + diag(Bc) Q.
StartResult run_start(const ReducedProblem& pb, const BasisTables& t, Eigen::VectorXd c) {
  StartResult res;
  const Eigen::Index K = c.size(), M = t.B.rows();
  auto jacobian = [&](const Eigen::VectorXd& cc) {
    Eigen::MatrixXd J(M + 1, K);
    const Eigen::VectorXd bc = t.B * cc, qc = t.Q * cc;
    J.topRows(M) = t.L + bc.asDiagonal() * t.Q + qc.asDiagonal() * t.B;
    J.row(M) = pb.normalization_weight * t.ref;
    return J;
  };
  Eigen::VectorXd r = rows(pb, t, c);
  Eigen::MatrixXd J = jacobian(c);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  int it = 0;
  for (; it < pb.max_iterations; ++it) {
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    const Eigen::VectorXd d = A.diagonal().cwiseMax(1e-300);
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(A + lambda * Eigen::MatrixXd(d.asDiagonal()));
    const Eigen::VectorXd step = ldlt.solve(-g);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
      const auto& sv = svd.singularValues();
      std::ostringstream os;
      os << "reduced solver: damped normal equations are singular; Jacobian condition "
         << sv(0) / sv(sv.size() - 1);
      throw NumericError(os.str());
    }
    if (step.norm() <= 1e-12) break;
    const Eigen::VectorXd c_new = c + step;
    const Eigen::VectorXd r_new = rows(pb, t, c_new);
    const double cost_new = r_new.squaredNorm();
    if (!(cost_new < cost)) {
      lambda *= 10.0;
      if (lambda > 1e16) break;
      continue;
    }
    c = c_new;
    r = r_new;
    J = jacobian(c);
    cost = cost_new;
    res.history.push_back(cost);
    lambda *= 0.3;
  }
  res.ok = true;
  res.c = c;
  res.cost = cost;
  res.iterations = it;
  return res;
}

struct FixedResult {
  bool ok = false;
  StartResult best;
  int best_start = -1;
  std::string note;
};

// All starts at one gamma0; the lowest least-squares cost wins.
FixedResult solve_fixed(const ReducedProblem& pb, const std::vector<double>& z, double g0,
                        const std::vector<Eigen::VectorXd>& c_init) {
  FixedResult out;
  BasisTables t;
  try {
    t = tabulate(pb, g0, z);
  } catch (const std::exception& e) {
    out.note = e.what();
    return out;
  }
  std::vector<StartResult> results(c_init.size());
  std::vector<std::string> errors(c_init.size());
  parallel_for(static_cast<std::ptrdiff_t>(c_init.size()), [&](std::ptrdiff_t s) {
    const auto i = static_cast<std::size_t>(s);
    try {
      results[i] = run_start(pb, t, c_init[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (const auto& e : errors) {
    if (!e.empty()) throw NumericError(e);
  }
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].ok && results[i].cost < out.best.cost) {
      out.best = results[i];
      out.best_start = static_cast<int>(i);
      out.ok = true;
    }
  }
  if (!out.ok) out.note = "no start finished";
  return out;
}

}  // namespace

ReducedSolutionCandidate solve_reduced(const ReducedProblem& pb) {
  pb.validate();
  ReducedSolutionCandidate cand;
  cand.params = pb.params;
  cand.delta = pb.increment();
  cand.z0 = pb.z0;
  cand.z1 = pb.z1;
  cand.z_ref = pb.reference();
  cand.w0 = pb.w0;
  cand.collocation_points = pb.collocation_points;
  cand.gamma0 = pb.gamma0;
  cand.exponents = pb.exponents(pb.gamma0);
  const auto z = pb.collocation();

  if (pb.w0 == 0.0) {
    // v = 0 solves the reduced equation exactly.
    cand.coefficients.assign(static_cast<std::size_t>(pb.basis_size), 0.0);
    cand.converged = true;
    cand.diagnostics = "trivial branch: w0 = 0 gives v = 0\n";
    return cand;
  }

  // Starting coefficients are drawn once and reused at every gamma0, which
  // keeps the outer objective deterministic.
  std::mt19937_64 rng(pb.seed);
  std::normal_distribution<double> coef(0.0, 1.0);
  std::vector<Eigen::VectorXd> c_init(static_cast<std::size_t>(pb.starts));
  for (auto& c : c_init) {
    c.resize(pb.basis_size);
    for (int k = 0; k < pb.basis_size; ++k) c(k) = coef(rng);
  }

  std::ostringstream diag;
  double g_best = pb.gamma0;
  if (pb.free_gamma0) {
    int evaluations = 0;
    auto objective = [&](double g) {
      ++evaluations;
      if (!(g > -1.0 + kExponentFloorMargin)) return std::numeric_limits<double>::infinity();
      const FixedResult f = solve_fixed(pb, z, g, c_init);
      return f.ok ? f.best.cost : std::numeric_limits<double>::infinity();
    };
    // Coarse scan, then Brent refinement inside the bracket around the best node.
    const double lo = std::max(pb.gamma0 - pb.gamma0_span, -1.0 + 1e-3);
    const double hi = pb.gamma0 + pb.gamma0_span;
    const int n = pb.gamma0_scan;
    const double h = (hi - lo) / (n - 1);
    double f_best = std::numeric_limits<double>::infinity();
    int i_best = -1;
    for (int i = 0; i < n; ++i) {
      const double f = objective(lo + i * h);
      if (f < f_best) {
        f_best = f;
        i_best = i;
      }
    }
    if (i_best < 0) {
      cand.converged = false;
      cand.residual_norm = std::numeric_limits<double>::infinity();
      cand.diagnostics = "gamma0 scan: no admissible value in [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]\n";
      return cand;
    }
    g_best = lo + i_best * h;
    const double a = std::max(lo, g_best - h), b = std::min(hi, g_best + h);
    std::uintmax_t max_iter = 100;
    const auto [g_min, f_min] = boost::math::tools::brent_find_minima(
        objective, a, b, std::numeric_limits<double>::digits / 2, max_iter);
    if (f_min < f_best) g_best = g_min;
    diag << "gamma0 tuning: " << evaluations << " evaluations, gamma0=" << format_double(g_best)
         << "\n";
  }

  const FixedResult fr = solve_fixed(pb, z, g_best, c_init);
  if (!fr.ok) {
    cand.converged = false;
    cand.residual_norm = std::numeric_limits<double>::infinity();
    cand.diagnostics = diag.str() + "solver failed: " + fr.note + "\n";
    return cand;
  }
  cand.gamma0 = g_best;
  cand.exponents = pb.exponents(g_best);
  cand.coefficients.assign(fr.best.c.data(), fr.best.c.data() + fr.best.c.size());
  cand.iterations = fr.best.iterations;
  cand.best_start = fr.best_start;
  cand.cost_history = fr.best.history;

  // Reported residual through the exact reduced operator, independent of the basis tables.
  const GeneralizedPolynomial v = cand.v();
  const GeneralizedPolynomial g = reduced_lhs(v, pb.params);
  cand.residual_norm = 0.0;
  for (double zi : z) cand.residual_norm = std::max(cand.residual_norm, std::abs(g(zi)));
  cand.normalization_error = std::abs(v(cand.z_ref) - pb.w0);
  cand.converged = cand.residual_norm <= pb.tolerance && cand.normalization_error <= pb.tolerance;
  diag << "best start " << fr.best_start << ": iterations=" << fr.best.iterations
       << " accepted=" << fr.best.history.size() << " cost=" << format_double(fr.best.cost)
       << "\n";
  diag << "residual_norm=" << format_double(cand.residual_norm)
       << " normalization_error=" << format_double(cand.normalization_error) << "\n";
  cand.diagnostics = diag.str();
  return cand;
}

// --- reconstruction and verification ----------------------------------------------

GridFunction2D<double> reconstruct(const ReducedSolutionCandidate& candidate, const Grid1D& g1,
                                   const Grid1D& g2) {
  const BivariatePowerSum u = invariant_solution(candidate.v(), candidate.params);
  Eigen::MatrixXd s(g1.count, g2.count);
  std::vector<bool> f1(static_cast<std::size_t>(g1.count), false), f2(static_cast<std::size_t>(g2.count), false);
  for (Eigen::Index j = 0; j < g2.count; ++j) {
    for (Eigen::Index i = 0; i < g1.count; ++i) {
      const double x1 = g1.node(i), x2 = g2.node(j);
      if (x1 == 0.0 || x2 == 0.0) {
        s(i, j) = 0.0;
        if (x1 == 0.0) f1[static_cast<std::size_t>(i)] = true;
        if (x2 == 0.0) f2[static_cast<std::size_t>(j)] = true;
        continue;
      }
      s(i, j) = u(x1, x2);
    }
  }
  GridFunction2D<double> out(g1, g2, std::move(s));
  out.reduced1 = std::move(f1);
  out.reduced2 = std::move(f2);
  return out;
}

GridFunction2D<double> residual_field(const GridFunction2D<double>& u, const FkdvbParams& params,
                                      SchemeKind scheme) {
  return residual(u, params, scheme);
}

VerifyReport verify_2d(const GridFunction2D<double>& u, const FkdvbParams& params,
                       ErrorWindow2D window, SchemeKind scheme) {
  const GridFunction2D<double> res = residual(u, params, scheme);
  VerifyReport rep;
  double sum = 0.0;
  for (auto [i, j] : window_nodes(res, window)) {
    const double v = res.samples(i, j);
    rep.linf = std::max(rep.linf, std::abs(v));
    sum += v * v;
    ++rep.points;
  }
  rep.l2 = rep.points ? std::sqrt(sum / static_cast<double>(rep.points)) : 0.0;
  return rep;
}

RefinementReport verify_refinement(const ReducedSolutionCandidate& candidate, const Grid1D& g1,
                                   const Grid1D& g2, ErrorWindow2D window) {
  RefinementReport rep;
  rep.coarse = verify_2d(reconstruct(candidate, g1, g2), candidate.params, window);
  const Grid1D f1(g1.terminal, 0.5 * g1.step, 2 * g1.count - 1);
  const Grid1D f2(g2.terminal, 0.5 * g2.step, 2 * g2.count - 1);
  rep.fine = verify_2d(reconstruct(candidate, f1, f2), candidate.params, window);
  rep.ratio = rep.fine.linf > 0.0 ? rep.coarse.linf / rep.fine.linf
                                  : (rep.coarse.linf > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  return rep;
}

}  // namespace fracsym
