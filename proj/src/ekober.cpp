#include "fracsym/ekober.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "fracsym/errors.hpp"
#include "fracsym/special.hpp"

namespace fracsym {

EKParams::EKParams(double c_, double a_, double b_) : c(c_), a(a_), b(b_) {
  if (!std::isfinite(c) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("EK parameters must be finite");
  }
  if (a < 0.0) throw DomainError("EK order a must be >= 0");
  if (b == 0.0) throw DomainError("EK parameter b must be non-zero");
}

int EKParams::floor_a() const { return static_cast<int>(std::floor(a)); }

namespace {

std::string term_text(const PowerTerm& t, const std::string& var) {
  std::ostringstream os;
  os << t.coeff << "*" << var << "^" << t.exponent;
  return os.str();
}

void require_strip(double arg, const PowerTerm& t, const GeneralizedPolynomial& f, const char* op,
                   const EKParams& prm) {
  if (!(arg > 0.0)) {
    std::ostringstream os;
    os << op << ": term " << term_text(t, f.variable()) << " violates the convergence condition "
       << "c - mu/b > 0 (c = " << prm.c << ", b = " << prm.b << ", c - mu/b = " << arg << ")";
    throw DomainError(os.str());
  }
}

}  // namespace

GeneralizedPolynomial ek_integral(const GeneralizedPolynomial& f, const EKParams& params,
                                  EKDomain domain, EKFlags* flags) {
  if (params.a == 0.0) return f;
  std::vector<PowerTerm> out;
  for (const auto& t : f.terms()) {
    const double arg = params.c - t.exponent / params.b;
    if (domain == EKDomain::Strict) {
      require_strip(arg, t, f, "ek_integral", params);
    } else if (!(arg > 0.0) && flags) {
      flags->continued = true;
    }
    if (is_gamma_pole(arg) && !is_gamma_pole(arg + params.a)) {
      throw DomainError("ek_integral: term " + term_text(t, f.variable()) +
                        " hits a pole of Gamma(c - mu/b); the continuation is infinite");
    }
    const double factor = gamma_ratio(arg, arg + params.a);
    if (factor == 0.0 && flags) flags->pole_zero = true;
    out.push_back({t.coeff * factor, t.exponent});
  }
  return GeneralizedPolynomial(std::move(out), f.variable());
}

GeneralizedPolynomial ek_diff(const GeneralizedPolynomial& f, const EKParams& params,
                              EKDomain domain, EKFlags* flags) {
  const int fa = params.floor_a();
  std::vector<PowerTerm> out;
  for (const auto& t : f.terms()) {
    const double base = params.c - t.exponent / params.b;  // c - mu/b
    const double inner = base + params.a;                  // c + a - mu/b
    double factor = 0.0;
    if (domain == EKDomain::Strict) {
      require_strip(inner, t, f, "ek_diff", params);
      // Inner integral K^{c+a,[a]+1-a}, then the factors (j + c - mu/b).
      factor = gamma_ratio(inner, base + fa + 1.0);
      for (int j = 0; j <= fa; ++j) factor *= (j + base);
    } else {
      if (!(inner > 0.0) && flags) flags->continued = true;
      if (is_gamma_pole(inner) && !is_gamma_pole(base)) {
        throw DomainError("ek_diff: term " + term_text(t, f.variable()) +
                          " hits a pole of Gamma(c + a - mu/b); the continuation is infinite");
      }
      factor = gamma_ratio(inner, base);
    }
    if (factor == 0.0 && flags) flags->pole_zero = true;
    out.push_back({t.coeff * factor, t.exponent});
  }
  return GeneralizedPolynomial(std::move(out), f.variable());
}

// --- quadrature ------------------------------------------------------------

GaussJacobiRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw SizeError("gauss_jacobi: need at least one node");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("gauss_jacobi: exponents must be > -1");
  // Jacobi polynomials on [-1,1] with weight (1-x)^A (1+x)^B; s = (1+x)/2.
  const double A = beta;
  const double B = alpha;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + A + B;
    diag(k) = k == 0 ? (B - A) / (A + B + 2.0) : (B * B - A * A) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + A + B;
    const double v = k == 1 ? 4.0 * (1.0 + A) * (1.0 + B) / ((2.0 + A + B) * (2.0 + A + B) * (3.0 + A + B))
                            : 4.0 * k * (k + A) * (k + B) * (k + A + B) / (s * s * (s + 1.0) * (s - 1.0));
    sub(k - 1) = std::sqrt(v);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NumericError("gauss_jacobi: eigen solver failed");
  const double beta_fn = fracsym::gamma(alpha + 1.0) * fracsym::gamma(beta + 1.0) *
                         rgamma(alpha + beta + 2.0);
  GaussJacobiRule rule;
  rule.nodes.resize(n);
  rule.one_minus_nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    const double x = es.eigenvalues()(k);
    rule.nodes(k) = 0.5 * (1.0 + x);
    rule.one_minus_nodes(k) = 0.5 * (1.0 - x);
    const double v0 = es.eigenvectors()(0, k);
    rule.weights(k) = beta_fn * v0 * v0;
  }
  return rule;
}

namespace {

// Rules are reused across evaluation points; building one is O(n^2).
GaussJacobiRule cached_rule(int n, double alpha, double beta) {
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, GaussJacobiRule> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(n, alpha, beta);
  auto it = cache.find(key);
  if (it == cache.end()) {
    if (cache.size() > 256) cache.clear();
    it = cache.emplace(key, gauss_jacobi(n, alpha, beta)).first;
  }
  return it->second;
}

double apply_rule(const GaussJacobiRule& rule, const std::function<double(double)>& f, double y,
                  double b, double growth) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < rule.nodes.size(); ++k) {
    const double om = rule.one_minus_nodes(k);
    sum += rule.weights(k) * std::pow(om, growth / b) * f(y * std::pow(om, -1.0 / b));
  }
  return sum;
}

}  // namespace

QuadratureValue ek_integral_quad(const std::function<double(double)>& f, const EKParams& params,
                                 double y, double growth, int nodes) {
  if (!(params.a > 0.0)) throw DomainError("ek_integral_quad: order a must be > 0");
  if (!(y > 0.0)) throw DomainError("ek_integral_quad: evaluation point must be > 0");
  const double tail = params.c - growth / params.b;
  if (!(tail > 0.0)) {
    std::ostringstream os;
    os << "ek_integral_quad: declared growth x^" << growth << " makes the integral diverge "
       << "(c - nu/b = " << tail << " <= 0)";
    throw DomainError(os.str());
  }
  const double alpha = params.a - 1.0;
  const double beta = tail - 1.0;
  const GaussJacobiRule coarse = cached_rule(nodes, alpha, beta);
  const GaussJacobiRule fine = cached_rule(2 * nodes, alpha, beta);
  const double scale = rgamma(params.a);
  const double q1 = scale * apply_rule(coarse, f, y, params.b, growth);
  const double q2 = scale * apply_rule(fine, f, y, params.b, growth);
  if (!std::isfinite(q1) || !std::isfinite(q2)) throw NumericError("ek_integral_quad: non-finite value");
  return {q2, std::abs(q2 - q1)};
}

QuadratureValue ek_integral_quad(const GeneralizedPolynomial& f, const EKParams& params, double y,
                                 int nodes) {
  QuadratureValue total;
  for (const auto& t : f.terms()) {
    const double mu = t.exponent;
    auto q = ek_integral_quad([mu](double x) { return std::pow(x, mu); }, params, y, mu, nodes);
    total.value += t.coeff * q.value;
    total.error_estimate += std::abs(t.coeff) * q.error_estimate;
  }
  return total;
}

QuadratureValue ek_diff_quad(const std::function<double(double)>& f, const EKParams& params,
                             double y, double growth, int nodes) {
  const int fa = params.floor_a();
  const EKParams inner(params.c + params.a, fa + 1.0 - params.a, params.b);
  // prod_j (j + c - theta/b) expanded in powers of theta = y d/dy.
  std::vector<double> poly{1.0};
  for (int j = 0; j <= fa; ++j) {
    std::vector<double> next(poly.size() + 1, 0.0);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] += (j + params.c) * poly[k];
      next[k + 1] -= poly[k] / params.b;
    }
    poly = std::move(next);
  }
  auto K = [&](double s) { return ek_integral_quad(f, inner, y * std::exp(s), growth, nodes); };
  const QuadratureValue k0 = K(0.0);
  const int max_order = static_cast<int>(poly.size()) - 1;
  if (max_order > 3) throw DomainError("ek_diff_quad: order a >= 3 is not supported");
  // theta^k K at s = 0 from central differences, one Richardson step.
  std::map<double, double> samples{{0.0, k0.value}};
  auto at = [&](double s) {
    auto it = samples.find(s);
    if (it == samples.end()) it = samples.emplace(s, K(s).value).first;
    return it->second;
  };
  auto central = [&](int k, double h) {
    switch (k) {
      case 1: return (at(h) - at(-h)) / (2.0 * h);
      case 2: return (at(h) - 2.0 * at(0.0) + at(-h)) / (h * h);
      default: return (at(2 * h) - 2.0 * at(h) + 2.0 * at(-h) - at(-2 * h)) / (2.0 * h * h * h);
    }
  };
  constexpr double kStep = 8e-3;
  double value = poly[0] * k0.value;
  double fd_error = 0.0;
  for (int k = 1; k <= max_order; ++k) {
    const double coarse = central(k, kStep);
    const double fine = central(k, kStep / 2);
    value += poly[static_cast<std::size_t>(k)] * (4.0 * fine - coarse) / 3.0;
    fd_error += std::abs(poly[static_cast<std::size_t>(k)] * (fine - coarse)) / 3.0;
  }
  double coef_sum = 0.0;
  for (double c : poly) coef_sum += std::abs(c);
  return {value, coef_sum * k0.error_estimate + fd_error};
}

// --- identities ------------------------------------------------------------

Discrepancy ek_reduction_identity_check(const GeneralizedPolynomial& v, double p, double alpha,
                                        const std::vector<Point2D>& points) {
  if (!(p > 0.0)) throw DomainError("ek_reduction_identity_check: order must be > 0");
  if (!(alpha > 0.0)) throw DomainError("ek_reduction_identity_check: alpha must be > 0");
  // v(x1 x2^-alpha) as a bivariate power sum.
  std::vector<BivariateTerm> terms;
  for (const auto& t : v.terms()) terms.push_back({t.coeff, t.exponent, -alpha * t.exponent});
  const BivariatePowerSum lhs_sum = partial_rl_deriv(BivariatePowerSum(std::move(terms)), 2, p);
  const GeneralizedPolynomial ek = ek_diff(v, EKParams(1.0 - p, p, 1.0 / alpha));
  Eigen::VectorXd lhs(static_cast<Eigen::Index>(points.size()));
  Eigen::VectorXd rhs(lhs.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto [x1, x2] = points[k];
    lhs(static_cast<Eigen::Index>(k)) = lhs_sum(x1, x2);
    rhs(static_cast<Eigen::Index>(k)) = std::pow(x2, -p) * ek(x1 * std::pow(x2, -alpha));
  }
  return compare(lhs, rhs);
}

Discrepancy scale_relation_check(const GeneralizedPolynomial& f, double p, double lambda,
                                 const std::vector<double>& points) {
  if (!(lambda > 0.0)) throw DomainError("scale_relation_check: lambda must be > 0");
  const GeneralizedPolynomial lhs_gp = gp_rl_deriv(gp_rescale(f, lambda), p);
  const GeneralizedPolynomial df = gp_rl_deriv(f, p);
  const double lp = std::pow(lambda, p);
  Eigen::VectorXd lhs(static_cast<Eigen::Index>(points.size()));
  Eigen::VectorXd rhs(lhs.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const double x = points[k];
    if (!(x > 0.0)) throw DomainError("scale_relation_check: points must be > 0");
    lhs(static_cast<Eigen::Index>(k)) = lhs_gp(x);
    rhs(static_cast<Eigen::Index>(k)) = lp * df(lambda * x);
  }
  return compare(lhs, rhs);
}

}  // namespace fracsym
