#pragma once

// Erdelyi-Kober operators
//   K^{c,a}_b f(y) = 1/Gamma(a) int_1^inf (eta-1)^(a-1) eta^-(a+c) f(y eta^(1/b)) d eta
//   D^{c,a}_b f(y) = prod_{j=0}^{[a]} (j + c - (y/b) d/dy) K^{c+a,[a]+1-a}_b f(y)
// On power terms: K y^mu = Gamma(c-mu/b)/Gamma(a+c-mu/b) y^mu and
// D y^mu = Gamma(c+a-mu/b)/Gamma(c-mu/b) y^mu.

#include <functional>
#include <vector>

#include "fracsym/discrepancy.hpp"
#include "fracsym/power_sum.hpp"

namespace fracsym {

struct EKParams {
  double c = 0.0;
  double a = 0.0;
  double b = 1.0;

  EKParams() = default;
  EKParams(double c_, double a_, double b_);
  int floor_a() const;
};

/// Strict: every term must lie in the convergence strip of the defining
/// integral, otherwise DomainError naming the term. Continue: Gamma-ratio
/// rule extended analytically, with exact zeros at denominator poles.
enum class EKDomain { Strict, Continue };

struct EKFlags {
  bool continued = false;  // some term lay outside the convergence strip
  bool pole_zero = false;  // some term vanished through a Gamma pole
};

/// Exact K on a power sum (a > 0; a = 0 is the identity).
GeneralizedPolynomial ek_integral(const GeneralizedPolynomial& f, const EKParams& params,
                                  EKDomain domain = EKDomain::Strict, EKFlags* flags = nullptr);
/// Exact D on a power sum. The strict path composes the inner integral with
/// the [a]+1 Euler-operator factors; the continued path uses the closed
/// Gamma ratio.
GeneralizedPolynomial ek_diff(const GeneralizedPolynomial& f, const EKParams& params,
                              EKDomain domain = EKDomain::Strict, EKFlags* flags = nullptr);

// --- quadrature ----------------------------------------------------------

/// Gauss-Jacobi rule on [0,1] for the weight s^alpha (1-s)^beta, built by
/// Golub-Welsch.
struct GaussJacobiRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd one_minus_nodes;  // 1 - s, computed without cancellation
  Eigen::VectorXd weights;
};
GaussJacobiRule gauss_jacobi(int n, double alpha, double beta);

struct QuadratureValue {
  double value = 0.0;
  double error_estimate = 0.0;  // |Q(2n) - Q(n)|
};

inline constexpr int kEkQuadratureNodes = 128;

/// K f(y) by quadrature after eta = 1/(1-s). `growth` is the declared
/// exponent nu with f(x) = O(x^nu) as x -> inf; the rule weights
/// s^(a-1) (1-s)^(c-nu/b-1), which needs c - nu/b > 0.
QuadratureValue ek_integral_quad(const std::function<double(double)>& f, const EKParams& params,
                                 double y, double growth = 0.0, int nodes = kEkQuadratureNodes);
/// Termwise quadrature of a power sum, each term with its own exponent as
/// the declared growth.
QuadratureValue ek_integral_quad(const GeneralizedPolynomial& f, const EKParams& params, double y,
                                 int nodes = kEkQuadratureNodes);
/// D f(y): the Euler-operator polynomial applied to the quadrature value of
/// the inner integral, with y d/dy taken by Richardson-extrapolated central
/// differences in log y.
QuadratureValue ek_diff_quad(const std::function<double(double)>& f, const EKParams& params,
                             double y, double growth = 0.0, int nodes = kEkQuadratureNodes);

// --- identities ----------------------------------------------------------

/// D^p_{x2} v(x1 x2^-alpha) = x2^-p (D^{1-p,p}_{1/alpha} v)(x1 x2^-alpha).
/// LHS: exact partial RL derivative of the composed bivariate power sum;
/// RHS: exact EK operator on v.
Discrepancy ek_reduction_identity_check(const GeneralizedPolynomial& v, double p, double alpha,
                                        const std::vector<Point2D>& points);

/// D^p_x [f(lambda x)] = lambda^p (D^p f)(lambda x).
Discrepancy scale_relation_check(const GeneralizedPolynomial& f, double p, double lambda,
                                 const std::vector<double>& points);

}  // namespace fracsym
