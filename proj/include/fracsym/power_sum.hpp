#pragma once

// Exact finite sums of real power terms, closed under the Riemann-Liouville
// operators with terminal 0. These are the ground truth every numerical
// routine in the library is checked against.

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fracsym {

// Exponents closer than this (relative to max(1,|mu|)) are merged.
inline constexpr double kExponentMergeTolerance = 1e-12;
// Operators with a weakly singular kernel require mu > -1 + kExponentFloorMargin.
inline constexpr double kExponentFloorMargin = 1e-9;

bool exponents_equal(double a, double b);

struct PowerTerm {
  double coeff = 0.0;
  double exponent = 0.0;
};

/// Finite sum of terms c * t^mu, exponents strictly increasing.
///
/// Exponents below -1 are representable (they arise as derivatives of
/// integrable terms); applying a fractional operator to such a term is a
/// DomainError.
class GeneralizedPolynomial {
 public:
  GeneralizedPolynomial() = default;
  explicit GeneralizedPolynomial(std::vector<PowerTerm> terms, std::string variable = "t");

  static GeneralizedPolynomial constant(double c, std::string variable = "t");
  static GeneralizedPolynomial monomial(double c, double exponent, std::string variable = "t");

  const std::vector<PowerTerm>& terms() const { return terms_; }
  const std::string& variable() const { return variable_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  double operator()(double t) const;
  double min_exponent() const;
  double max_exponent() const;

  GeneralizedPolynomial with_variable(std::string variable) const;

  GeneralizedPolynomial& operator+=(const GeneralizedPolynomial& other);
  GeneralizedPolynomial& operator-=(const GeneralizedPolynomial& other);
  GeneralizedPolynomial& operator*=(double s);

  friend GeneralizedPolynomial operator+(GeneralizedPolynomial a, const GeneralizedPolynomial& b) {
    return a += b;
  }
  friend GeneralizedPolynomial operator-(GeneralizedPolynomial a, const GeneralizedPolynomial& b) {
    return a -= b;
  }
  friend GeneralizedPolynomial operator*(GeneralizedPolynomial a, double s) { return a *= s; }
  friend GeneralizedPolynomial operator*(double s, GeneralizedPolynomial a) { return a *= s; }
  friend GeneralizedPolynomial operator*(const GeneralizedPolynomial& a,
                                         const GeneralizedPolynomial& b);
  friend GeneralizedPolynomial operator-(GeneralizedPolynomial a) { return a *= -1.0; }

 private:
  void normalize();

  std::vector<PowerTerm> terms_;
  std::string variable_ = "t";
};

GeneralizedPolynomial gp_mul(const GeneralizedPolynomial& f, const GeneralizedPolynomial& g);
double gp_eval(const GeneralizedPolynomial& f, double t);

/// RL derivative of order p >= 0 with terminal 0, termwise
/// c t^mu -> c Gamma(mu+1)/Gamma(mu+1-p) t^(mu-p). Non-integer p requires
/// every mu > -1; integer p is the classical derivative and accepts any mu.
GeneralizedPolynomial gp_rl_deriv(const GeneralizedPolynomial& f, double p);
/// RL integral of order p > 0 with terminal 0.
GeneralizedPolynomial gp_rl_integral(const GeneralizedPolynomial& f, double p);
/// Classical k-th derivative; valid for every exponent.
GeneralizedPolynomial gp_diff(const GeneralizedPolynomial& f, int k);
/// t -> f(lambda t).
GeneralizedPolynomial gp_rescale(const GeneralizedPolynomial& f, double lambda);
/// Multiply by c t^mu.
GeneralizedPolynomial gp_mul_monomial(const GeneralizedPolynomial& f, double c, double mu);

/// Text form: sum of `c*t^m` terms, e.g. "1.0*t^0.5 + -2.0*t^1.25".
GeneralizedPolynomial parse_gp(std::string_view text);
std::string format_gp(const GeneralizedPolynomial& f, int significant_digits = 17);

// ---------------------------------------------------------------------------

struct BivariateTerm {
  double coeff = 0.0;
  double exp1 = 0.0;  // power of x1
  double exp2 = 0.0;  // power of x2
};

/// Finite sum of terms c * x1^mu1 * x2^mu2.
class BivariatePowerSum {
 public:
  BivariatePowerSum() = default;
  explicit BivariatePowerSum(std::vector<BivariateTerm> terms);

  static BivariatePowerSum constant(double c);
  static BivariatePowerSum monomial(double c, double exp1, double exp2);
  /// x_axis as a power sum (axis in {1, 2}).
  static BivariatePowerSum coordinate(int axis);

  const std::vector<BivariateTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  double operator()(double x1, double x2) const;

  BivariatePowerSum& operator+=(const BivariatePowerSum& other);
  BivariatePowerSum& operator-=(const BivariatePowerSum& other);
  BivariatePowerSum& operator*=(double s);

  friend BivariatePowerSum operator+(BivariatePowerSum a, const BivariatePowerSum& b) {
    return a += b;
  }
  friend BivariatePowerSum operator-(BivariatePowerSum a, const BivariatePowerSum& b) {
    return a -= b;
  }
  friend BivariatePowerSum operator*(BivariatePowerSum a, double s) { return a *= s; }
  friend BivariatePowerSum operator*(double s, BivariatePowerSum a) { return a *= s; }
  friend BivariatePowerSum operator*(const BivariatePowerSum& a, const BivariatePowerSum& b);
  friend BivariatePowerSum operator-(BivariatePowerSum a) { return a *= -1.0; }

 private:
  void normalize();
  std::vector<BivariateTerm> terms_;
};

/// Partial RL derivative of order p >= 0 along axis (1 or 2), terminal 0.
BivariatePowerSum partial_rl_deriv(const BivariatePowerSum& u, int axis, double p);
BivariatePowerSum partial_rl_integral(const BivariatePowerSum& u, int axis, double p);
/// Classical partial derivative of integer order k.
BivariatePowerSum partial_diff(const BivariatePowerSum& u, int axis, int k);
/// (x1, x2) -> u(s1 x1, s2 x2).
BivariatePowerSum rescale(const BivariatePowerSum& u, double s1, double s2);

/// Text form with variables x1, x2: "2*x1^0.5*x2^1.5 + -1*x2".
BivariatePowerSum parse_bivariate(std::string_view text);
std::string format_bivariate(const BivariatePowerSum& u, int significant_digits = 17);

/// Separable product f(x1) g(x2).
BivariatePowerSum outer(const GeneralizedPolynomial& f, const GeneralizedPolynomial& g);

}  // namespace fracsym
