#include "fracsym/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracsym/errors.hpp"

namespace fracsym {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double nearest_integer(double x) { return std::nearbyint(x); }

double lanczos(double x) {
  // x >= 1/2 here
  const double xm1 = x - 1.0;
  double sum = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    sum += kLanczosCoeffs[i] / (xm1 + static_cast<double>(i));
  }
  const double t = xm1 + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, xm1 + 0.5) * std::exp(-t) * sum;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

bool is_gamma_pole(double x) {
  if (x > 0.5) return false;
  const double n = nearest_integer(x);
  return n <= 0.0 && std::abs(x - n) <= kPoleTolerance * std::max(1.0, std::abs(x));
}

double gamma(double x) {
  if (!std::isfinite(x)) {
    throw DomainError("gamma: non-finite argument");
  }
  if (is_gamma_pole(x)) {
    std::ostringstream os;
    os << "gamma: pole at " << x;
    throw DomainError(os.str());
  }
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos(1.0 - x));
  }
  return lanczos(x);
}

double rgamma(double x) {
  if (is_gamma_pole(x)) return 0.0;
  return 1.0 / gamma(x);
}

double gamma_ratio(double a, double b) {
  const bool pole_a = is_gamma_pole(a);
  const bool pole_b = is_gamma_pole(b);
  if (pole_a && pole_b) {
    // Gamma(-m + e) / Gamma(-n + e) -> (-1)^(m-n) n! / m!
    const int m = static_cast<int>(-nearest_integer(a));
    const int n = static_cast<int>(-nearest_integer(b));
    const double sign = ((m - n) % 2 == 0) ? 1.0 : -1.0;
    return sign * factorial(n) / factorial(m);
  }
  if (pole_a) {
    std::ostringstream os;
    os << "gamma_ratio: numerator pole at " << a;
    throw DomainError(os.str());
  }
  if (pole_b) return 0.0;
  return gamma(a) / gamma(b);
}

double binomial(double p, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) {
    c *= (p - i) / (i + 1);
  }
  return c;
}

}  // namespace fracsym
