#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// library: integrals are done by tanh-sinh quadrature straight from the
// operator definitions and Gamma values come from std::tgamma.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

/// Tanh-sinh quadrature of f over [a, b]. f is called as f(x, x - a, b - x)
/// with the endpoint distances computed without cancellation, so integrable
/// endpoint singularities can be evaluated accurately.
inline double tanh_sinh(const std::function<double(double, double, double)>& f, double a, double b,
                        int level = 7, double tmax = 4.0) {
  const double half = 0.5 * (b - a);
  const double step = std::ldexp(1.0, -level);
  const double pi2 = 0.5 * std::numbers::pi;
  double sum = 0.0;
  const int n = static_cast<int>(tmax / step);
  for (int k = -n; k <= n; ++k) {
    const double t = k * step;
    const double u = pi2 * std::sinh(t);
    const double ch = std::cosh(u);
    const double w = pi2 * std::cosh(t) / (ch * ch);
    // 1 - tanh(u) and 1 + tanh(u) without cancellation.
    const double e = std::exp(-2.0 * std::abs(u));
    const double small = 2.0 * e / (1.0 + e);
    const double one_minus = u >= 0 ? small : 2.0 - small;
    const double one_plus = u >= 0 ? 2.0 - small : small;
    const double da = half * one_plus;
    const double db = half * one_minus;
    if (da <= 0.0 || db <= 0.0) continue;
    const double x = u >= 0 ? b - db : a + da;
    sum += w * f(x, da, db);
  }
  return sum * half * step;
}

/// I^p f(t) with terminal 0, from the integral definition.
inline double rl_integral(const std::function<double(double)>& f, double p, double t) {
  auto g = [&](double s, double, double dt) { return std::pow(dt, p - 1.0) * f(s); };
  return tanh_sinh(g, 0.0, t) / std::tgamma(p);
}

/// I^p t^mu at t, with the integrand's power singularity handled analytically
/// by the quadrature's endpoint distances.
inline double rl_integral_power(double mu, double p, double t) {
  auto g = [&](double, double ds, double dt) { return std::pow(dt, p - 1.0) * std::pow(ds, mu); };
  return tanh_sinh(g, 0.0, t) / std::tgamma(p);
}

/// k-th derivative of F at t: central differences with step h, one
/// Richardson extrapolation (h, h/2).
inline double derivative(const std::function<double(double)>& F, double t, int k, double h) {
  auto cd = [&](double s) {
    switch (k) {
      case 0: return F(t);
      case 1: return (F(t + s) - F(t - s)) / (2 * s);
      case 2: return (F(t + s) - 2 * F(t) + F(t - s)) / (s * s);
      case 3: return (F(t + 2 * s) - 2 * F(t + s) + 2 * F(t - s) - F(t - 2 * s)) / (2 * s * s * s);
      default: return std::nan("");
    }
  };
  return (4.0 * cd(h / 2) - cd(h)) / 3.0;
}

/// D^p t^mu at t: ([p]+1)-th derivative of the quadrature value of
/// I^([p]+1-p) t^mu.
inline double rl_deriv_power(double mu, double p, double t) {
  const int k = static_cast<int>(std::floor(p)) + 1;
  const double nu = k - p;
  return derivative([&](double s) { return rl_integral_power(mu, nu, s); }, t, k, 1e-2 * t);
}

/// Erdelyi-Kober integral of y^mu at y from the definition, after
/// eta = 1/(1-s): (1/Gamma(a)) int_0^1 s^(a-1) (1-s)^(c-1) (y (1-s)^(-1/b))^mu ds.
inline double ek_integral_power(double mu, double c, double a, double b, double y) {
  auto g = [&](double, double s, double one_minus_s) {
    return std::pow(s, a - 1.0) * std::pow(one_minus_s, c - 1.0 - mu / b);
  };
  return std::pow(y, mu) * tanh_sinh(g, 0.0, 1.0) / std::tgamma(a);
}

/// Same integral for an arbitrary callable f.
inline double ek_integral(const std::function<double(double)>& f, double c, double a, double b,
                          double y) {
  auto g = [&](double, double s, double one_minus_s) {
    return std::pow(s, a - 1.0) * std::pow(one_minus_s, c - 1.0) * f(y * std::pow(one_minus_s, -1.0 / b));
  };
  return tanh_sinh(g, 0.0, 1.0) / std::tgamma(a);
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace oracle
