#pragma once

namespace fracsym {

// Tolerance used to decide that a Gamma argument sits on a pole.
inline constexpr double kPoleTolerance = 1e-12;

/// True if x is a non-positive integer (within kPoleTolerance).
bool is_gamma_pole(double x);

/// Gamma function, Lanczos approximation (g = 7, 9 terms) with reflection
/// for x < 1/2. Throws DomainError at the poles.
double gamma(double x);

/// 1/Gamma(x); exactly 0 at non-positive integers.
double rgamma(double x);

/// Gamma(a)/Gamma(b). Finite limit when both a and b are poles; 0 when only
/// b is a pole; DomainError when only a is a pole.
double gamma_ratio(double a, double b);

/// Generalized binomial coefficient C(p, k) for real p and integer k >= 0.
double binomial(double p, int k);

}  // namespace fracsym
