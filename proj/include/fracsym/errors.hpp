#pragma once

#include <stdexcept>
#include <string>

namespace fracsym {

// Input outside the mathematical domain of an operator (bad exponent, order,
// non-convergent integral, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Grid too small for the requested stencil.
class SizeError : public DomainError {
 public:
  explicit SizeError(const std::string& what) : DomainError(what) {}
};

// A numerical procedure failed (rank deficiency, non-finite intermediate).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// File missing, unreadable, or malformed.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fracsym
