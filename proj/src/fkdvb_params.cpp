#include "fracsym/fkdvb_params.hpp"

#include <sstream>

#include "fracsym/errors.hpp"

namespace fracsym {

FkdvbParams::FkdvbParams(double p_, double q_, double r_, bool allow_integer)
    : p(p_), q(q_), r(r_) {
  if (!(p_ > 0.0) || !(q_ > 0.0) || !(r_ > 0.0)) {
    throw DomainError("fKdV-Burgers orders p, q, r must be > 0");
  }
  if (q_ > r_) {
    std::ostringstream os;
    os << "fKdV-Burgers orders need q <= r (got q = " << q_ << ", r = " << r_ << ")";
    throw DomainError(os.str());
  }
  const bool any_integer = p.is_integer() || q.is_integer() || r.is_integer();
  if (any_integer) {
    if (!allow_integer) {
      std::ostringstream os;
      os << "orders must be non-integer reals (p, q, r in R\\Z); got p = " << p_ << ", q = " << q_
         << ", r = " << r_;
      throw DomainError(os.str());
    }
    branch = Branch::Classical;
  } else {
    branch = q_ == r_ ? Branch::QEqualsR : Branch::QLessR;
  }
}

std::string to_string(FkdvbParams::Branch b) {
  switch (b) {
    case FkdvbParams::Branch::QLessR: return "q<r";
    case FkdvbParams::Branch::QEqualsR: return "q=r";
    case FkdvbParams::Branch::Classical: return "classical";
  }
  return "unknown";
}

}  // namespace fracsym
