#include "fracsym/power_sum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "fracsym/errors.hpp"
#include "fracsym/special.hpp"

namespace fracsym {

bool exponents_equal(double a, double b) {
  return std::abs(a - b) <= kExponentMergeTolerance * std::max(1.0, std::abs(a));
}

namespace {

bool is_integer_order(double p) { return p == std::floor(p); }

// Gamma(mu+1)/Gamma(mu+1-p); falling factorial for integer p.
double power_rule_factor(double mu, double p) {
  if (p == 0.0) return 1.0;
  if (is_integer_order(p) && p > 0.0) {
    double f = 1.0;
    for (int i = 0; i < static_cast<int>(p); ++i) f *= (mu - i);
    return f;
  }
  return gamma_ratio(mu + 1.0, mu + 1.0 - p);
}

void require_integrable(double mu, double coeff, const char* op) {
  if (!(mu > -1.0 + kExponentFloorMargin)) {
    std::ostringstream os;
    os << op << ": term " << coeff << "*t^" << mu
       << " has exponent <= -1 (kernel not integrable at the terminal)";
    throw DomainError(os.str());
  }
}

double checked_pow(double t, double mu) {
  if (t > 0.0) return std::pow(t, mu);
  if (t == 0.0) {
    if (mu > 0.0) return 0.0;
    if (mu == 0.0) return 1.0;
  }
  std::ostringstream os;
  os << "power term t^" << mu << " evaluated at t = " << t;
  throw DomainError(os.str());
}

std::string format_number(double x, int digits) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

// --- text parsing ----------------------------------------------------------

struct ParsedTerm {
  double coeff = 1.0;
  std::map<std::string, double> powers;
};

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  std::vector<ParsedTerm> parse() {
    std::vector<ParsedTerm> out;
    skip_ws();
    if (at_end()) throw DomainError("empty expression");
    double sign = 1.0;
    while (true) {
      skip_ws();
      while (peek() == '+' || peek() == '-') {
        if (get() == '-') sign = -sign;
        skip_ws();
      }
      ParsedTerm term = parse_term();
      term.coeff *= sign;
      out.push_back(std::move(term));
      skip_ws();
      if (at_end()) break;
      const char c = get();
      if (c == '+') {
        sign = 1.0;
      } else if (c == '-') {
        sign = -1.0;
      } else {
        fail("expected '+' or '-'");
      }
    }
    return out;
  }

 private:
  ParsedTerm parse_term() {
    ParsedTerm term;
    parse_factor(term);
    while (true) {
      skip_ws();
      if (peek() != '*') break;
      get();
      parse_factor(term);
    }
    return term;
  }

  void parse_factor(ParsedTerm& term) {
    skip_ws();
    double sign = 1.0;
    while (peek() == '-' || peek() == '+') {
      if (get() == '-') sign = -sign;
      skip_ws();
    }
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      term.coeff *= sign * parse_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      term.coeff *= sign;
      std::string name;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
        name.push_back(get());
      }
      skip_ws();
      double power = 1.0;
      if (peek() == '^') {
        get();
        skip_ws();
        double psign = 1.0;
        while (peek() == '-' || peek() == '+') {
          if (get() == '-') psign = -psign;
          skip_ws();
        }
        if (peek() == '(') {
          get();
          skip_ws();
          while (peek() == '-' || peek() == '+') {
            if (get() == '-') psign = -psign;
            skip_ws();
          }
          power = psign * parse_number();
          skip_ws();
          if (get() != ')') fail("expected ')'");
        } else {
          power = psign * parse_number();
        }
      }
      term.powers[name] += power;
      return;
    }
    fail("expected a number or a variable");
  }

  double parse_number() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) ++pos_;
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (!at_end() && (peek() == '+' || peek() == '-')) ++pos_;
      if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
      pos_ = start;
      fail("malformed number");
    }
    return value;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  char get() { return at_end() ? '\0' : text_[pos_++]; }

  [[noreturn]] void fail(const char* msg) const {
    std::ostringstream os;
    os << "parse error at column " << pos_ + 1 << ": " << msg << " in \"" << text_ << "\"";
    throw DomainError(os.str());
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

// --- GeneralizedPolynomial ------------------------------------------------

GeneralizedPolynomial::GeneralizedPolynomial(std::vector<PowerTerm> terms, std::string variable)
    : terms_(std::move(terms)), variable_(std::move(variable)) {
  normalize();
}

GeneralizedPolynomial GeneralizedPolynomial::constant(double c, std::string variable) {
  return GeneralizedPolynomial({{c, 0.0}}, std::move(variable));
}

GeneralizedPolynomial GeneralizedPolynomial::monomial(double c, double exponent,
                                                      std::string variable) {
  return GeneralizedPolynomial({{c, exponent}}, std::move(variable));
}

void GeneralizedPolynomial::normalize() {
  for (const auto& t : terms_) {
    if (!std::isfinite(t.coeff) || !std::isfinite(t.exponent)) {
      throw DomainError("generalized polynomial: non-finite coefficient or exponent");
    }
  }
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
  std::vector<PowerTerm> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!merged.empty() && exponents_equal(merged.back().exponent, t.exponent)) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const PowerTerm& t) { return t.coeff == 0.0; });
  terms_ = std::move(merged);
}

double GeneralizedPolynomial::operator()(double t) const {
  double sum = 0.0;
  for (const auto& term : terms_) sum += term.coeff * checked_pow(t, term.exponent);
  return sum;
}

double GeneralizedPolynomial::min_exponent() const {
  if (terms_.empty()) throw DomainError("min_exponent of the zero polynomial");
  return terms_.front().exponent;
}

double GeneralizedPolynomial::max_exponent() const {
  if (terms_.empty()) throw DomainError("max_exponent of the zero polynomial");
  return terms_.back().exponent;
}

GeneralizedPolynomial GeneralizedPolynomial::with_variable(std::string variable) const {
  GeneralizedPolynomial out = *this;
  out.variable_ = std::move(variable);
  return out;
}

GeneralizedPolynomial& GeneralizedPolynomial::operator+=(const GeneralizedPolynomial& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  normalize();
  return *this;
}

GeneralizedPolynomial& GeneralizedPolynomial::operator-=(const GeneralizedPolynomial& other) {
  for (const auto& t : other.terms_) terms_.push_back({-t.coeff, t.exponent});
  normalize();
  return *this;
}

GeneralizedPolynomial& GeneralizedPolynomial::operator*=(double s) {
  for (auto& t : terms_) t.coeff *= s;
  normalize();
  return *this;
}

GeneralizedPolynomial operator*(const GeneralizedPolynomial& a, const GeneralizedPolynomial& b) {
  std::vector<PowerTerm> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) terms.push_back({x.coeff * y.coeff, x.exponent + y.exponent});
  }
  return GeneralizedPolynomial(std::move(terms), a.variable_);
}

GeneralizedPolynomial gp_mul(const GeneralizedPolynomial& f, const GeneralizedPolynomial& g) {
  return f * g;
}

double gp_eval(const GeneralizedPolynomial& f, double t) { return f(t); }

GeneralizedPolynomial gp_rl_deriv(const GeneralizedPolynomial& f, double p) {
  if (!(p >= 0.0) || !std::isfinite(p)) {
    throw DomainError("gp_rl_deriv: order must be finite and >= 0 (use gp_rl_integral)");
  }
  if (p == 0.0) return f;
  std::vector<PowerTerm> out;
  out.reserve(f.size());
  for (const auto& t : f.terms()) {
    if (!is_integer_order(p)) require_integrable(t.exponent, t.coeff, "gp_rl_deriv");
    out.push_back({t.coeff * power_rule_factor(t.exponent, p), t.exponent - p});
  }
  return GeneralizedPolynomial(std::move(out), f.variable());
}

GeneralizedPolynomial gp_rl_integral(const GeneralizedPolynomial& f, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw DomainError("gp_rl_integral: order must be finite and > 0");
  }
  std::vector<PowerTerm> out;
  out.reserve(f.size());
  for (const auto& t : f.terms()) {
    require_integrable(t.exponent, t.coeff, "gp_rl_integral");
    out.push_back({t.coeff * gamma_ratio(t.exponent + 1.0, t.exponent + 1.0 + p), t.exponent + p});
  }
  return GeneralizedPolynomial(std::move(out), f.variable());
}

GeneralizedPolynomial gp_diff(const GeneralizedPolynomial& f, int k) {
  if (k < 0) throw DomainError("gp_diff: negative order");
  std::vector<PowerTerm> out;
  for (const auto& t : f.terms()) {
    out.push_back({t.coeff * power_rule_factor(t.exponent, k), t.exponent - k});
  }
  return GeneralizedPolynomial(std::move(out), f.variable());
}

GeneralizedPolynomial gp_rescale(const GeneralizedPolynomial& f, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("gp_rescale: scale must be > 0");
  std::vector<PowerTerm> out;
  for (const auto& t : f.terms()) out.push_back({t.coeff * std::pow(lambda, t.exponent), t.exponent});
  return GeneralizedPolynomial(std::move(out), f.variable());
}

GeneralizedPolynomial gp_mul_monomial(const GeneralizedPolynomial& f, double c, double mu) {
  std::vector<PowerTerm> out;
  for (const auto& t : f.terms()) out.push_back({t.coeff * c, t.exponent + mu});
  return GeneralizedPolynomial(std::move(out), f.variable());
}

GeneralizedPolynomial parse_gp(std::string_view text) {
  auto parsed = TermParser(text).parse();
  std::string variable;
  std::vector<PowerTerm> terms;
  for (const auto& pt : parsed) {
    double exponent = 0.0;
    for (const auto& [name, power] : pt.powers) {
      if (!variable.empty() && name != variable) {
        throw DomainError("parse_gp: more than one variable (" + variable + ", " + name + ")");
      }
      variable = name;
      exponent += power;
    }
    terms.push_back({pt.coeff, exponent});
  }
  return GeneralizedPolynomial(std::move(terms), variable.empty() ? "t" : variable);
}

std::string format_gp(const GeneralizedPolynomial& f, int significant_digits) {
  if (f.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < f.terms().size(); ++i) {
    const auto& t = f.terms()[i];
    if (i > 0) out += " + ";
    out += format_number(t.coeff, significant_digits);
    if (t.exponent != 0.0) {
      out += "*" + f.variable() + "^" + format_number(t.exponent, significant_digits);
    }
  }
  return out;
}

// --- BivariatePowerSum ----------------------------------------------------

BivariatePowerSum::BivariatePowerSum(std::vector<BivariateTerm> terms) : terms_(std::move(terms)) {
  normalize();
}

BivariatePowerSum BivariatePowerSum::constant(double c) { return BivariatePowerSum({{c, 0.0, 0.0}}); }

BivariatePowerSum BivariatePowerSum::monomial(double c, double exp1, double exp2) {
  return BivariatePowerSum({{c, exp1, exp2}});
}

BivariatePowerSum BivariatePowerSum::coordinate(int axis) {
  if (axis == 1) return monomial(1.0, 1.0, 0.0);
  if (axis == 2) return monomial(1.0, 0.0, 1.0);
  throw DomainError("axis must be 1 or 2");
}

void BivariatePowerSum::normalize() {
  for (const auto& t : terms_) {
    if (!std::isfinite(t.coeff) || !std::isfinite(t.exp1) || !std::isfinite(t.exp2)) {
      throw DomainError("bivariate power sum: non-finite coefficient or exponent");
    }
  }
  std::stable_sort(terms_.begin(), terms_.end(), [](const BivariateTerm& a, const BivariateTerm& b) {
    if (a.exp1 != b.exp1) return a.exp1 < b.exp1;
    return a.exp2 < b.exp2;
  });
  std::vector<BivariateTerm> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const BivariateTerm& m) {
      return exponents_equal(m.exp1, t.exp1) && exponents_equal(m.exp2, t.exp2);
    });
    if (it != merged.end()) {
      it->coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const BivariateTerm& t) { return t.coeff == 0.0; });
  terms_ = std::move(merged);
}

double BivariatePowerSum::operator()(double x1, double x2) const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += t.coeff * checked_pow(x1, t.exp1) * checked_pow(x2, t.exp2);
  return sum;
}

BivariatePowerSum& BivariatePowerSum::operator+=(const BivariatePowerSum& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  normalize();
  return *this;
}

BivariatePowerSum& BivariatePowerSum::operator-=(const BivariatePowerSum& other) {
  for (const auto& t : other.terms_) terms_.push_back({-t.coeff, t.exp1, t.exp2});
  normalize();
  return *this;
}

BivariatePowerSum& BivariatePowerSum::operator*=(double s) {
  for (auto& t : terms_) t.coeff *= s;
  normalize();
  return *this;
}

BivariatePowerSum operator*(const BivariatePowerSum& a, const BivariatePowerSum& b) {
  std::vector<BivariateTerm> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      terms.push_back({x.coeff * y.coeff, x.exp1 + y.exp1, x.exp2 + y.exp2});
    }
  }
  return BivariatePowerSum(std::move(terms));
}

namespace {

void check_axis(int axis) {
  if (axis != 1 && axis != 2) throw DomainError("axis must be 1 or 2");
}

}  // namespace

BivariatePowerSum partial_rl_deriv(const BivariatePowerSum& u, int axis, double p) {
  check_axis(axis);
  if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("partial_rl_deriv: order must be >= 0");
  if (p == 0.0) return u;
  std::vector<BivariateTerm> out;
  for (const auto& t : u.terms()) {
    const double mu = axis == 1 ? t.exp1 : t.exp2;
    if (!is_integer_order(p)) require_integrable(mu, t.coeff, "partial_rl_deriv");
    BivariateTerm r = t;
    r.coeff *= power_rule_factor(mu, p);
    (axis == 1 ? r.exp1 : r.exp2) -= p;
    out.push_back(r);
  }
  return BivariatePowerSum(std::move(out));
}

BivariatePowerSum partial_rl_integral(const BivariatePowerSum& u, int axis, double p) {
  check_axis(axis);
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("partial_rl_integral: order must be > 0");
  std::vector<BivariateTerm> out;
  for (const auto& t : u.terms()) {
    const double mu = axis == 1 ? t.exp1 : t.exp2;
    require_integrable(mu, t.coeff, "partial_rl_integral");
    BivariateTerm r = t;
    r.coeff *= gamma_ratio(mu + 1.0, mu + 1.0 + p);
    (axis == 1 ? r.exp1 : r.exp2) += p;
    out.push_back(r);
  }
  return BivariatePowerSum(std::move(out));
}

BivariatePowerSum partial_diff(const BivariatePowerSum& u, int axis, int k) {
  check_axis(axis);
  if (k < 0) throw DomainError("partial_diff: negative order");
  std::vector<BivariateTerm> out;
  for (const auto& t : u.terms()) {
    const double mu = axis == 1 ? t.exp1 : t.exp2;
    BivariateTerm r = t;
    r.coeff *= power_rule_factor(mu, k);
    (axis == 1 ? r.exp1 : r.exp2) -= k;
    out.push_back(r);
  }
  return BivariatePowerSum(std::move(out));
}

BivariatePowerSum rescale(const BivariatePowerSum& u, double s1, double s2) {
  if (!(s1 > 0.0) || !(s2 > 0.0)) throw DomainError("rescale: factors must be > 0");
  std::vector<BivariateTerm> out;
  for (const auto& t : u.terms()) {
    out.push_back({t.coeff * std::pow(s1, t.exp1) * std::pow(s2, t.exp2), t.exp1, t.exp2});
  }
  return BivariatePowerSum(std::move(out));
}

BivariatePowerSum parse_bivariate(std::string_view text) {
  auto parsed = TermParser(text).parse();
  std::vector<BivariateTerm> terms;
  for (const auto& pt : parsed) {
    BivariateTerm t{pt.coeff, 0.0, 0.0};
    for (const auto& [name, power] : pt.powers) {
      if (name == "x1") {
        t.exp1 += power;
      } else if (name == "x2") {
        t.exp2 += power;
      } else {
        throw DomainError("parse_bivariate: unknown variable '" + name + "' (use x1, x2)");
      }
    }
    terms.push_back(t);
  }
  return BivariatePowerSum(std::move(terms));
}

std::string format_bivariate(const BivariatePowerSum& u, int significant_digits) {
  if (u.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < u.terms().size(); ++i) {
    const auto& t = u.terms()[i];
    if (i > 0) out += " + ";
    out += format_number(t.coeff, significant_digits);
    if (t.exp1 != 0.0) out += "*x1^" + format_number(t.exp1, significant_digits);
    if (t.exp2 != 0.0) out += "*x2^" + format_number(t.exp2, significant_digits);
  }
  return out;
}

BivariatePowerSum outer(const GeneralizedPolynomial& f, const GeneralizedPolynomial& g) {
  std::vector<BivariateTerm> terms;
  for (const auto& a : f.terms()) {
    for (const auto& b : g.terms()) terms.push_back({a.coeff * b.coeff, a.exponent, b.exponent});
  }
  return BivariatePowerSum(std::move(terms));
}

}  // namespace fracsym
