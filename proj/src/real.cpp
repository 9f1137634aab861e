#include "pmdyn/real.hpp"

#include "pmdyn/errors.hpp"

#include <cctype>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace pmdyn {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::BoundaryHit: return "BoundaryHit";
    case ErrorCode::InadmissiblePrefix: return "InadmissiblePrefix";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NoCycle: return "NoCycle";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NotStronglyConnected: return "NotStronglyConnected";
    case ErrorCode::BrokenPath: return "BrokenPath";
    case ErrorCode::NoFixedPoint: return "NoFixedPoint";
    case ErrorCode::NoPeriodicOrbits: return "NoPeriodicOrbits";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::InadmissibleJunction: return "InadmissibleJunction";
    case ErrorCode::SpreadZero: return "SpreadZero";
    case ErrorCode::EntropyShortfall: return "EntropyShortfall";
  }
  return "Unknown";
}

Real Real::ratio(long num, long den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return Real(q);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

mpq_class parse_decimal(std::string_view s, std::string_view original) {
  auto fail = [&] { return Error(ErrorCode::Parse, "not a number: '" + std::string(original) + "'"); };
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    auto exp_text = s.substr(e + 1);
    bool exp_neg = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_neg = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) throw fail();
    exponent = std::stol(std::string(exp_text)) * (exp_neg ? -1 : 1);
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto int_part = s.substr(0, dot);
    auto frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) throw fail();
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
      throw fail();
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(s)) throw fail();
    digits = std::string(s);
  }
  mpz_class num(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  mpq_class q = exponent >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
  q.canonicalize();
  return negative ? mpq_class(-q) : q;
}

}  // namespace

Real Real::parse(std::string_view text) {
  auto s = trim(text);
  if (s.empty()) throw Error(ErrorCode::Parse, "empty number");
  if (s == "golden") return Real((1.0 + std::sqrt(5.0)) / 2.0);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = trim(s.substr(0, slash));
    auto den = trim(s.substr(slash + 1));
    mpq_class a = parse_decimal(num, text);
    mpq_class b = parse_decimal(den, text);
    if (b == 0) throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
    mpq_class q = a / b;
    q.canonicalize();
    return Real(q);
  }
  return Real(parse_decimal(s, text));
}

const mpq_class& Real::exact() const {
  if (!is_exact()) throw Error(ErrorCode::ModeMismatch, "value is not exact");
  return std::get<mpq_class>(value_);
}

double Real::to_double() const {
  if (is_exact()) return std::get<mpq_class>(value_).get_d();
  return std::get<double>(value_);
}

std::string Real::str() const {
  if (is_exact()) return std::get<mpq_class>(value_).get_str();
  std::ostringstream os;
  os << std::setprecision(17) << std::get<double>(value_);
  return os.str();
}

Real Real::operator-() const {
  if (is_exact()) return Real(mpq_class(-std::get<mpq_class>(value_)));
  return Real(-std::get<double>(value_));
}

Real& Real::operator+=(const Real& o) {
  if (is_exact() && o.is_exact())
    std::get<mpq_class>(value_) += std::get<mpq_class>(o.value_);
  else
    value_ = to_double() + o.to_double();
  return *this;
}

Real& Real::operator-=(const Real& o) {
  if (is_exact() && o.is_exact())
    std::get<mpq_class>(value_) -= std::get<mpq_class>(o.value_);
  else
    value_ = to_double() - o.to_double();
  return *this;
}

Real& Real::operator*=(const Real& o) {
  if (is_exact() && o.is_exact())
    std::get<mpq_class>(value_) *= std::get<mpq_class>(o.value_);
  else
    value_ = to_double() * o.to_double();
  return *this;
}

Real& Real::operator/=(const Real& o) {
  if (o.is_zero()) throw Error(ErrorCode::InvalidArgument, "division by zero");
  if (is_exact() && o.is_exact())
    std::get<mpq_class>(value_) /= std::get<mpq_class>(o.value_);
  else
    value_ = to_double() / o.to_double();
  return *this;
}

int compare(const Real& a, const Real& b) {
  if (a.is_exact() && b.is_exact()) {
    int c = cmp(std::get<mpq_class>(a.value_), std::get<mpq_class>(b.value_));
    return (c > 0) - (c < 0);
  }
  double x = a.to_double(), y = b.to_double();
  return (x > y) - (x < y);
}

int Real::sign() const {
  if (is_exact()) return sgn(std::get<mpq_class>(value_));
  double v = std::get<double>(value_);
  return (v > 0) - (v < 0);
}

Real abs(const Real& x) { return x.sign() < 0 ? -x : x; }
const Real& min(const Real& a, const Real& b) { return b < a ? b : a; }
const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.str(); }

bool NumericPolicy::eq(const Real& a, const Real& b) const {
  if (exact) return a == b;
  return std::fabs(a.to_double() - b.to_double()) <= compare_eps;
}

bool NumericPolicy::lt(const Real& a, const Real& b) const {
  if (exact) return a < b;
  return a.to_double() < b.to_double() - compare_eps;
}

bool NumericPolicy::le(const Real& a, const Real& b) const {
  if (exact) return a <= b;
  return a.to_double() <= b.to_double() + compare_eps;
}

bool NumericPolicy::same_vertex_coord(const Real& a, const Real& b) const {
  if (exact) return a == b;
  return std::fabs(a.to_double() - b.to_double()) <= dedup_eps;
}

}  // namespace pmdyn
