#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

namespace pmdyn {

/// A real number that is either an exact rational (GMP) or an IEEE double.
///
/// Arithmetic between two exact values stays exact; as soon as a double is
/// involved the result is a double. Comparisons are exact; tolerance-aware
/// comparisons live in NumericPolicy.
class Real {
public:
  Real() : value_(mpq_class(0)) {}
  Real(int v) : value_(mpq_class(v)) {}
  Real(long v) : value_(mpq_class(v)) {}
  Real(double v) : value_(v) {}
  Real(mpq_class v) : value_(std::move(v)) { std::get<mpq_class>(value_).canonicalize(); }

  static Real ratio(long num, long den);

  /// Parses "p/q", "-3", "1.8", "2.5e-3" exactly; "golden" yields the
  /// golden ratio as a double. Throws Error(Parse) on bad input.
  static Real parse(std::string_view text);

  bool is_exact() const { return std::holds_alternative<mpq_class>(value_); }
  const mpq_class& exact() const;
  double to_double() const;
  Real as_float() const { return Real(to_double()); }

  std::string str() const;

  Real operator-() const;
  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }

  friend int compare(const Real& a, const Real& b);
  friend bool operator==(const Real& a, const Real& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Real& a, const Real& b) { return compare(a, b) != 0; }
  friend bool operator<(const Real& a, const Real& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Real& a, const Real& b) { return compare(a, b) <= 0; }
  friend bool operator>(const Real& a, const Real& b) { return compare(a, b) > 0; }
  friend bool operator>=(const Real& a, const Real& b) { return compare(a, b) >= 0; }

  int sign() const;
  bool is_zero() const { return sign() == 0; }

private:
  std::variant<double, mpq_class> value_;
};

Real abs(const Real& x);
const Real& min(const Real& a, const Real& b);
const Real& max(const Real& a, const Real& b);

std::ostream& operator<<(std::ostream& os, const Real& x);

/// Tolerances used by a map in a given arithmetic mode. All zero when exact.
struct NumericPolicy {
  bool exact = true;
  double compare_eps = 0.0;
  double dedup_eps = 0.0;

  static NumericPolicy exact_mode() { return {}; }
  static NumericPolicy float_mode() { return {false, 1e-12, 1e-10}; }

  bool eq(const Real& a, const Real& b) const;
  bool lt(const Real& a, const Real& b) const;  // a < b beyond tolerance
  bool le(const Real& a, const Real& b) const;  // a <= b up to tolerance
  bool same_vertex_coord(const Real& a, const Real& b) const;
  Real coerce(const Real& x) const { return exact ? x : x.as_float(); }
};

}  // namespace pmdyn
