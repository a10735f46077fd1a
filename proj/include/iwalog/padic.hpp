#pragma once

#include <gmpxx.h>

#include <string>

#include "iwalog/errors.hpp"

namespace iwalog {

inline constexpr int kDefaultPrecision = 64;

// Stand-in for "infinite" absolute precision (exact zeros).
inline constexpr int kInfinitePrecision = 1 << 28;

/// p^k for k >= 0. References stay valid for the life of the process.
const mpz_class& prime_power(unsigned p, int k);

/// Divides out every factor of p from a nonzero x and returns how many were removed.
int strip_prime(mpz_class& x, unsigned p);

/// v_p(x) for nonzero x.
int integer_valuation(const mpz_class& x, unsigned p);

/// Euler phi of p^r (1 when r == 0).
long phi_prime_power(unsigned p, int r);

bool is_odd_prime(unsigned p);

/// A valuation that is either exact (rational), only known to be at least a bound,
/// or infinite (the element is an exact zero).
class Valuation {
 public:
  enum class Kind { Exact, AtLeast, Infinite };

  static Valuation exact(const mpq_class& v) { return Valuation(Kind::Exact, v); }
  static Valuation at_least(const mpq_class& bound) { return Valuation(Kind::AtLeast, bound); }
  static Valuation infinite() { return Valuation(Kind::Infinite, 0); }

  Kind kind() const { return kind_; }
  bool is_exact() const { return kind_ == Kind::Exact; }
  /// The exact value, or the lower bound for AtLeast. Meaningless for Infinite.
  const mpq_class& value() const { return value_; }

  /// True when the valuation is known to be >= t.
  bool at_least_threshold(const mpq_class& t) const {
    return kind_ == Kind::Infinite || value_ >= t;
  }

  /// "1/3", ">=64" or "inf".
  std::string to_string() const;

  friend bool operator==(const Valuation& a, const Valuation& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ == Kind::Infinite || a.value_ == b.value_;
  }

 private:
  Valuation(Kind k, const mpq_class& v) : kind_(k), value_(v) { value_.canonicalize(); }
  Kind kind_;
  mpq_class value_;
};

/// An element of Q_p known modulo p^N (absolute precision N).
///
/// Three states: a nonzero value p^v * u with u a unit known modulo p^(N - v);
/// a value indistinguishable from zero at precision N; or an exact zero, which
/// only arises from exact zero inputs and absorbs multiplication.
class PAdicScalar {
 public:
  static PAdicScalar exact_zero(unsigned p);
  static PAdicScalar zero(unsigned p, int precision);
  /// n known modulo p^precision; n == 0 gives a precision zero.
  static PAdicScalar from_integer(unsigned p, const mpz_class& n, int precision = kDefaultPrecision);
  /// Same, but n == 0 gives an exact zero (used for structural input data).
  static PAdicScalar from_exact_integer(unsigned p, const mpz_class& n,
                                        int precision = kDefaultPrecision);
  static PAdicScalar from_rational(unsigned p, const mpq_class& q, int precision = kDefaultPrecision);
  /// p^valuation * unit; unit must not be divisible by p.
  static PAdicScalar from_parts(unsigned p, int valuation, const mpz_class& unit, int precision);

  unsigned prime() const { return p_; }
  int precision() const { return prec_; }
  bool is_exact_zero() const { return exact_zero_; }
  /// Zero at working precision (includes exact zeros).
  bool is_zero() const { return exact_zero_ || zero_; }
  bool is_unit() const { return !is_zero() && val_ == 0; }

  Valuation valuation() const;
  /// The valuation, or the precision when the value is zero at precision.
  int valuation_lower_bound() const;
  const mpz_class& unit() const { return unit_; }

  /// Representative of the value in [0, p^N) for integral values.
  mpz_class residue() const;

  PAdicScalar operator-() const;
  PAdicScalar inverse() const;
  /// Truncates to a lower absolute precision (never raises it).
  PAdicScalar with_precision(int precision) const;

  /// Equality modulo p^min(precisions).
  bool equals_to_precision(const PAdicScalar& other) const;

  /// Base-p digits of the unit part, most significant first.
  std::string unit_digits() const;
  /// "val|digits|N" serialization used in reports; "exact0" for exact zeros.
  std::string serialize() const;
  std::string to_string() const;

  friend PAdicScalar operator+(const PAdicScalar& a, const PAdicScalar& b);
  friend PAdicScalar operator-(const PAdicScalar& a, const PAdicScalar& b);
  friend PAdicScalar operator*(const PAdicScalar& a, const PAdicScalar& b);
  friend PAdicScalar operator/(const PAdicScalar& a, const PAdicScalar& b);
  PAdicScalar& operator+=(const PAdicScalar& b) { return *this = *this + b; }
  PAdicScalar& operator-=(const PAdicScalar& b) { return *this = *this - b; }
  PAdicScalar& operator*=(const PAdicScalar& b) { return *this = *this * b; }

 private:
  PAdicScalar(unsigned p, int prec) : p_(p), prec_(prec) {}
  void normalize();

  unsigned p_ = 0;
  int prec_ = 0;
  int val_ = 0;
  bool zero_ = false;
  bool exact_zero_ = false;
  mpz_class unit_ = 0;
};

enum class ArithOp { Add, Sub, Mul };

PAdicScalar scalar_arith(const PAdicScalar& a, const PAdicScalar& b, ArithOp op);
PAdicScalar scalar_invert(const PAdicScalar& a);
Valuation scalar_valuation(const PAdicScalar& a);

// Ring hooks used by the generic matrix routines.
inline bool is_exact_zero(const PAdicScalar& x) { return x.is_exact_zero(); }
inline PAdicScalar exact_zero_like(const PAdicScalar& x) { return PAdicScalar::exact_zero(x.prime()); }
inline PAdicScalar one_like(const PAdicScalar& x) {
  return PAdicScalar::from_integer(x.prime(), 1, x.is_exact_zero() ? kDefaultPrecision : x.precision());
}

}  // namespace iwalog
