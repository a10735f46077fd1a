#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iwalog/cyclotomic.hpp"
#include "iwalog/detail/scaled_vector.hpp"
#include "iwalog/padic.hpp"

namespace iwalog {

enum class Var { X, Y };

const char* var_name(Var v);

/// w = (w1, w2) with w1 = zeta_{p^r}^a, w2 = zeta_{p^s}^b (order exponent 0 means the coordinate is 1).
struct CharacterPoint {
  unsigned p = 3;
  int r = 0;
  int s = 0;
  long a = 1;
  long b = 1;

  static CharacterPoint make(unsigned p, int r, int s, long a = 1, long b = 1);
  static CharacterPoint trivial(unsigned p) { return make(p, 0, 0); }

  int level() const { return r > s ? r : s; }
  int order(Var v) const { return v == Var::X ? r : s; }
  long exponent(Var v) const { return v == Var::X ? a : b; }
  /// "p^{r+1}(p^c)^{s+1}" in the usual normalization.
  std::string conductor() const;
  std::string to_string() const;
};

struct PolyTerm {
  int i = 0;
  int j = 0;
  PAdicScalar coeff;
};

/// Polynomial in X, Y over Z_p/Q_p with a common absolute precision.
///
/// Dense storage: coefficient of X^i Y^j sits at j * nx + i. A polynomial whose
/// storage is an exact zero is the symbolic zero.
class IwasawaPoly {
 public:
  /// Products with no caps beyond this many dense terms raise CapOverflowError.
  static constexpr long kMaxDenseTerms = 1L << 24;

  static IwasawaPoly exact_zero(unsigned p);
  static IwasawaPoly zero(unsigned p, int precision);
  static IwasawaPoly constant(const PAdicScalar& c);
  static IwasawaPoly from_integer(unsigned p, const mpz_class& n, int precision = kDefaultPrecision);
  static IwasawaPoly variable(unsigned p, Var v, int precision = kDefaultPrecision);
  static IwasawaPoly monomial(unsigned p, int i, int j, const PAdicScalar& c);
  static IwasawaPoly from_terms(unsigned p, const std::vector<PolyTerm>& terms);
  /// Exact integer coefficients c_0 + c_1 v + ..., read modulo p^precision.
  static IwasawaPoly univariate(unsigned p, Var v, const std::vector<mpz_class>& coeffs,
                                int precision = kDefaultPrecision);
  /// Phi_{p^n}(1 + v).
  static IwasawaPoly shifted_cyclotomic(unsigned p, int n, Var v, int precision = kDefaultPrecision);

  unsigned prime() const { return v_.p; }
  int precision() const { return v_.prec; }
  bool is_exact_zero() const { return v_.exact_zero; }
  bool is_zero() const { return v_.is_zero(); }
  /// -1 for zero polynomials.
  int degree(Var v) const;
  bool is_univariate_in(Var v) const { return degree(v == Var::X ? Var::Y : Var::X) <= 0; }

  PAdicScalar coefficient(int i, int j) const;
  PAdicScalar constant_term() const { return coefficient(0, 0); }
  /// Nonzero terms, ordered by (j, i).
  std::vector<PolyTerm> terms() const;

  std::optional<int> cap(Var v) const { return v == Var::X ? cap_x_ : cap_y_; }
  /// Drops monomials beyond the caps and keeps the caps for later products.
  IwasawaPoly with_caps(std::optional<int> cap_x, std::optional<int> cap_y) const;
  IwasawaPoly with_precision(int precision) const;

  bool equals_to_precision(const IwasawaPoly& other) const;

  /// Sparse triples "{i,j,val|digits|N}" separated by ';'.
  std::string serialize() const;
  std::string to_string() const;

  IwasawaPoly operator-() const;
  friend IwasawaPoly operator+(const IwasawaPoly& a, const IwasawaPoly& b);
  friend IwasawaPoly operator-(const IwasawaPoly& a, const IwasawaPoly& b);
  friend IwasawaPoly operator*(const IwasawaPoly& a, const IwasawaPoly& b);
  friend IwasawaPoly operator*(const PAdicScalar& c, const IwasawaPoly& f);
  IwasawaPoly& operator+=(const IwasawaPoly& b) { return *this = *this + b; }
  IwasawaPoly& operator*=(const IwasawaPoly& b) { return *this = *this * b; }

  /// Univariate remainder modulo Phi_{p^r}(1 + v), returned as raw coefficients at this
  /// polynomial's shift (these are the coefficients in powers of zeta - 1).
  detail::ScaledVector remainder_mod_cyclotomic(Var v, int r) const;

  /// G_j(X) where F = sum_j G_j(X) Y^j.
  IwasawaPoly x_slice(int j) const;

  const detail::ScaledVector& raw() const { return v_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

 private:
  IwasawaPoly(detail::ScaledVector v, int nx, int ny) : v_(std::move(v)), nx_(nx), ny_(ny) {}
  void trim();

  detail::ScaledVector v_;
  int nx_ = 1;
  int ny_ = 1;
  std::optional<int> cap_x_;
  std::optional<int> cap_y_;
};

enum class PolyOp { Add, Mul };

IwasawaPoly poly_arith(const IwasawaPoly& f, const IwasawaPoly& g, PolyOp op);

/// F(w1 - 1, w2 - 1) in Q_p(zeta_{p^level}).
CycloElement eval_at_character(const IwasawaPoly& f, const CharacterPoint& w);

/// (1 + v)^{p^n} - 1.
IwasawaPoly omega(unsigned p, int n, Var v, int precision = kDefaultPrecision);

inline bool is_exact_zero(const IwasawaPoly& x) { return x.is_exact_zero(); }
inline IwasawaPoly exact_zero_like(const IwasawaPoly& x) { return IwasawaPoly::exact_zero(x.prime()); }
inline IwasawaPoly one_like(const IwasawaPoly& x) {
  return IwasawaPoly::from_integer(x.prime(), 1, x.is_exact_zero() ? kDefaultPrecision : x.precision());
}

}  // namespace iwalog
