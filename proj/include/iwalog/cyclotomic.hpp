#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

#include "iwalog/detail/scaled_vector.hpp"
#include "iwalog/padic.hpp"

namespace iwalog {

/// Phi_{p^n}(x) together with its shifted form Phi_{p^n}(1+X).
/// Coefficients are exact integers, lowest degree first.
struct CycloPolynomial {
  unsigned p = 0;
  int n = 0;
  std::vector<mpz_class> coefficients;
  std::vector<mpz_class> shifted_coefficients;

  long degree() const { return static_cast<long>(coefficients.size()) - 1; }
};

/// Cached; n >= 1.
const CycloPolynomial& cyclo_polynomial(unsigned p, int n);

/// Shifted coefficients of Phi_{p^n}(1+X) reduced modulo p^k (cached).
const std::vector<mpz_class>& shifted_cyclotomic_mod(unsigned p, int n, int k);

/// An element of Q_p(zeta_{p^r}) in the power basis 1, zeta, ..., zeta^{phi(p^r)-1}.
///
/// Level 0 is Q_p itself. The fixed primitive roots form a compatible system:
/// zeta_{p^{r+1}}^p = zeta_{p^r}. Valuations are normalized so that val(p) = 1.
class CycloElement {
 public:
  static CycloElement exact_zero(unsigned p, int level);
  static CycloElement zero(unsigned p, int level, int precision);
  static CycloElement from_scalar(const PAdicScalar& s, int level = 0);
  static CycloElement from_integer(unsigned p, int level, const mpz_class& n,
                                   int precision = kDefaultPrecision);
  /// zeta_{p^level}^e.
  static CycloElement zeta_power(unsigned p, int level, long e, int precision = kDefaultPrecision);
  static CycloElement zeta(unsigned p, int level, int precision = kDefaultPrecision) {
    return zeta_power(p, level, 1, precision);
  }
  /// eps_n = zeta_{p^n} - 1, embedded at the given level (>= n).
  static CycloElement epsilon_at(unsigned p, int n, int level, int precision = kDefaultPrecision);
  static CycloElement epsilon(unsigned p, int n, int precision = kDefaultPrecision) {
    return epsilon_at(p, n, n, precision);
  }
  static CycloElement from_coefficients(unsigned p, int level, const std::vector<PAdicScalar>& coeffs);
  /// Element given by coefficients in the basis 1, eps, eps^2, ... (eps = zeta_{p^level} - 1).
  static CycloElement from_epsilon_coefficients(unsigned p, int level,
                                                const std::vector<PAdicScalar>& coeffs);
  /// Builds from a raw scaled vector; `epsilon_basis` says which basis the vector uses.
  static CycloElement from_raw(detail::ScaledVector v, int level, bool epsilon_basis);

  unsigned prime() const { return v_.p; }
  int level() const { return level_; }
  int precision() const { return v_.prec; }
  long degree() const { return phi_prime_power(v_.p, level_); }
  bool is_exact_zero() const { return v_.exact_zero; }
  bool is_zero() const { return v_.is_zero(); }

  PAdicScalar coefficient(long i) const { return v_.scalar_at(static_cast<std::size_t>(i)); }
  std::vector<PAdicScalar> coefficients() const;
  std::vector<PAdicScalar> epsilon_coefficients() const;

  Valuation valuation() const;

  CycloElement embed(int target_level) const;
  /// Galois action zeta -> zeta^a, gcd(a, p) = 1.
  CycloElement galois(long a) const;
  CycloElement inverse() const;
  CycloElement with_precision(int precision) const;

  bool equals_to_precision(const CycloElement& other) const;
  /// Zero decision at threshold tau: exact zero, zero at precision, or valuation >= tau.
  bool reported_zero(int tau) const;

  /// "p|level|N|shift|c0 c1 ..." with residues in base 10.
  std::string serialize() const;
  std::string to_string() const;

  CycloElement operator-() const;
  friend CycloElement operator+(const CycloElement& a, const CycloElement& b);
  friend CycloElement operator-(const CycloElement& a, const CycloElement& b);
  friend CycloElement operator*(const CycloElement& a, const CycloElement& b);
  friend CycloElement operator/(const CycloElement& a, const CycloElement& b);
  CycloElement& operator+=(const CycloElement& b) { return *this = *this + b; }
  CycloElement& operator*=(const CycloElement& b) { return *this = *this * b; }

  const detail::ScaledVector& raw() const { return v_; }

 private:
  CycloElement(detail::ScaledVector v, int level) : v_(std::move(v)), level_(level) {}
  // Epsilon-basis coefficients at the element's shift, computed on first use.
  const std::vector<mpz_class>& epsilon_raw() const;
  CycloElement restrict_to(int lower_level) const;

  detail::ScaledVector v_;
  int level_ = 0;
  mutable std::shared_ptr<const std::vector<mpz_class>> eps_cache_;
};

enum class CycloOp { Add, Mul };

CycloElement cyclo_arith(const CycloElement& a, const CycloElement& b, CycloOp op);
CycloElement cyclo_embed(const CycloElement& a, int target_level);
Valuation cyclo_valuation(const CycloElement& a);

inline bool is_exact_zero(const CycloElement& x) { return x.is_exact_zero(); }
inline CycloElement exact_zero_like(const CycloElement& x) {
  return CycloElement::exact_zero(x.prime(), x.level());
}
inline CycloElement one_like(const CycloElement& x) {
  return CycloElement::from_integer(x.prime(), x.level(), 1,
                                    x.is_exact_zero() ? kDefaultPrecision : x.precision());
}

}  // namespace iwalog
