#include "iwalog/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

namespace iwalog {

using detail::ScaledVector;

namespace {

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

void require_same_prime(const CycloElement& a, const CycloElement& b) {
  if (a.prime() != b.prime()) {
    throw StructuralError("prime mismatch: " + std::to_string(a.prime()) + " vs " +
                          std::to_string(b.prime()));
  }
}

long pow_long(unsigned p, int k) {
  long r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<long>(p);
  return r;
}

long mod_pos(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

// Reduces a dense vector of length up to 2*phi-1 modulo Phi_{p^r}(x) in place,
// using x^{(p-1)m} = -(1 + x^m + ... + x^{(p-2)m}), m = p^{r-1}.
void reduce_mod_cyclotomic(std::vector<mpz_class>& acc, unsigned p, int r) {
  const long n = phi_prime_power(p, r);
  const long m = pow_long(p, r - 1);
  for (long e = static_cast<long>(acc.size()) - 1; e >= n; --e) {
    if (acc[e] == 0) continue;
    for (unsigned t = 0; t + 1 < p; ++t) {
      mpz_sub(acc[e - n + t * m].get_mpz_t(), acc[e - n + t * m].get_mpz_t(), acc[e].get_mpz_t());
    }
    acc[e] = 0;
  }
  acc.resize(static_cast<std::size_t>(n));
}

// Places c * x^e (e < p^r) into a reduced vector.
void add_monomial(std::vector<mpz_class>& out, const mpz_class& c, long e, unsigned p, int r) {
  const long n = static_cast<long>(out.size());
  if (e < n) {
    out[e] += c;
    return;
  }
  const long m = pow_long(p, r - 1);
  for (unsigned t = 0; t + 1 < p; ++t) out[e - n + t * m] -= c;
}

// q(x) -> q(x + 1) modulo mod (synthetic Horner shifts).
void taylor_shift(std::vector<mpz_class>& c, const mpz_class& mod, bool plus) {
  long top = static_cast<long>(c.size()) - 1;
  while (top > 0 && c[top] == 0) --top;
  for (long i = 0; i < top; ++i) {
    for (long j = top - 1; j >= i; --j) {
      if (c[j + 1] == 0) continue;
      if (plus) {
        c[j] += c[j + 1];
        if (c[j] >= mod) c[j] -= mod;
      } else {
        c[j] -= c[j + 1];
        if (c[j] < 0) c[j] += mod;
      }
    }
  }
}

int lower_bound_of(const ScaledVector& v) { return v.is_zero() ? v.prec : v.shift; }

}  // namespace

const CycloPolynomial& cyclo_polynomial(unsigned p, int n) {
  if (n < 1) throw StructuralError("cyclotomic index must be >= 1");
  static std::map<std::pair<unsigned, int>, std::unique_ptr<CycloPolynomial>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto& slot = cache[{p, n}];
  if (slot) return *slot;
  auto poly = std::make_unique<CycloPolynomial>();
  poly->p = p;
  poly->n = n;
  const long m = pow_long(p, n - 1);
  const long deg = m * static_cast<long>(p - 1);
  poly->coefficients.assign(static_cast<std::size_t>(deg + 1), 0);
  for (unsigned i = 0; i < p; ++i) poly->coefficients[i * m] = 1;
  // Phi(1+X) = sum_i (1+X)^{i m}; binomial rows built by exact recurrence.
  poly->shifted_coefficients.assign(static_cast<std::size_t>(deg + 1), 0);
  for (unsigned i = 0; i < p; ++i) {
    const long top = static_cast<long>(i) * m;
    mpz_class b = 1;
    for (long k = 0; k <= top; ++k) {
      poly->shifted_coefficients[k] += b;
      b *= (top - k);
      mpz_divexact_ui(b.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(k + 1));
    }
  }
  slot = std::move(poly);
  return *slot;
}

const std::vector<mpz_class>& shifted_cyclotomic_mod(unsigned p, int n, int k) {
  const CycloPolynomial& poly = cyclo_polynomial(p, n);
  static std::map<std::tuple<unsigned, int, int>, std::unique_ptr<std::vector<mpz_class>>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto& slot = cache[{p, n, k}];
  if (slot) return *slot;
  auto v = std::make_unique<std::vector<mpz_class>>(poly.shifted_coefficients);
  const mpz_class& mod = prime_power(p, k);
  for (auto& x : *v) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
  slot = std::move(v);
  return *slot;
}

// ---------------------------------------------------------------------------

CycloElement CycloElement::exact_zero(unsigned p, int level) {
  return CycloElement(ScaledVector::make_exact_zero(p, phi_prime_power(p, level)), level);
}

CycloElement CycloElement::zero(unsigned p, int level, int precision) {
  return CycloElement(ScaledVector::make_zero(p, phi_prime_power(p, level), precision), level);
}

CycloElement CycloElement::from_scalar(const PAdicScalar& s, int level) {
  if (s.is_exact_zero()) return exact_zero(s.prime(), level);
  if (s.is_zero()) return zero(s.prime(), level, s.precision());
  ScaledVector v = ScaledVector::make_zero(s.prime(), phi_prime_power(s.prime(), level), s.precision());
  v.shift = s.valuation_lower_bound();
  v.c[0] = s.unit();
  v.normalize();
  return CycloElement(std::move(v), level);
}

CycloElement CycloElement::from_integer(unsigned p, int level, const mpz_class& n, int precision) {
  return from_scalar(PAdicScalar::from_integer(p, n, precision), level);
}

CycloElement CycloElement::zeta_power(unsigned p, int level, long e, int precision) {
  if (level == 0) return from_integer(p, 0, 1, precision);
  ScaledVector v = ScaledVector::make_zero(p, phi_prime_power(p, level), precision);
  v.shift = 0;
  add_monomial(v.c, 1, mod_pos(e, pow_long(p, level)), p, level);
  v.normalize();
  return CycloElement(std::move(v), level);
}

CycloElement CycloElement::epsilon_at(unsigned p, int n, int level, int precision) {
  if (n < 1 || n > level) throw StructuralError("epsilon index out of range");
  return zeta_power(p, level, pow_long(p, level - n), precision) - from_integer(p, level, 1, precision);
}

CycloElement CycloElement::from_coefficients(unsigned p, int level,
                                             const std::vector<PAdicScalar>& coeffs) {
  const long n = phi_prime_power(p, level);
  if (static_cast<long>(coeffs.size()) > n) throw StructuralError("too many coefficients for level");
  int prec = kInfinitePrecision;
  int shift = kInfinitePrecision;
  bool all_exact = true;
  for (const auto& c : coeffs) {
    if (c.prime() != p) throw StructuralError("prime mismatch in coefficients");
    if (c.is_exact_zero()) continue;
    all_exact = false;
    prec = std::min(prec, c.precision());
    shift = std::min(shift, c.valuation_lower_bound());
  }
  if (all_exact) return exact_zero(p, level);
  ScaledVector v = ScaledVector::make_zero(p, n, prec);
  if (shift >= prec) return CycloElement(std::move(v), level);
  v.shift = shift;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (!coeffs[i].is_exact_zero()) v.c[i] = detail::scaled_residue(coeffs[i], shift);
  }
  v.normalize();
  return CycloElement(std::move(v), level);
}

CycloElement CycloElement::from_epsilon_coefficients(unsigned p, int level,
                                                     const std::vector<PAdicScalar>& coeffs) {
  CycloElement tmp = from_coefficients(p, level, coeffs);
  return from_raw(tmp.v_, level, true);
}

CycloElement CycloElement::from_raw(ScaledVector v, int level, bool epsilon_basis) {
  const std::size_t n = static_cast<std::size_t>(phi_prime_power(v.p, level));
  if (v.c.size() > n) throw StructuralError("raw vector longer than field degree");
  v.c.resize(n, 0);
  v.normalize();
  if (!epsilon_basis || v.is_zero() || level == 0) return CycloElement(std::move(v), level);
  // The change of basis is unimodular, so the content and shift are unchanged.
  auto eps = std::make_shared<std::vector<mpz_class>>(v.c);
  taylor_shift(v.c, v.modulus(), false);
  CycloElement out(std::move(v), level);
  out.eps_cache_ = std::move(eps);
  return out;
}

std::vector<PAdicScalar> CycloElement::coefficients() const {
  std::vector<PAdicScalar> out;
  out.reserve(v_.c.size());
  for (std::size_t i = 0; i < v_.c.size(); ++i) out.push_back(v_.scalar_at(i));
  return out;
}

const std::vector<mpz_class>& CycloElement::epsilon_raw() const {
  static std::mutex m;
  {
    std::lock_guard<std::mutex> lock(m);
    if (eps_cache_) return *eps_cache_;
  }
  auto eps = std::make_shared<std::vector<mpz_class>>(v_.c);
  if (!v_.is_zero() && level_ > 0) taylor_shift(*eps, v_.modulus(), true);
  std::lock_guard<std::mutex> lock(m);
  if (!eps_cache_) eps_cache_ = std::move(eps);
  return *eps_cache_;
}

std::vector<PAdicScalar> CycloElement::epsilon_coefficients() const {
  if (v_.exact_zero) return std::vector<PAdicScalar>(v_.c.size(), PAdicScalar::exact_zero(v_.p));
  ScaledVector e = v_;
  e.c = epsilon_raw();
  std::vector<PAdicScalar> out;
  out.reserve(e.c.size());
  for (std::size_t i = 0; i < e.c.size(); ++i) out.push_back(e.scalar_at(i));
  return out;
}

Valuation CycloElement::valuation() const {
  if (v_.exact_zero) return Valuation::infinite();
  if (v_.is_zero()) return Valuation::at_least(v_.prec);
  // val(sum a_i eps^i) = min(v(a_i) + i/phi); the shift is the minimum integer part.
  const auto& eps = epsilon_raw();
  const long n = degree();
  for (long i = 0; i < n; ++i) {
    if (eps[i] != 0 && !mpz_divisible_ui_p(eps[i].get_mpz_t(), v_.p)) {
      return Valuation::exact(mpq_class(v_.shift) + mpq_class(i, n));
    }
  }
  throw InternalInconsistency("normalized element without a unit epsilon coefficient");
}

CycloElement CycloElement::embed(int target_level) const {
  if (target_level < level_) throw UnsupportedError("descending embedding");
  if (target_level == level_) return *this;
  const long n = phi_prime_power(v_.p, target_level);
  ScaledVector v = v_;
  v.c.assign(static_cast<std::size_t>(n), 0);
  if (!v_.exact_zero) {
    const long step = pow_long(v_.p, target_level - level_);
    for (std::size_t i = 0; i < v_.c.size(); ++i) v.c[i * step] = v_.c[i];
  }
  return CycloElement(std::move(v), target_level);
}

CycloElement CycloElement::galois(long a) const {
  if (a % static_cast<long>(v_.p) == 0) throw StructuralError("Galois exponent divisible by p");
  if (level_ == 0 || is_zero()) return *this;
  const long q = pow_long(v_.p, level_);
  const long am = mod_pos(a, q);
  ScaledVector v = v_;
  v.c.assign(v_.c.size(), 0);
  for (std::size_t i = 0; i < v_.c.size(); ++i) {
    if (v_.c[i] == 0) continue;
    const long e = static_cast<long>((static_cast<__int128>(am) * static_cast<long>(i)) % q);
    add_monomial(v.c, v_.c[i], e, v_.p, level_);
  }
  v.normalize();
  return CycloElement(std::move(v), level_);
}

CycloElement CycloElement::restrict_to(int lower_level) const {
  if (lower_level != level_ - 1) throw StructuralError("restriction goes one level down");
  if (is_zero()) return is_exact_zero() ? exact_zero(v_.p, lower_level) : zero(v_.p, lower_level, v_.prec);
  const long step = level_ >= 2 ? static_cast<long>(v_.p) : static_cast<long>(v_.c.size());
  ScaledVector v = v_;
  v.c.assign(static_cast<std::size_t>(phi_prime_power(v_.p, lower_level)), 0);
  for (std::size_t i = 0; i < v_.c.size(); ++i) {
    if (v_.c[i] == 0) continue;
    if (static_cast<long>(i) % step != 0) {
      throw InternalInconsistency("norm does not descend to level " + std::to_string(lower_level));
    }
    v.c[i / step] = v_.c[i];
  }
  v.normalize();
  return CycloElement(std::move(v), lower_level);
}

CycloElement CycloElement::inverse() const {
  if (is_zero()) throw ZeroDivideError(precision());
  if (level_ == 0) return from_scalar(coefficient(0).inverse(), 0);
  const unsigned p = v_.p;
  std::vector<long> exps;
  if (level_ == 1) {
    for (unsigned a = 2; a < p; ++a) exps.push_back(a);
  } else {
    const long m = pow_long(p, level_ - 1);
    for (unsigned j = 1; j < p; ++j) exps.push_back(1 + static_cast<long>(j) * m);
  }
  // P = product of the other conjugates over the level below; x * P lies one level down.
  CycloElement partial = galois(exps[0]);
  for (std::size_t i = 1; i < exps.size(); ++i) partial = partial * galois(exps[i]);
  const CycloElement norm = (*this * partial).restrict_to(level_ - 1);
  return partial * norm.inverse().embed(level_);
}

CycloElement CycloElement::with_precision(int precision) const {
  if (v_.exact_zero || precision >= v_.prec) return *this;
  ScaledVector v = v_;
  v.prec = precision;
  v.normalize();
  return CycloElement(std::move(v), level_);
}

bool CycloElement::equals_to_precision(const CycloElement& other) const {
  return (*this - other).is_zero();
}

bool CycloElement::reported_zero(int tau) const {
  if (is_zero()) return true;
  return valuation().value() >= tau;
}

std::string CycloElement::serialize() const {
  std::ostringstream os;
  os << v_.p << '|' << level_ << '|';
  if (v_.exact_zero) {
    os << "exact0";
    return os.str();
  }
  os << v_.prec << '|' << lower_bound_of(v_) << '|';
  for (std::size_t i = 0; i < v_.c.size(); ++i) {
    if (i) os << ' ';
    os << v_.c[i].get_str();
  }
  return os.str();
}

std::string CycloElement::to_string() const {
  if (v_.exact_zero) return "0 (exact)";
  const std::string big_o = "O(" + std::to_string(v_.p) + "^" + std::to_string(v_.prec) + ")";
  if (v_.is_zero()) return big_o;
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < v_.c.size(); ++i) {
    if (v_.c[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << v_.c[i].get_str();
    if (i > 0) os << "*z^" << i;
  }
  std::string body = os.str();
  if (v_.shift != 0) body = std::to_string(v_.p) + "^" + std::to_string(v_.shift) + "*(" + body + ")";
  return body + " + " + big_o;
}

CycloElement CycloElement::operator-() const {
  return CycloElement(detail::negate(v_), level_);
}

CycloElement operator+(const CycloElement& a, const CycloElement& b) {
  require_same_prime(a, b);
  const int L = std::max(a.level_, b.level_);
  const CycloElement A = a.embed(L);
  const CycloElement B = b.embed(L);
  return CycloElement(detail::add(A.v_, B.v_), L);
}

CycloElement operator-(const CycloElement& a, const CycloElement& b) { return a + (-b); }

CycloElement operator*(const CycloElement& a, const CycloElement& b) {
  require_same_prime(a, b);
  const unsigned p = a.prime();
  const int L = std::max(a.level_, b.level_);
  if (a.is_exact_zero() || b.is_exact_zero()) return CycloElement::exact_zero(p, L);
  const CycloElement A = a.embed(L);
  const CycloElement B = b.embed(L);
  const int prec = std::min(A.v_.prec + lower_bound_of(B.v_), B.v_.prec + lower_bound_of(A.v_));
  if (A.is_zero() || B.is_zero()) return CycloElement::zero(p, L, prec);
  const std::size_t n = A.v_.c.size();
  std::vector<std::size_t> nz;
  for (std::size_t j = 0; j < n; ++j) {
    if (B.v_.c[j] != 0) nz.push_back(j);
  }
  std::vector<mpz_class> acc(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const mpz_class& x = A.v_.c[i];
    if (x == 0) continue;
    for (std::size_t j : nz) mpz_addmul(acc[i + j].get_mpz_t(), x.get_mpz_t(), B.v_.c[j].get_mpz_t());
  }
  if (L > 0) reduce_mod_cyclotomic(acc, p, L);
  ScaledVector v;
  v.p = p;
  v.prec = prec;
  v.shift = A.v_.shift + B.v_.shift;
  v.exact_zero = false;
  v.c = std::move(acc);
  v.c.resize(n);
  v.normalize();
  return CycloElement(std::move(v), L);
}

CycloElement operator/(const CycloElement& a, const CycloElement& b) { return a * b.inverse(); }

CycloElement cyclo_arith(const CycloElement& a, const CycloElement& b, CycloOp op) {
  return op == CycloOp::Add ? a + b : a * b;
}

CycloElement cyclo_embed(const CycloElement& a, int target_level) { return a.embed(target_level); }

Valuation cyclo_valuation(const CycloElement& a) { return a.valuation(); }

}  // namespace iwalog
