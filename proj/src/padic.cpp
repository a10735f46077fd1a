#include "iwalog/padic.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace iwalog {

namespace {

constexpr int kMaxPowerExponent = 1 << 20;

void require_same_prime(const PAdicScalar& a, const PAdicScalar& b) {
  if (a.prime() != b.prime()) {
    throw StructuralError("prime mismatch: " + std::to_string(a.prime()) + " vs " +
                          std::to_string(b.prime()));
  }
}

}  // namespace

const mpz_class& prime_power(unsigned p, int k) {
  if (k < 0 || k > kMaxPowerExponent) {
    throw StructuralError("prime power exponent out of range: " + std::to_string(k));
  }
  // Per-thread table; deque growth never invalidates references.
  thread_local std::unordered_map<unsigned, std::deque<mpz_class>> table;
  auto& powers = table[p];
  if (powers.empty()) powers.emplace_back(1);
  while (static_cast<int>(powers.size()) <= k) {
    mpz_class next = powers.back() * p;
    powers.push_back(std::move(next));
  }
  return powers[static_cast<std::size_t>(k)];
}

int strip_prime(mpz_class& x, unsigned p) {
  if (x == 0) throw StructuralError("valuation of zero integer");
  int v = 0;
  while (mpz_divisible_ui_p(x.get_mpz_t(), p)) {
    mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), p);
    ++v;
  }
  return v;
}

int integer_valuation(const mpz_class& x, unsigned p) {
  mpz_class y = x;
  return strip_prime(y, p);
}

long phi_prime_power(unsigned p, int r) {
  if (r < 0) throw StructuralError("negative level");
  if (r == 0) return 1;
  long m = 1;
  for (int i = 1; i < r; ++i) m *= static_cast<long>(p);
  return m * static_cast<long>(p - 1);
}

bool is_odd_prime(unsigned p) {
  if (p < 3 || p % 2 == 0) return false;
  for (unsigned d = 3; d * d <= p; d += 2) {
    if (p % d == 0) return false;
  }
  return true;
}

std::string Valuation::to_string() const {
  switch (kind_) {
    case Kind::Exact:
      return value_.get_str();
    case Kind::AtLeast:
      return ">=" + value_.get_str();
    case Kind::Infinite:
      return "inf";
  }
  return "?";
}

// ---------------------------------------------------------------------------

PAdicScalar PAdicScalar::exact_zero(unsigned p) {
  PAdicScalar s(p, kInfinitePrecision);
  s.exact_zero_ = true;
  s.zero_ = true;
  s.val_ = kInfinitePrecision;
  return s;
}

PAdicScalar PAdicScalar::zero(unsigned p, int precision) {
  PAdicScalar s(p, precision);
  s.zero_ = true;
  s.val_ = precision;
  return s;
}

void PAdicScalar::normalize() {
  if (exact_zero_) return;
  if (zero_ || unit_ == 0 || prec_ - val_ <= 0) {
    *this = zero(p_, prec_);
    return;
  }
  const int stripped = strip_prime(unit_, p_);
  val_ += stripped;
  if (prec_ - val_ <= 0) {
    *this = zero(p_, prec_);
    return;
  }
  mpz_mod(unit_.get_mpz_t(), unit_.get_mpz_t(), prime_power(p_, prec_ - val_).get_mpz_t());
}

PAdicScalar PAdicScalar::from_integer(unsigned p, const mpz_class& n, int precision) {
  if (n == 0) return zero(p, precision);
  PAdicScalar s(p, precision);
  s.val_ = 0;
  s.unit_ = n;
  s.normalize();
  return s;
}

PAdicScalar PAdicScalar::from_exact_integer(unsigned p, const mpz_class& n, int precision) {
  if (n == 0) return exact_zero(p);
  return from_integer(p, n, precision);
}

PAdicScalar PAdicScalar::from_rational(unsigned p, const mpq_class& q, int precision) {
  mpq_class c = q;
  c.canonicalize();
  if (c == 0) return zero(p, precision);
  mpz_class num = c.get_num();
  mpz_class den = c.get_den();
  const int vn = strip_prime(num, p);
  const int vd = strip_prime(den, p);
  const int v = vn - vd;
  if (precision - v <= 0) return zero(p, precision);
  const mpz_class& mod = prime_power(p, precision - v);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  PAdicScalar s(p, precision);
  s.val_ = v;
  s.unit_ = num * inv;
  s.normalize();
  return s;
}

PAdicScalar PAdicScalar::from_parts(unsigned p, int valuation, const mpz_class& unit, int precision) {
  if (unit % p == 0) throw StructuralError("unit part divisible by p");
  PAdicScalar s(p, precision);
  s.val_ = valuation;
  s.unit_ = unit;
  s.normalize();
  return s;
}

Valuation PAdicScalar::valuation() const {
  if (exact_zero_) return Valuation::infinite();
  if (zero_) return Valuation::at_least(prec_);
  return Valuation::exact(val_);
}

int PAdicScalar::valuation_lower_bound() const { return zero_ ? prec_ : val_; }

mpz_class PAdicScalar::residue() const {
  if (is_zero()) return 0;
  if (val_ < 0) throw StructuralError("residue of a non-integral p-adic number");
  mpz_class r = unit_ * prime_power(p_, val_);
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), prime_power(p_, prec_).get_mpz_t());
  return r;
}

PAdicScalar PAdicScalar::operator-() const {
  if (is_zero()) return *this;
  PAdicScalar s = *this;
  s.unit_ = -s.unit_;
  s.normalize();
  return s;
}

PAdicScalar PAdicScalar::inverse() const {
  if (is_zero()) throw ZeroDivideError(prec_);
  const int rel = prec_ - val_;
  PAdicScalar s(p_, -val_ + rel);
  s.val_ = -val_;
  mpz_invert(s.unit_.get_mpz_t(), unit_.get_mpz_t(), prime_power(p_, rel).get_mpz_t());
  s.normalize();
  return s;
}

PAdicScalar PAdicScalar::with_precision(int precision) const {
  if (exact_zero_ || precision >= prec_) return *this;
  PAdicScalar s = *this;
  s.prec_ = precision;
  if (s.zero_) {
    s.val_ = precision;
    return s;
  }
  s.normalize();
  return s;
}

bool PAdicScalar::equals_to_precision(const PAdicScalar& other) const {
  return (*this - other).is_zero();
}

std::string PAdicScalar::unit_digits() const {
  if (is_zero()) return "0";
  return unit_.get_str(static_cast<int>(p_ <= 36 ? p_ : 10));
}

std::string PAdicScalar::serialize() const {
  if (exact_zero_) return "exact0";
  if (zero_) return "zero|0|" + std::to_string(prec_);
  return std::to_string(val_) + "|" + unit_digits() + "|" + std::to_string(prec_);
}

std::string PAdicScalar::to_string() const {
  if (exact_zero_) return "0 (exact)";
  if (zero_) return "O(" + std::to_string(p_) + "^" + std::to_string(prec_) + ")";
  std::string s = unit_.get_str();
  if (val_ != 0) s = std::to_string(p_) + "^" + std::to_string(val_) + "*" + s;
  return s + " + O(" + std::to_string(p_) + "^" + std::to_string(prec_) + ")";
}

PAdicScalar operator+(const PAdicScalar& a, const PAdicScalar& b) {
  require_same_prime(a, b);
  if (a.exact_zero_) return b;
  if (b.exact_zero_) return a;
  const int n = std::min(a.prec_, b.prec_);
  const int m = std::min(a.valuation_lower_bound(), b.valuation_lower_bound());
  if (n <= m) return PAdicScalar::zero(a.p_, n);
  PAdicScalar s(a.p_, n);
  s.val_ = m;
  if (!a.zero_) s.unit_ += a.unit_ * prime_power(a.p_, a.val_ - m);
  if (!b.zero_) s.unit_ += b.unit_ * prime_power(b.p_, b.val_ - m);
  s.normalize();
  return s;
}

PAdicScalar operator-(const PAdicScalar& a, const PAdicScalar& b) { return a + (-b); }

PAdicScalar operator*(const PAdicScalar& a, const PAdicScalar& b) {
  require_same_prime(a, b);
  if (a.exact_zero_ || b.exact_zero_) return PAdicScalar::exact_zero(a.p_);
  const int n = std::min(a.prec_ + b.valuation_lower_bound(), b.prec_ + a.valuation_lower_bound());
  if (a.zero_ || b.zero_) return PAdicScalar::zero(a.p_, n);
  PAdicScalar s(a.p_, n);
  s.val_ = a.val_ + b.val_;
  s.unit_ = a.unit_ * b.unit_;
  s.normalize();
  return s;
}

PAdicScalar operator/(const PAdicScalar& a, const PAdicScalar& b) { return a * b.inverse(); }

PAdicScalar scalar_arith(const PAdicScalar& a, const PAdicScalar& b, ArithOp op) {
  switch (op) {
    case ArithOp::Add:
      return a + b;
    case ArithOp::Sub:
      return a - b;
    case ArithOp::Mul:
      return a * b;
  }
  throw StructuralError("unknown arithmetic op");
}

PAdicScalar scalar_invert(const PAdicScalar& a) { return a.inverse(); }

Valuation scalar_valuation(const PAdicScalar& a) { return a.valuation(); }

}  // namespace iwalog
