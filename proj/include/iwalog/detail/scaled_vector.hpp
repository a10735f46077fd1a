#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <vector>

#include "iwalog/padic.hpp"

namespace iwalog::detail {

// A vector of p-adic numbers sharing one absolute precision:
//   value_i = p^shift * c_i,  c_i in [0, p^(prec - shift)).
// After normalize() either some c_i is a unit, or every c_i is 0 and shift == prec
// (zero at precision). exact_zero marks a structural zero and ignores c.
struct ScaledVector {
  unsigned p = 0;
  int prec = kInfinitePrecision;
  int shift = kInfinitePrecision;
  bool exact_zero = true;
  std::vector<mpz_class> c;

  static ScaledVector make_exact_zero(unsigned p, std::size_t n) {
    ScaledVector v;
    v.p = p;
    v.c.assign(n, 0);
    return v;
  }

  static ScaledVector make_zero(unsigned p, std::size_t n, int prec) {
    ScaledVector v;
    v.p = p;
    v.prec = prec;
    v.shift = prec;
    v.exact_zero = false;
    v.c.assign(n, 0);
    return v;
  }

  bool is_zero() const { return exact_zero || shift >= prec; }

  const mpz_class& modulus() const { return prime_power(p, prec - shift); }

  void normalize() {
    if (exact_zero) return;
    if (prec - shift <= 0) {
      set_zero();
      return;
    }
    const mpz_class& mod = modulus();
    int min_v = -1;
    for (auto& x : c) {
      if (x == 0) continue;
      if (x < 0 || x >= mod) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
      if (x == 0 || min_v == 0) continue;
      int v = 0;
      while ((min_v < 0 || v < min_v) &&
             mpz_divisible_p(x.get_mpz_t(), prime_power(p, v + 1).get_mpz_t())) {
        ++v;
      }
      if (min_v < 0 || v < min_v) min_v = v;
    }
    if (min_v < 0) {
      set_zero();
      return;
    }
    if (min_v > 0) {
      for (auto& x : c) {
        if (x != 0) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), prime_power(p, min_v).get_mpz_t());
      }
      shift += min_v;
    }
  }

  void set_zero() {
    shift = prec;
    for (auto& x : c) x = 0;
  }

  PAdicScalar scalar_at(std::size_t i) const {
    if (exact_zero) return PAdicScalar::exact_zero(p);
    if (i >= c.size() || c[i] == 0) return PAdicScalar::zero(p, prec);
    mpz_class u = c[i];
    const int v = strip_prime(u, p);
    return PAdicScalar::from_parts(p, shift + v, u, prec);
  }
};

// Sum of two vectors of equal length (shorter one is treated as zero-padded).
inline ScaledVector add(const ScaledVector& a, const ScaledVector& b) {
  if (a.exact_zero) return b;
  if (b.exact_zero) return a;
  ScaledVector r;
  r.p = a.p;
  r.exact_zero = false;
  r.prec = std::min(a.prec, b.prec);
  r.shift = std::min(a.shift, b.shift);
  r.c.assign(std::max(a.c.size(), b.c.size()), 0);
  if (r.prec <= r.shift) {
    r.set_zero();
    return r;
  }
  if (!a.is_zero()) {
    const mpz_class& s = prime_power(a.p, a.shift - r.shift);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
      if (a.c[i] != 0) mpz_addmul(r.c[i].get_mpz_t(), a.c[i].get_mpz_t(), s.get_mpz_t());
    }
  }
  if (!b.is_zero()) {
    const mpz_class& s = prime_power(b.p, b.shift - r.shift);
    for (std::size_t i = 0; i < b.c.size(); ++i) {
      if (b.c[i] != 0) mpz_addmul(r.c[i].get_mpz_t(), b.c[i].get_mpz_t(), s.get_mpz_t());
    }
  }
  r.normalize();
  return r;
}

inline ScaledVector negate(const ScaledVector& a) {
  if (a.is_zero()) return a;
  ScaledVector r = a;
  for (auto& x : r.c) x = -x;
  r.normalize();
  return r;
}

// Brings the scalar p^v * u (or zero) into the representation p^shift * c with c
// known modulo p^(prec - shift). The caller guarantees v >= shift for nonzero scalars.
inline mpz_class scaled_residue(const PAdicScalar& s, int shift) {
  if (s.is_zero()) return 0;
  return s.unit() * prime_power(s.prime(), s.valuation_lower_bound() - shift);
}

}  // namespace iwalog::detail
