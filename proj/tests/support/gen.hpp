#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <vector>

#include "iwalog/cyclotomic.hpp"
#include "iwalog/iwasawa_poly.hpp"
#include "iwalog/padic.hpp"
#include "iwalog/random_matrices.hpp"

namespace gen {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}

  long range(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng); }
  bool coin() { return range(0, 1) == 1; }

  mpz_class integer(long lo, long hi) { return mpz_class(range(lo, hi)); }

  /// Uniform in [0, p^k) built from 32-bit limbs.
  mpz_class below_power(unsigned p, int k) {
    mpz_class bound;
    mpz_ui_pow_ui(bound.get_mpz_t(), p, static_cast<unsigned long>(k));
    mpz_class x = 0;
    const std::size_t limbs = mpz_sizeinbase(bound.get_mpz_t(), 2) / 32 + 2;
    for (std::size_t i = 0; i < limbs; ++i) {
      x <<= 32;
      x += static_cast<unsigned long>(eng() & 0xffffffffu);
    }
    return x % bound;
  }

  /// Nonzero scalar p^v u with v in [0, max_val].
  iwalog::PAdicScalar scalar(unsigned p, int precision, int max_val = 3) {
    const int v = static_cast<int>(range(0, max_val));
    mpz_class u;
    do {
      u = below_power(p, precision - v);
    } while (u % p == 0);
    return iwalog::PAdicScalar::from_parts(p, v, u, precision);
  }

  std::vector<mpz_class> int_vector(std::size_t n, long lo, long hi) {
    std::vector<mpz_class> v(n);
    for (auto& x : v) x = integer(lo, hi);
    return v;
  }

  /// Element with small integer coordinates in the zeta basis; nonzero.
  iwalog::CycloElement cyclo(unsigned p, int level, int precision, long bound = 9) {
    const long n = iwalog::phi_prime_power(p, level);
    while (true) {
      std::vector<iwalog::PAdicScalar> c;
      bool any = false;
      for (long i = 0; i < n; ++i) {
        const long x = range(-bound, bound);
        any = any || x != 0;
        c.push_back(iwalog::PAdicScalar::from_integer(p, x, precision));
      }
      if (any) return iwalog::CycloElement::from_coefficients(p, level, c);
    }
  }

  /// Nonzero bivariate polynomial with degrees <= (dx, dy) and small integer coefficients.
  iwalog::IwasawaPoly poly(unsigned p, int dx, int dy, int precision, long bound = 9) {
    while (true) {
      std::vector<iwalog::PolyTerm> t;
      for (int i = 0; i <= dx; ++i)
        for (int j = 0; j <= dy; ++j)
          if (coin()) t.push_back({i, j, iwalog::PAdicScalar::from_integer(p, range(-bound, bound), precision)});
      auto f = iwalog::IwasawaPoly::from_terms(p, t);
      if (!f.is_zero()) return f;
    }
  }
};

}  // namespace gen
