#pragma once

// Independent reference computations over Z, used only by tests.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

using ZMatrix = std::vector<std::vector<mpz_class>>;

inline long ipow(long b, int e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

/// Fraction-free Gaussian elimination; returns the rank over Q.
inline long bareiss_rank(ZMatrix a) {
  const std::size_t rows = a.size();
  if (!rows) return 0;
  const std::size_t cols = a[0].size();
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]);
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return static_cast<long>(r);
}

/// Exact determinant of a square integer matrix (Bareiss).
inline mpz_class bareiss_det(ZMatrix a) {
  const std::size_t n = a.size();
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(a[piv], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

/// Leibniz expansion over all permutations. `mul`, `add`, `neg` act on T.
template <class T, class Mul, class Add, class Neg>
T leibniz_det(const std::vector<std::vector<T>>& a, const T& zero, const T& one, Mul mul, Add add, Neg neg) {
  const std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  T total = zero;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    T term = one;
    for (std::size_t i = 0; i < n; ++i) term = mul(term, a[i][perm[i]]);
    total = add(total, inversions % 2 ? neg(term) : term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// Orbits of (Z/p^n)^2 under (a, b) -> (u a, u b), u a unit. Returns orbit id per pair (a * p^n + b).
struct OrbitCensus {
  long modulus = 1;
  std::vector<int> orbit_of;
  std::vector<long> sizes;
};

inline OrbitCensus brute_orbits(long p, int n) {
  OrbitCensus c;
  c.modulus = ipow(p, n);
  const long q = c.modulus;
  c.orbit_of.assign(static_cast<std::size_t>(q * q), -1);
  for (long a = 0; a < q; ++a) {
    for (long b = 0; b < q; ++b) {
      if (c.orbit_of[static_cast<std::size_t>(a * q + b)] >= 0) continue;
      const int id = static_cast<int>(c.sizes.size());
      std::set<long> members;
      for (long u = 1; u < q || (q == 1 && u == 1); ++u) {
        if (q > 1 && u % p == 0) continue;
        members.insert(((u * a) % q) * q + (u * b) % q);
        if (q == 1) break;
      }
      for (long m : members) c.orbit_of[static_cast<std::size_t>(m)] = id;
      c.sizes.push_back(static_cast<long>(members.size()));
    }
  }
  return c;
}

/// Dense bivariate integer polynomial, coefficient of X^i Y^j at [i][j].
using ZPoly2 = std::vector<std::vector<mpz_class>>;

/// omega_n(T) = (1+T)^{p^n} - 1 as integer coefficients, constant term first.
inline std::vector<mpz_class> omega_coeffs(long p, int n) {
  const long q = ipow(p, n);
  std::vector<mpz_class> c(static_cast<std::size_t>(q + 1));
  for (long k = 0; k <= q; ++k) mpz_bin_uiui(c[static_cast<std::size_t>(k)].get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(k));
  c[0] = 0;
  return c;
}

/// Z_p-rank of Lambda/(f, omega_n(X), omega_n(Y)) = p^{2n} - rank_Q(multiplication by f).
/// terms: (i, j, c) meaning c X^i Y^j.
inline long coinvariant_rank_bruteforce(long p, int n, const std::vector<std::tuple<int, int, long>>& terms) {
  const long q = ipow(p, n);
  const auto om = omega_coeffs(p, n);
  const std::size_t d = static_cast<std::size_t>(q);
  ZMatrix m(d * d, std::vector<mpz_class>(d * d, 0));
  for (std::size_t bi = 0; bi < d; ++bi) {
    for (std::size_t bj = 0; bj < d; ++bj) {
      // f * X^bi Y^bj
      std::size_t span = 0;
      for (const auto& [i, j, c] : terms) span = std::max<std::size_t>(span, static_cast<std::size_t>(std::max(i, j)));
      const std::size_t w = d + span + 1;
      ZPoly2 g(w, std::vector<mpz_class>(w, 0));
      for (const auto& [i, j, c] : terms) g[bi + static_cast<std::size_t>(i)][bj + static_cast<std::size_t>(j)] += c;
      // reduce X-degree, then Y-degree, by the monic omega_n
      for (std::size_t e = w; e-- > d;) {
        for (std::size_t y = 0; y < w; ++y) {
          if (g[e][y] == 0) continue;
          const mpz_class c = g[e][y];
          g[e][y] = 0;
          for (std::size_t k = 0; k < d; ++k) g[e - d + k][y] -= c * om[k];
        }
      }
      for (std::size_t x = 0; x < d; ++x) {
        for (std::size_t e = w; e-- > d;) {
          if (g[x][e] == 0) continue;
          const mpz_class c = g[x][e];
          g[x][e] = 0;
          for (std::size_t k = 0; k < d; ++k) g[x][e - d + k] -= c * om[k];
        }
      }
      for (std::size_t x = 0; x < d; ++x)
        for (std::size_t y = 0; y < d; ++y) m[x * d + y][bi * d + bj] = g[x][y];
    }
  }
  return q * q - bareiss_rank(std::move(m));
}

/// v_p(N(x)) / phi(p^n) for x = sum c_k zeta_{p^n}^k with integer c_k; the norm is the
/// determinant of multiplication by x on Z[zeta]. Returns {numerator, denominator}; x must be nonzero.
inline std::pair<long, long> norm_valuation(long p, int n, const std::vector<mpz_class>& coords) {
  const long m = ipow(p, n - 1);
  const long phi = (p - 1) * m;
  std::vector<mpz_class> cyc(static_cast<std::size_t>(phi + 1), 0);
  for (long i = 0; i < p; ++i) cyc[static_cast<std::size_t>(i * m)] = 1;
  auto reduce = [&](std::vector<mpz_class> v) {
    for (long e = static_cast<long>(v.size()) - 1; e >= phi; --e) {
      const mpz_class c = v[static_cast<std::size_t>(e)];
      if (c == 0) continue;
      for (long k = 0; k <= phi; ++k) v[static_cast<std::size_t>(e - phi + k)] -= c * cyc[static_cast<std::size_t>(k)];
    }
    v.resize(static_cast<std::size_t>(phi));
    return v;
  };
  std::vector<mpz_class> padded = coords;
  if (padded.size() < static_cast<std::size_t>(phi)) padded.resize(static_cast<std::size_t>(phi), 0);
  const std::vector<mpz_class> x = reduce(padded);
  ZMatrix mat(static_cast<std::size_t>(phi), std::vector<mpz_class>(static_cast<std::size_t>(phi), 0));
  for (long k = 0; k < phi; ++k) {
    std::vector<mpz_class> prod(static_cast<std::size_t>(2 * phi), 0);
    for (long i = 0; i < phi; ++i) prod[static_cast<std::size_t>(i + k)] += x[static_cast<std::size_t>(i)];
    const auto col = reduce(prod);
    for (long i = 0; i < phi; ++i) mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = col[static_cast<std::size_t>(i)];
  }
  mpz_class det = bareiss_det(mat);
  if (det < 0) det = -det;
  long v = 0;
  while (det != 0 && det % p == 0) {
    det /= p;
    ++v;
  }
  long g = std::gcd(v, phi);
  if (g == 0) g = 1;
  return {v / g, phi / g};
}

}  // namespace oracle
