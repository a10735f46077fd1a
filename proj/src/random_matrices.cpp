#include "iwalog/random_matrices.hpp"

#include <random>

namespace iwalog {

namespace {

mpz_class uniform_below(std::mt19937_64& rng, const mpz_class& bound) {
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  while (true) {
    mpz_class x = 0;
    for (std::size_t w = 0; w < words; ++w) {
      x <<= 64;
      const std::uint64_t r = rng();
      x += mpz_class(static_cast<unsigned long>(r >> 32)) << 32;
      x += static_cast<unsigned long>(r & 0xffffffffu);
    }
    const std::size_t extra = words * 64 - bits;
    if (extra) x >>= static_cast<mp_bitcnt_t>(extra);
    if (x < bound) return x;
  }
}

enum class Shape { Full, AntiDiagonal, Diagonal };

IntMatrix random_unit_matrix(std::mt19937_64& rng, unsigned p, int g, Shape shape, int precision) {
  const mpz_class& bound = prime_power(p, precision);
  const std::size_t n = static_cast<std::size_t>(2 * g);
  while (true) {
    IntMatrix m(n, std::vector<mpz_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const bool diag_block = (i < static_cast<std::size_t>(g)) == (j < static_cast<std::size_t>(g));
        if ((shape == Shape::AntiDiagonal && diag_block) || (shape == Shape::Diagonal && !diag_block)) continue;
        m[i][j] = uniform_below(rng, bound);
      }
    }
    if (determinant(scalar_matrix(p, m, precision)).is_unit()) return m;
  }
}

}  // namespace

TestMatrices gen_test_matrices(unsigned p, int g, std::uint64_t seed, bool block_antidiag, int precision) {
  if (!is_odd_prime(p)) throw StructuralError("p must be an odd prime");
  if (g < 1) throw StructuralError("g must be >= 1");
  std::mt19937_64 rng(seed);
  TestMatrices out;
  const Shape shape = block_antidiag ? Shape::AntiDiagonal : Shape::Full;
  out.c_p = random_unit_matrix(rng, p, g, shape, precision);
  out.c_pc = random_unit_matrix(rng, p, g, shape, precision);
  return out;
}

IntMatrix gen_block_diagonal(unsigned p, int g, std::uint64_t seed, int precision) {
  if (!is_odd_prime(p)) throw StructuralError("p must be an odd prime");
  if (g < 1) throw StructuralError("g must be >= 1");
  std::mt19937_64 rng(seed);
  return random_unit_matrix(rng, p, g, Shape::Diagonal, precision);
}

DieudonneInput make_input(unsigned p, int g, const IntMatrix& c_p, const IntMatrix& c_pc, int precision) {
  DieudonneInput d;
  d.p = p;
  d.g = g;
  d.precision = precision;
  d.c_p = scalar_matrix(p, c_p, precision);
  d.c_pc = scalar_matrix(p, c_pc, precision);
  return d;
}

}  // namespace iwalog
