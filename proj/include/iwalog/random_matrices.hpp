#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "iwalog/dieudonne.hpp"

namespace iwalog {

using IntMatrix = std::vector<std::vector<mpz_class>>;

struct TestMatrices {
  IntMatrix c_p;
  IntMatrix c_pc;
};

/// Seeded 2g x 2g integer matrices with entries uniform in [0, p^N) and unit determinant.
/// With block_antidiag the diagonal g x g blocks are exactly zero.
TestMatrices gen_test_matrices(unsigned p, int g, std::uint64_t seed, bool block_antidiag,
                               int precision = kDefaultPrecision);

/// Block-diagonal 2g x 2g with both diagonal blocks in GL_g(Z_p).
IntMatrix gen_block_diagonal(unsigned p, int g, std::uint64_t seed, int precision = kDefaultPrecision);

DieudonneInput make_input(unsigned p, int g, const IntMatrix& c_p, const IntMatrix& c_pc,
                          int precision = kDefaultPrecision);

}  // namespace iwalog
