#include <doctest.h>

#include "iwalog/block_form.hpp"
#include "iwalog/random_matrices.hpp"
#include "oracles/oracles.hpp"

using namespace iwalog;

TEST_CASE("generated matrices are deterministic in the seed") {
  const auto a = gen_test_matrices(3, 2, 5, true);
  const auto b = gen_test_matrices(3, 2, 5, true);
  const auto c = gen_test_matrices(3, 2, 6, true);
  CHECK(a.c_p == b.c_p);
  CHECK(a.c_pc == b.c_pc);
  CHECK(a.c_p != c.c_p);
  CHECK(gen_block_diagonal(5, 2, 9) == gen_block_diagonal(5, 2, 9));
}

TEST_CASE("property: generated matrices have unit determinant and the requested shape") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const unsigned p = seed % 2 ? 3 : 5;
    const int g = static_cast<int>(seed % 3) + 1;
    const bool block = seed % 4 != 0;
    const auto t = gen_test_matrices(p, g, seed, block);
    const std::size_t n = static_cast<std::size_t>(2 * g);
    for (const auto* m : {&t.c_p, &t.c_pc}) {
      REQUIRE(m->size() == n);
      mpz_class bound;
      mpz_ui_pow_ui(bound.get_mpz_t(), p, kDefaultPrecision);
      for (std::size_t i = 0; i < n; ++i) {
        REQUIRE((*m)[i].size() == n);
        for (std::size_t j = 0; j < n; ++j) {
          CHECK((*m)[i][j] >= 0);
          CHECK((*m)[i][j] < bound);
          if (block && (i < n / 2) == (j < n / 2)) CHECK((*m)[i][j] == 0);
        }
      }
      CHECK(oracle::bareiss_det(*m) % p != 0);
    }
    const auto report = validate_input(make_input(p, g, t.c_p, t.c_pc), kDefaultPrecision / 2);
    CHECK(report.per_prime[0].det_unit);
    CHECK(report.per_prime[1].det_unit);
    CHECK(report.per_prime[0].block_anti_diagonal == block);

    const auto bd = gen_block_diagonal(p, g, seed);
    CHECK(is_block_diagonal(scalar_matrix(p, bd), g));
    CHECK(oracle::bareiss_det(bd) % p != 0);
  }
}
