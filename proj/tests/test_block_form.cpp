#include <doctest.h>

#include "iwalog/block_form.hpp"
#include "iwalog/random_matrices.hpp"
#include "iwalog/rank_growth.hpp"
#include "support/gen.hpp"

using namespace iwalog;

namespace {

const IntMatrix kElliptic = {{0, -1}, {1, 0}};

DieudonneInput elliptic() { return make_input(3, 1, kElliptic, kElliptic); }

CharacterPoint theta_q(unsigned p, Prime q, int k) {
  return q == Prime::P ? CharacterPoint::make(p, k, 0) : CharacterPoint::make(p, 0, k);
}

}  // namespace

TEST_CASE("delta_k examples") {
  CHECK(delta_k(3, 1).equals_to_precision(CycloElement::from_integer(3, 1, 1)));
  const auto d2 = delta_k(3, 2);
  CHECK(d2.equals_to_precision(CycloElement::epsilon_at(3, 1, 2) / CycloElement::epsilon(3, 2)));
  CHECK(d2.valuation() == Valuation::exact(mpq_class(1, 3)));
  CHECK(delta_k(3, 4).valuation() == Valuation::exact(mpq_class(1, 3) + mpq_class(1, 27)));
  CHECK(delta_k(3, 3).level() == 3);
  CHECK_THROWS_AS(delta_k(3, 0), StructuralError);
}

TEST_CASE("delta valuation formula matches the computed element") {
  for (unsigned p : {3u, 5u})
    for (int k = 1; k <= (p == 3 ? 5 : 4); ++k)
      CHECK(delta_k(p, k).valuation() == Valuation::exact(delta_valuation(p, k)));
}

TEST_CASE("closed form on the elliptic input") {
  const auto b = BlockData::from_input(elliptic());
  const auto h1 = closed_form_h(b, Prime::P, 1);
  CHECK(h1(0, 1).equals_to_precision(CycloElement::from_integer(3, 1, 1)));
  CHECK(h1(0, 0).is_exact_zero());
  CHECK(h1(1, 0).is_exact_zero());
  const auto h2 = closed_form_h(b, Prime::P, 2);
  CHECK(h2(0, 0).equals_to_precision(-(CycloElement::epsilon_at(3, 1, 2) / CycloElement::epsilon(3, 2))));
  CHECK(h2(0, 1).is_exact_zero());
}

TEST_CASE("closed form rejects non-block input") {
  const auto t = gen_test_matrices(3, 1, 3, false);
  CHECK_THROWS_AS(BlockData::from_input(make_input(3, 1, t.c_p, t.c_pc)), ValidationError);
}

TEST_CASE("property: closed form equals direct evaluation") {
  for (std::uint64_t seed = 100; seed < 104; ++seed) {
    for (unsigned p : {3u, 5u}) {
      for (int g : {1, 2}) {
        const auto t = gen_test_matrices(p, g, seed, true);
        const auto d = make_input(p, g, t.c_p, t.c_pc);
        const auto b = BlockData::from_input(d);
        for (Prime q : {Prime::P, Prime::PC}) {
          const int kmax = p == 5 && g == 2 ? 3 : 4;
          const auto tower = h_tower(d, q, kmax);
          for (int k = 1; k <= kmax; ++k) {
            const auto direct = eval_matrix_at_theta(tower[static_cast<std::size_t>(k - 1)], theta_q(p, q, k));
            CHECK(equals_to_precision(closed_form_h(b, q, k), direct));
          }
        }
      }
    }
  }
}

TEST_CASE("surviving index by parity") {
  CHECK(surviving_index(1, 2, 2).tag() == "I0");
  CHECK(surviving_index(1, 1, 1).tag() == "I1");
  CHECK(surviving_index(2, 2, 1).tag() == "mix01");
  CHECK(surviving_index(2, 1, 2).tag() == "mix10");
  CHECK(surviving_index(2, 2, 1) == SignedIndex{2, 0b0011, 0b1100});
}

TEST_CASE("vanishing pattern on the elliptic input") {
  const auto rep = verify_vanishing_pattern(elliptic(), 1, 1, CharacterPoint::make(3, 1, 1), 32);
  CHECK(rep.passed);
  REQUIRE(rep.rows.size() == 6);
  int zeros = 0;
  for (const auto& row : rep.rows) {
    if (row.survivor) {
      CHECK(row.J.tag() == "I1");
      CHECK(row.valuation == Valuation::exact(0));
    } else {
      CHECK(row.status == MinorStatus::SymbolicZero);
      ++zeros;
    }
  }
  CHECK(zeros == 5);
  CHECK_THROWS_AS(verify_vanishing_pattern(elliptic(), 1, 2, CharacterPoint::make(3, 1, 1), 32), StructuralError);
}

TEST_CASE("vanishing pattern for random g = 2 block data") {
  const auto t = gen_test_matrices(3, 2, 77, true);
  const auto d = make_input(3, 2, t.c_p, t.c_pc);
  const auto rep = verify_vanishing_pattern(d, 2, 1, CharacterPoint::make(3, 2, 1, 2, 1), 32);
  CHECK(rep.passed);
  CHECK(rep.rows.size() == 70);
  long zeros = 0;
  for (const auto& row : rep.rows) zeros += row.status == MinorStatus::SymbolicZero;
  CHECK(zeros == 69);
  CHECK(rep.failure.empty());
}

TEST_CASE("property: survivor valuation = g (val delta_r + val delta_s) + block determinants") {
  for (std::uint64_t seed = 200; seed < 203; ++seed) {
    for (int g : {1, 2}) {
      const auto t = gen_test_matrices(3, g, seed, true);
      const auto d = make_input(3, g, t.c_p, t.c_pc);
      const auto tp = h_tower(d, Prime::P, 3);
      const auto tpc = h_tower(d, Prime::PC, 3);
      for (int r = 1; r <= 3; ++r) {
        for (int s = 1; s <= 3; ++s) {
          const auto rep = verify_vanishing_pattern(tp, tpc, r, s, CharacterPoint::make(3, r, s), 32);
          REQUIRE(rep.passed);
          const mpq_class expect = g * (delta_valuation(3, r) + delta_valuation(3, s));
          CHECK(rep.survivor_valuation == Valuation::exact(expect));
          CHECK(rep.survivor_valuation.value() >= 0);
          CHECK(rep.survivor_valuation.value() < 2 * g);
        }
      }
    }
  }
}

TEST_CASE("conjugation examples") {
  const auto c = scalar_matrix(3, kElliptic);
  const auto b = scalar_matrix(3, {{2, 0}, {0, 5}});
  const auto res = conjugate_basis(c, b, 1);
  CHECK(res.input_anti_diagonal);
  CHECK(res.output_anti_diagonal);
  CHECK(res.conjugated(0, 1).equals_to_precision(PAdicScalar::from_rational(3, mpq_class(-2, 5))));
  CHECK(res.conjugated(1, 0).equals_to_precision(PAdicScalar::from_rational(3, mpq_class(5, 2))));
  const auto id = conjugate_basis(c, scalar_matrix(3, {{1, 0}, {0, 1}}), 1);
  CHECK(equals_to_precision(id.conjugated, c));
  CHECK_THROWS_AS(conjugate_basis(c, scalar_matrix(3, {{1, 1}, {0, 1}}), 1), ValidationError);
  CHECK_THROWS_AS(conjugate_basis(c, scalar_matrix(3, {{3, 0}, {0, 1}}), 1), ValidationError);
}

TEST_CASE("property: block-diagonal conjugation preserves anti-diagonality") {
  for (std::uint64_t seed = 300; seed < 320; ++seed) {
    const unsigned p = seed % 2 ? 3 : 5;
    const int g = seed % 3 ? 2 : 1;
    const auto t = gen_test_matrices(p, g, seed, true);
    const auto bm = gen_block_diagonal(p, g, seed);
    const auto res = conjugate_basis(scalar_matrix(p, t.c_p), scalar_matrix(p, bm), g);
    CHECK(res.input_anti_diagonal);
    CHECK(res.output_anti_diagonal);
  }
}

TEST_CASE("kernel invariance") {
  gen::Rng rng(7);
  const int g = 2;
  Matrix<CycloElement> v(4, 3, CycloElement::exact_zero(3, 1));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (!(j == 0 && i < 2)) v(i, j) = rng.cyclo(3, 1, 64);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto b = scalar_matrix(3, gen_block_diagonal(3, g, seed));
    for (RowSelection sel : {RowSelection::Top, RowSelection::Bottom, RowSelection::Full, RowSelection::Empty}) {
      const auto kr = kernel_invariance_check(v, b, g, sel);
      CHECK(kr.equal);
      CHECK(kr.covered);
      // brute-force locus on the input side
      std::vector<std::size_t> expect;
      for (std::size_t j = 0; j < 3; ++j) {
        bool all = true;
        for (std::size_t i = 0; i < 4; ++i) {
          const bool selected = sel == RowSelection::Full || (sel == RowSelection::Top && i < 2) ||
                                (sel == RowSelection::Bottom && i >= 2);
          if (selected && !v(i, j).is_zero()) all = false;
        }
        if (all) expect.push_back(j);
      }
      CHECK(kr.locus_before == expect);
    }
    const auto top = kernel_invariance_check(v, b, g, RowSelection::Top);
    CHECK(top.locus_before == std::vector<std::size_t>{0});
    const auto mixed = kernel_invariance_check(v, b, g, RowSelection::Custom, {0, 2});
    CHECK_FALSE(mixed.covered);
  }
}
