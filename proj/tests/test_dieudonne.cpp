#include <doctest.h>

#include <map>
#include <set>

#include "iwalog/dieudonne.hpp"
#include "iwalog/random_matrices.hpp"
#include "support/gen.hpp"

using namespace iwalog;

namespace {

const IntMatrix kElliptic = {{0, -1}, {1, 0}};

DieudonneInput elliptic(int prec = 64) { return make_input(3, 1, kElliptic, kElliptic, prec); }

IwasawaPoly phi3(Var v) { return IwasawaPoly::shifted_cyclotomic(3, 1, v); }

long binomial(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

SignedIndex complement(const SignedIndex& s) {
  const std::uint32_t mask = (1u << (2 * s.g)) - 1;
  return {s.g, ~s.jp & mask, ~s.jpc & mask};
}

}  // namespace

TEST_CASE("validation examples") {
  const auto ok = validate_input(elliptic(), 32);
  CHECK(ok.accepted);
  CHECK(ok.per_prime[0].block_anti_diagonal);
  CHECK(ok.per_prime[0].det_unit);

  const auto bad = validate_input(make_input(3, 1, {{3, 0}, {0, 1}}, kElliptic), 32);
  CHECK_FALSE(bad.accepted);
  CHECK(bad.reason.find("determinant not a unit") != std::string::npos);

  IntMatrix id(4, std::vector<mpz_class>(4, 0));
  for (int i = 0; i < 4; ++i) id[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  const auto idr = validate_input(make_input(3, 2, id, id), 32);
  CHECK(idr.accepted);
  CHECK(idr.per_prime[0].newton.eigenvalue_one);

  const auto ns = validate_input(make_input(3, 1, {{1, 0, 0}, {0, 1, 0}}, kElliptic), 32);
  CHECK_FALSE(ns.accepted);
  CHECK(ns.reason.find("not square") != std::string::npos);
  const auto wd = validate_input(make_input(3, 1, id, kElliptic), 32);
  CHECK_FALSE(wd.accepted);
  CHECK(wd.reason.find("wrong dimension") != std::string::npos);
}

TEST_CASE("Newton polygon of the elliptic Frobenius") {
  const auto v = validate_input(elliptic(), 32);
  // C_phi = [[0,-1/p],[1,0]]: charpoly t^2 + 1/p, both roots of valuation -1/2
  const auto& nr = v.per_prime[0].newton;
  REQUIRE(nr.root_valuations.size() == 2);
  CHECK(nr.root_valuations[0] == mpq_class(-1, 2));
  CHECK(nr.root_valuations[1] == mpq_class(-1, 2));
  CHECK(nr.reading_closed_left);
  CHECK(nr.reading_closed_right);
  CHECK_FALSE(nr.eigenvalue_one);
}

TEST_CASE("c_step and h_matrix on the elliptic input") {
  const auto d = elliptic();
  const auto c1 = c_step(d, Prime::P, 1);
  CHECK(c1.m(0, 0).is_zero());
  CHECK(c1.m(0, 1).equals_to_precision(IwasawaPoly::from_integer(3, 1)));
  CHECK(c1.m(1, 0).equals_to_precision(-phi3(Var::X)));
  CHECK(c1.m(1, 1).is_zero());
  CHECK(c1.row_tags[1].level == 1);

  const auto h2 = h_matrix(d, Prime::P, 2);
  CHECK(h2.m(0, 0).equals_to_precision(-phi3(Var::X)));
  CHECK(h2.m(1, 1).equals_to_precision(-IwasawaPoly::shifted_cyclotomic(3, 2, Var::X)));
  CHECK(h2.m(0, 1).is_zero());
  CHECK(h2.m(1, 0).is_zero());
  CHECK(h_matrix(d, Prime::PC, 1).m(1, 0).equals_to_precision(-phi3(Var::Y)));
}

TEST_CASE("block anti-diagonal c_step exposes B_1 = A_2^{-1}, B_2 = A_1^{-1}") {
  const IntMatrix c = {{0, 0, 1, 2}, {0, 0, 0, 1}, {2, 1, 0, 0}, {1, 1, 0, 0}};
  const auto d = make_input(5, 2, c, c);
  const auto step = c_step(d, Prime::P, 1);
  const auto triv = eval_matrix_at_theta(step, CharacterPoint::trivial(5));
  // at the trivial character Phi -> p, so the bottom-left block is p A_1^{-1}
  const ScalarMatrix a1 = scalar_matrix(5, {{1, 2}, {0, 1}});
  const ScalarMatrix a2 = scalar_matrix(5, {{2, 1}, {1, 1}});
  const auto b1 = inverse(a2);
  const auto b2 = inverse(a1);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(triv(i, j + 2).equals_to_precision(CycloElement::from_scalar(b1(i, j))));
      CHECK(triv(i + 2, j).equals_to_precision(CycloElement::from_scalar(PAdicScalar::from_integer(5, 5) * b2(i, j))));
      CHECK(triv(i, j).is_zero());
    }
  }
}

TEST_CASE("c_step at the trivial character is diag(1, p) C^{-1}") {
  const auto t = gen_test_matrices(3, 1, 5, false);
  const auto d = make_input(3, 1, t.c_p, t.c_pc);
  const auto ev = eval_matrix_at_theta(c_step(d, Prime::P, 2), CharacterPoint::trivial(3));
  const auto inv = inverse(d.c_p);
  CHECK(ev(0, 0).equals_to_precision(CycloElement::from_scalar(inv(0, 0))));
  CHECK(ev(1, 1).equals_to_precision(CycloElement::from_scalar(PAdicScalar::from_integer(3, 3) * inv(1, 1))));
}

TEST_CASE("h_block assembly") {
  const auto d = elliptic();
  const auto hb = h_block(h_matrix(d, Prime::P, 1), h_matrix(d, Prime::PC, 1));
  CHECK(hb.m.rows() == 4);
  CHECK(hb.block_diagonal);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if ((i < 2) != (j < 2)) CHECK(hb.m(i, j).is_exact_zero());
}

TEST_CASE("minor examples") {
  const auto d = elliptic();
  const auto hb = h_block(h_matrix(d, Prime::P, 1), h_matrix(d, Prime::PC, 1));
  const auto i0 = distinguished(1, Distinguished::I0);
  const auto i1 = distinguished(1, Distinguished::I1);
  CHECK(minor(hb, i0, i1).equals_to_precision(IwasawaPoly::from_integer(3, 1)));
  CHECK(minor(hb, i0, i0).is_zero());
}

TEST_CASE("index set census") {
  CHECK(enumerate_index_sets(1).size() == 6);
  CHECK(enumerate_index_sets(2).size() == 70);
  for (int g = 1; g <= 3; ++g) {
    const auto all = enumerate_index_sets(g);
    CHECK(static_cast<long>(all.size()) == binomial(4 * g, 2 * g));
    // brute force over all mask pairs
    long count = 0;
    for (std::uint32_t a = 0; a < (1u << (2 * g)); ++a)
      for (std::uint32_t b = 0; b < (1u << (2 * g)); ++b)
        if (__builtin_popcount(a) + __builtin_popcount(b) == 2 * g) ++count;
    CHECK(count == static_cast<long>(all.size()));
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    std::set<std::string> tags;
    for (const auto& s : all) {
      CHECK(s.in_family());
      seen.insert({s.jp, s.jpc});
      if (!s.tag().empty()) tags.insert(s.tag());
    }
    CHECK(seen.size() == all.size());
    CHECK(tags.size() == 6);
  }
}

TEST_CASE("evaluation examples") {
  const auto d = elliptic();
  const auto h1 = eval_matrix_at_theta(h_matrix(d, Prime::P, 1), CharacterPoint::make(3, 1, 0));
  CHECK(h1(0, 1).equals_to_precision(CycloElement::from_integer(3, 1, 1)));
  CHECK(h1(1, 0).is_exact_zero());
  const auto h2 = eval_matrix_at_theta(h_matrix(d, Prime::P, 2), CharacterPoint::make(3, 2, 0));
  const auto ratio = CycloElement::epsilon_at(3, 1, 2) / CycloElement::epsilon(3, 2);
  CHECK(h2(0, 0).equals_to_precision(-ratio));
  CHECK(h2(1, 1).is_exact_zero());
  const auto ht = eval_matrix_at_theta(h_matrix(d, Prime::P, 2), CharacterPoint::trivial(3));
  CHECK(ht(0, 0).equals_to_precision(CycloElement::from_integer(3, 0, -3)));
  CHECK(ht(1, 1).equals_to_precision(CycloElement::from_integer(3, 0, -3)));
}

TEST_CASE("property: lower half vanishes at full conductor for random C") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const unsigned p = seed % 2 ? 3 : 5;
    const int g = seed % 3 == 0 ? 2 : 1;
    const auto t = gen_test_matrices(p, g, seed, false);
    const auto d = make_input(p, g, t.c_p, t.c_pc);
    for (int r = 1; r <= 3; ++r) {
      const auto ev = eval_matrix_at_theta(h_matrix(d, Prime::PC, r), CharacterPoint::make(p, 1, r, 1, 2));
      for (std::size_t i = static_cast<std::size_t>(g); i < static_cast<std::size_t>(2 * g); ++i)
        for (std::size_t j = 0; j < ev.cols(); ++j) CHECK(ev(i, j).is_exact_zero());
      // and the untagged top half is generically nonzero
      bool any = false;
      for (std::size_t j = 0; j < ev.cols(); ++j) any = any || !ev(0, j).is_zero();
      CHECK(any);
    }
  }
}

TEST_CASE("property: minors commute with evaluation") {
  for (std::uint64_t seed = 20; seed < 24; ++seed) {
    const auto t = gen_test_matrices(3, 1, seed, false);
    const auto d = make_input(3, 1, t.c_p, t.c_pc);
    const auto hb = h_block(h_matrix(d, Prime::P, 2), h_matrix(d, Prime::PC, 1));
    for (const auto& w : {CharacterPoint::make(3, 1, 2), CharacterPoint::make(3, 2, 1, 2, 1), CharacterPoint::trivial(3)}) {
      const auto ev = eval_matrix_at_theta(hb, w);
      for (const auto& I : enumerate_index_sets(1))
        for (const auto& J : enumerate_index_sets(1))
          CHECK(eval_at_character(minor(hb, I, J), w).equals_to_precision(minor_at(ev, I, J)));
    }
  }
}

TEST_CASE("property: Laplace expansion along the I0 rows reproduces det H") {
  for (std::uint64_t seed = 30; seed < 34; ++seed) {
    const auto t = gen_test_matrices(3, 1, seed, false, 32);
    const auto d = make_input(3, 1, t.c_p, t.c_pc, 32);
    const auto hb = h_block(h_matrix(d, Prime::P, 1), h_matrix(d, Prime::PC, 2));
    const auto i0 = distinguished(1, Distinguished::I0);
    const auto rows = i0.positions();
    IwasawaPoly sum = IwasawaPoly::exact_zero(3);
    for (const auto& J : enumerate_index_sets(1)) {
      const auto cols = J.positions();
      long exponent = 0;
      for (auto r : rows) exponent += static_cast<long>(r + 1);
      for (auto c : cols) exponent += static_cast<long>(c + 1);
      const auto term = minor(hb, i0, J) * minor(hb, complement(i0), complement(J));
      sum = exponent % 2 ? sum - term : sum + term;
    }
    CHECK(sum.equals_to_precision(determinant(hb.m)));
  }
}

TEST_CASE("property: row sets other than I0 give zero minors at full conductor") {
  for (std::uint64_t seed = 40; seed < 44; ++seed) {
    const auto t = gen_test_matrices(3, 1, seed, false);
    const auto d = make_input(3, 1, t.c_p, t.c_pc);
    const auto hb = h_block(h_matrix(d, Prime::P, 2), h_matrix(d, Prime::PC, 1));
    const auto ev = eval_matrix_at_theta(hb, CharacterPoint::make(3, 2, 1));
    const auto i0 = distinguished(1, Distinguished::I0);
    for (const auto& I : enumerate_index_sets(1)) {
      if (I == i0) continue;
      for (const auto& J : enumerate_index_sets(1)) CHECK(minor_at(ev, I, J).is_exact_zero());
    }
  }
}

TEST_CASE("approximants") {
  const auto d = elliptic();
  const auto cp = c_phi(d, Prime::P);
  CHECK(cp(0, 1).equals_to_precision(PAdicScalar::from_rational(3, mpq_class(-1, 3))));
  const auto m1 = m_approximant(d, Prime::P, 1);
  const auto c1 = c_step(d, Prime::P, 1);
  const auto cp2 = cp * cp;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      IwasawaPoly expect = IwasawaPoly::exact_zero(3);
      for (std::size_t k = 0; k < 2; ++k) expect = expect + cp2(i, k) * c1.m(k, j);
      CHECK(m1(i, j).equals_to_precision(expect));
    }
  }
  const auto rows = convergence_diagnostic(d, Prime::P, 6, 3);
  std::map<int, std::vector<Valuation>> by_degree;
  for (const auto& r : rows) by_degree[r.degree].push_back(r.valuation);
  for (const auto& v : by_degree[0]) CHECK(v.at_least_threshold(60));
  for (const auto& [deg, vals] : by_degree) {
    // only exact valuations carry information; zero differences sit at the precision floor
    for (std::size_t i = 1; i < vals.size(); ++i) {
      if (!vals[i].is_exact() || !vals[i - 1].is_exact()) continue;
      CHECK(vals[i].value() >= vals[i - 1].value());
    }
  }
}
