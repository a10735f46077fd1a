#include <doctest.h>

#include "iwalog/iwasawa_poly.hpp"
#include "support/gen.hpp"

using namespace iwalog;

namespace {

IwasawaPoly uni(unsigned p, Var v, std::initializer_list<long> c) {
  std::vector<mpz_class> z;
  for (long x : c) z.emplace_back(x);
  return IwasawaPoly::univariate(p, v, z);
}

}  // namespace

TEST_CASE("polynomial arithmetic examples") {
  const auto x = IwasawaPoly::variable(3, Var::X);
  const auto y = IwasawaPoly::variable(3, Var::Y);
  const auto xy = poly_arith(x, y, PolyOp::Mul);
  CHECK(xy.terms().size() == 1);
  CHECK(xy.coefficient(1, 1).residue() == 1);
  const auto phi = IwasawaPoly::shifted_cyclotomic(3, 1, Var::X);
  CHECK((phi * IwasawaPoly::from_integer(3, 1)).equals_to_precision(uni(3, Var::X, {3, 3, 1})));
  CHECK(omega(3, 1, Var::X).equals_to_precision(uni(3, Var::X, {0, 3, 3, 1})));
  CHECK(omega(3, 0, Var::X).equals_to_precision(x));
}

TEST_CASE("omega_n = omega_{n-1} * Phi_{p^n}(1+X)") {
  for (unsigned p : {3u, 5u})
    for (int n = 1; n <= 2; ++n)
      for (Var v : {Var::X, Var::Y})
        CHECK(omega(p, n, v).equals_to_precision(omega(p, n - 1, v) * IwasawaPoly::shifted_cyclotomic(p, n, v)));
}

TEST_CASE("degree caps") {
  const auto f = uni(3, Var::X, {1, 1, 1, 1});
  const auto capped = f.with_caps(2, std::nullopt);
  CHECK(capped.degree(Var::X) == 2);
  CHECK((capped * capped).degree(Var::X) == 2);
  CHECK(f.degree(Var::Y) == 0);
  CHECK(IwasawaPoly::exact_zero(3).degree(Var::X) == -1);
}

TEST_CASE("cap overflow is reported") {
  const auto x = IwasawaPoly::monomial(3, 5000, 0, PAdicScalar::from_integer(3, 1));
  const auto y = IwasawaPoly::monomial(3, 0, 5000, PAdicScalar::from_integer(3, 1));
  CHECK_THROWS_AS(x * y, CapOverflowError);
}

TEST_CASE("evaluation examples") {
  const auto w = CharacterPoint::make(3, 1, 0);
  CHECK(eval_at_character(IwasawaPoly::variable(3, Var::X), w).equals_to_precision(CycloElement::epsilon(3, 1)));
  const auto phi = IwasawaPoly::shifted_cyclotomic(3, 1, Var::X);
  CHECK(eval_at_character(phi, w).is_zero());
  const auto v = eval_at_character(phi, CharacterPoint::make(3, 2, 0));
  CHECK(v.equals_to_precision(CycloElement::epsilon_at(3, 1, 2) / CycloElement::epsilon(3, 2)));
  CHECK(v.valuation() == Valuation::exact(mpq_class(1, 3)));
  for (int n = 1; n <= 3; ++n) {
    const auto t = eval_at_character(IwasawaPoly::shifted_cyclotomic(5, n, Var::Y), CharacterPoint::trivial(5));
    CHECK(t.equals_to_precision(CycloElement::from_integer(5, 0, 5)));
  }
}

TEST_CASE("character points") {
  const auto w = CharacterPoint::make(3, 2, 1, 4, 2);
  CHECK(w.level() == 2);
  CHECK(w.order(Var::X) == 2);
  CHECK(w.order(Var::Y) == 1);
  CHECK(w.conductor() == "p^3(p^c)^2");
  CHECK_THROWS_AS(CharacterPoint::make(3, 1, 1, 3, 1), StructuralError);
}

TEST_CASE("omega_n vanishes exactly at orders <= n") {
  for (int n = 0; n <= 2; ++n) {
    const auto om = omega(3, n, Var::X);
    for (int r = 0; r <= 3; ++r) {
      for (long a : {1L, 2L}) {
        if (r == 0 && a == 2) continue;
        const auto v = eval_at_character(om, CharacterPoint::make(3, r, 1, a, 1));
        CHECK(v.is_zero() == (r <= n));
      }
    }
  }
}

TEST_CASE("property: evaluation is a ring homomorphism") {
  gen::Rng rng(31);
  for (int t = 0; t < 40; ++t) {
    const unsigned p = t % 2 ? 3 : 5;
    const auto f = rng.poly(p, 3, 2, 64);
    const auto g = rng.poly(p, 2, 3, 64);
    const int r = static_cast<int>(rng.range(0, 2));
    const int s = static_cast<int>(rng.range(0, 2));
    const long a = r ? rng.range(1, p - 1) : 1;
    const long b = s ? rng.range(1, p - 1) : 1;
    const auto w = CharacterPoint::make(p, r, s, a, b);
    const auto fw = eval_at_character(f, w);
    const auto gw = eval_at_character(g, w);
    CHECK(eval_at_character(f * g, w).equals_to_precision(fw * gw));
    CHECK(eval_at_character(f + g, w).equals_to_precision(fw + gw));
  }
}

TEST_CASE("property: evaluation agrees with direct substitution") {
  gen::Rng rng(32);
  for (int t = 0; t < 30; ++t) {
    const auto f = rng.poly(3, 4, 4, 64);
    const auto w = CharacterPoint::make(3, 2, 1, rng.coin() ? 1 : 2, rng.coin() ? 1 : 2);
    // substitute X = zeta_9^a - 1, Y = zeta_3^b - 1 term by term
    const auto ex = CycloElement::zeta_power(3, 2, w.a) - CycloElement::from_integer(3, 2, 1);
    const auto ey = CycloElement::zeta_power(3, 1, w.b).embed(2) - CycloElement::from_integer(3, 2, 1);
    CycloElement acc = CycloElement::exact_zero(3, 2);
    for (const auto& term : f.terms()) {
      CycloElement m = CycloElement::from_scalar(term.coeff, 2);
      for (int i = 0; i < term.i; ++i) m = m * ex;
      for (int j = 0; j < term.j; ++j) m = m * ey;
      acc = acc + m;
    }
    CHECK(eval_at_character(f, w).equals_to_precision(acc));
  }
}
