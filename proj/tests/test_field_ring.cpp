#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "kakeya/field.hpp"
#include "kakeya/ring.hpp"

using namespace kakeya;

TEST_CASE("field construction and moduli") {
  Field f2(2);
  CHECK(f2.q() == 2);
  CHECK(f2.modulus() == std::vector<uint32_t>{0, 1});

  // Lex-least monic irreducible of degree 2 over F_2 is 1 + x + x^2.
  Field f4(2, 2);
  CHECK(f4.q() == 4);
  CHECK(f4.modulus() == std::vector<uint32_t>{1, 1, 1});

  // Over F_3 the lex-least (constant term first) is 1 + x^2.
  Field f9(3, 2);
  CHECK(f9.modulus() == std::vector<uint32_t>{1, 0, 1});

  CHECK_THROWS_AS(Field(4), std::invalid_argument);
  CHECK_THROWS_AS(Field(2, 0), std::invalid_argument);
}

TEST_CASE("F_4 arithmetic: u * u = u + 1") {
  Field F(2, 2);
  uint32_t u = 2;  // the residue class of x
  CHECK(F.mul(u, u) == 3);      // x^2 = x + 1
  CHECK(F.add(u, 1) == 3);
  CHECK(F.mul(u, 3) == 1);      // x * (x+1) = x^2 + x = 1
}

TEST_CASE("field axioms hold on random triples") {
  std::mt19937_64 rng(42);
  for (auto [p, m] : std::vector<std::pair<uint32_t, uint32_t>>{
           {2, 1}, {3, 1}, {5, 1}, {2, 2}, {3, 2}, {2, 3}, {7, 1}}) {
    Field F(p, m);
    std::uniform_int_distribution<uint32_t> pick(0, static_cast<uint32_t>(F.q() - 1));
    for (int it = 0; it < 200; ++it) {
      uint32_t a = pick(rng), b = pick(rng), c = pick(rng);
      CHECK(F.add(a, b) == F.add(b, a));
      CHECK(F.mul(a, b) == F.mul(b, a));
      CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
      CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
      CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
      CHECK(F.add(a, F.neg(a)) == 0);
      CHECK(F.add(a, 0) == a);
      CHECK(F.mul(a, 1) == a);
      if (a != 0) CHECK(F.mul(a, F.inv(a)) == 1);
    }
  }
}

TEST_CASE("a^q = a exhaustively for q <= 64") {
  for (auto [p, m] : std::vector<std::pair<uint32_t, uint32_t>>{
           {2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}, {2, 4},
           {5, 2}, {3, 3}, {2, 5}, {61, 1}, {2, 6}}) {
    Field F(p, m);
    for (uint32_t a = 0; a < F.q(); ++a) CHECK(F.pow(a, F.q()) == a);
  }
}

TEST_CASE("ring parse and spec round trip") {
  Ring R1 = Ring::parse("series:p=2,m=1,k=8");
  CHECK(R1.kind() == RingKind::series);
  CHECK(R1.size() == 256);
  CHECK(R1.spec_string() == "series:p=2,m=1,k=8");

  Ring R2 = Ring::parse("padic:p=3,k=4");
  CHECK(R2.kind() == RingKind::padic);
  CHECK(R2.size() == 81);
  CHECK(R2.spec_string() == "padic:p=3,k=4");

  CHECK_THROWS_AS(Ring::parse("padic:p=6,k=2"), std::invalid_argument);
  CHECK_THROWS_AS(Ring::parse("weird:p=2,k=2"), std::invalid_argument);
  CHECK_THROWS_AS(Ring::parse("padic:p=2,k=0"), std::invalid_argument);
  CHECK_THROWS_AS(require_same_ring(R1, R2), std::invalid_argument);
}

TEST_CASE("ring arithmetic examples") {
  // (1 + t)^2 = 1 + t^2 in F_2[t]/t^3.
  Ring S = Ring::series(2, 1, 3);
  CHECK(S.mul(0b011, 0b011) == 0b101);
  // Z/8: 5 + 5 = 2, 5 * 5 = 1.
  Ring Z8 = Ring::padic(2, 3);
  CHECK(Z8.add(5, 5) == 2);
  CHECK(Z8.mul(5, 5) == 1);
  CHECK(Z8.sub(0, 3) == 5);
}

TEST_CASE("valuation examples and properties") {
  Ring S = Ring::series(2, 1, 4);
  CHECK(S.valuation(0b1100) == 2);  // t^2 + t^3
  CHECK(S.valuation(0) == 4);
  CHECK(S.valuation(1) == 0);
  CHECK(S.is_unit(0b0011));

  Ring Z27 = Ring::padic(3, 3);
  CHECK(Z27.valuation(18) == 2);  // 18 = 2 * 3^2
  CHECK(Z27.valuation(0) == 3);
  CHECK(Z27.is_unit(2));

  // v(ab) = min(v(a) + v(b), k) and the size of each ideal level.
  for (Ring R : {Ring::padic(2, 4), Ring::series(3, 1, 2), Ring::series(2, 2, 2)}) {
    std::vector<uint64_t> level_count(R.k() + 1, 0);
    for (Ring::Elem a = 0; a < R.size(); ++a) {
      ++level_count[R.valuation(a)];
      for (Ring::Elem b = 0; b < R.size(); ++b)
        CHECK(R.valuation(R.mul(a, b)) ==
              std::min<uint32_t>(R.valuation(a) + R.valuation(b), R.k()));
    }
    // |{v >= l}| = residue^{k-l}.
    uint64_t cum = 0, expect = 1;
    for (uint32_t l = R.k() + 1; l-- > 0;) {
      cum += level_count[l];
      CHECK(cum == expect);
      if (l) expect *= R.residue();
    }
  }
}

TEST_CASE("alpha enumeration") {
  Ring Z8 = Ring::padic(2, 3);
  CHECK(Z8.alpha(0) == 0);
  CHECK(Z8.alpha(5) == 5);
  CHECK_THROWS_AS(Z8.alpha(8), std::out_of_range);

  // Series: alpha(i) has the base-q digits of i as coefficients.
  Ring S = Ring::series(2, 1, 3);
  CHECK(S.coeffs(S.alpha(5)) == std::vector<uint32_t>{1, 0, 1});

  // v(alpha_i - alpha_j) = min(v_q(i - j), k) for i > j.
  for (Ring R : {Ring::padic(2, 4), Ring::series(2, 1, 4), Ring::padic(3, 2),
                 Ring::series(3, 2, 2)}) {
    for (uint64_t i = 0; i < R.size(); ++i)
      for (uint64_t j = 0; j < i; ++j) {
        uint64_t d = i - j;
        uint32_t v = 0;
        while (d % R.residue() == 0 && v < R.k()) { d /= R.residue(); ++v; }
        CHECK(R.valuation(R.sub(R.alpha(i), R.alpha(j))) == v);
      }
  }
}

TEST_CASE("canonical directions partition the reduced vectors") {
  // Z/4 has exactly the six documented representatives.
  Ring Z4 = Ring::padic(2, 2);
  auto dirs = Z4.directions();
  std::vector<std::array<Ring::Elem, 2>> expect{{1, 0}, {1, 1}, {1, 2}, {1, 3}, {0, 1}, {2, 1}};
  CHECK(dirs == expect);

  // F_3 (k = 1): q + 1 = 4 directions.
  CHECK(Ring::series(3, 1, 1).directions().size() == 4);

  // Every reduced vector is a unit multiple of exactly one representative.
  for (Ring R : {Ring::padic(2, 2), Ring::padic(2, 3), Ring::padic(3, 2),
                 Ring::series(2, 1, 2), Ring::series(2, 2, 1)}) {
    auto reps = R.directions();
    std::map<std::pair<Ring::Elem, Ring::Elem>, int> covered;
    for (const auto& d : reps)
      for (Ring::Elem u = 0; u < R.size(); ++u)
        if (R.is_unit(u)) ++covered[{R.mul(u, d[0]), R.mul(u, d[1])}];
    uint64_t reduced = 0;
    for (Ring::Elem a = 0; a < R.size(); ++a)
      for (Ring::Elem b = 0; b < R.size(); ++b)
        if (R.is_unit(a) || R.is_unit(b)) {
          ++reduced;
          auto it = covered.find({a, b});
          REQUIRE(it != covered.end());
          CHECK(it->second == 1);  // unique representative, hit by a unique unit
        }
    uint64_t units = 0;
    for (Ring::Elem u = 0; u < R.size(); ++u)
      if (R.is_unit(u)) ++units;
    CHECK(reduced == reps.size() * units);
  }
}

TEST_CASE("element serialization round trip") {
  Ring S = Ring::series(2, 1, 4);
  CHECK(S.elem_to_string(0b1011) == "1,1,0,1");
  CHECK(S.elem_from_string("1,1,0,1") == 0b1011);

  // m = 2: two digits per coefficient, lowest degree first.
  Ring S4 = Ring::series(2, 2, 2);
  for (Ring::Elem a = 0; a < S4.size(); ++a)
    CHECK(S4.elem_from_string(S4.elem_to_string(a)) == a);
  CHECK(S4.elem_to_string(S4.from_coeffs({2, 3})) == "0,1,1,1");

  Ring Z = Ring::padic(5, 3);
  for (Ring::Elem a = 0; a < Z.size(); ++a)
    CHECK(Z.elem_from_string(Z.elem_to_string(a)) == a);

  CHECK_THROWS(S.elem_from_string("1,1"));
  CHECK_THROWS(S.elem_from_string("2,0,0,0"));
  CHECK_THROWS(Z.elem_from_string("125"));
}
