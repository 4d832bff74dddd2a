#include <catch2/catch_amalgamated.hpp>

#include "diolab/core.hpp"

using namespace diolab;

TEST_CASE("quantize decimal literals") {
  CHECK(quantize("0.5", 8).to_mpq() == mpq_class(1, 2));
  CHECK(quantize("0", 256).to_mpq() == 0);
  // 0.1 * 2^4 = 1.6 rounds to 2, so 2/16 = 1/8
  CHECK(quantize("0.1", 4).to_mpq() == mpq_class(1, 8));
  CHECK(quantize("-12", 16).to_mpq() == -12);
  CHECK_THROWS_AS(quantize("1.25e-3", 16), std::invalid_argument);
  CHECK_THROWS_AS(quantize("", 16), std::invalid_argument);
}

TEST_CASE("quantize ties round to even mantissa") {
  // 1/32 at 4 bits: 0.5 ulp tie -> rounds to 0 (even), not 1/16
  CHECK(quantize_mpq(mpq_class(1, 32), 4).to_mpq() == 0);
  // 3/32 at 4 bits: tie between 1/16 and 2/16 -> 2/16 (even mantissa)
  CHECK(quantize_mpq(mpq_class(3, 32), 4).to_mpq() == mpq_class(1, 8));
}

TEST_CASE("dyadic arithmetic is exact and canonical") {
  Dyadic a = quantize("0.3", 64);
  Dyadic b = quantize("0.7", 64);
  CHECK((a + b) - b == a);
  CHECK(a + b == b + a);
  CHECK((a * b).to_mpq() == a.to_mpq() * b.to_mpq());
  CHECK(Dyadic(mpz_class(4), 2).scale() == 0);  // 4/4 canonicalizes to 1
  CHECK(Dyadic(mpz_class(4), 2).mantissa() == 1);
  CHECK(a.mul_pow2(3).to_mpq() == a.to_mpq() * 8);
  CHECK(a.mul_pow2(-3).to_mpq() == a.to_mpq() / 8);
}

TEST_CASE("dyadic_sqrt agrees with the square") {
  for (long d : {2L, 3L, 5L}) {
    Dyadic r = dyadic_sqrt(mpq_class(d), 300);
    mpq_class v = r.to_mpq();
    CHECK(v * v <= d);
    mpq_class step = pow2_mpq(-300);
    mpq_class up = v + step;
    CHECK(up * up > d);
  }
}

TEST_CASE("gamma formulas") {
  for (int n = 1; n <= 4; ++n) CHECK(gamma_of_v(n, mpq_class(n)) == 0);
  CHECK(gamma_of_v(1, mpq_class(3)) == mpq_class(1, 2));
  CHECK(gamma_of_v(2, mpq_class(4)) == mpq_class(1, 5));
  CHECK(gamma_sharp_of_v(2, mpq_class(4)) == mpq_class(2, 5));
  CHECK_THROWS_AS(gamma_of_v(2, mpq_class(1)), std::domain_error);
  // gamma_sharp = n * gamma on a grid
  for (int n = 1; n <= 3; ++n)
    for (int num = 0; num <= 12; ++num) {
      mpq_class v = mpq_class(n) + mpq_class(num, 5);
      CHECK(gamma_sharp_of_v(n, v) == n * gamma_of_v(n, v));
    }
}

TEST_CASE("v_of_gamma inverts gamma_of_v on rationals") {
  int checked = 0;
  for (int n = 1; n <= 5; ++n)
    for (int num = 0; num <= 9; ++num) {
      mpq_class v = mpq_class(n) + mpq_class(num * num, 7);
      v.canonicalize();
      auto p = v_of_gamma(n, gamma_of_v(n, v), GammaConvention::Paper);
      REQUIRE_FALSE(p.infinite);
      CHECK(p.value == v);
      auto s = v_of_gamma(n, gamma_sharp_of_v(n, v), GammaConvention::Sharp);
      REQUIRE_FALSE(s.infinite);
      CHECK(s.value == v);
      ++checked;
    }
  CHECK(checked == 50);
}

TEST_CASE("v_of_gamma examples and poles") {
  CHECK(v_of_gamma(2, 0, GammaConvention::Paper).value == 2);
  CHECK(v_of_gamma(2, 0, GammaConvention::Sharp).value == 2);
  CHECK(v_of_gamma(1, mpq_class(1, 2), GammaConvention::Sharp).value == 3);
  CHECK(v_of_gamma(1, mpq_class(1, 2), GammaConvention::Paper).value == 3);
  CHECK(v_of_gamma(2, mpq_class(1, 2), GammaConvention::Paper).infinite);
  CHECK(v_of_gamma(2, mpq_class(1), GammaConvention::Sharp).infinite);
  CHECK_THROWS_AS(v_of_gamma(1, mpq_class(-1), GammaConvention::Paper), std::domain_error);
}

TEST_CASE("box volume closed form") {
  CHECK(box_volume(BoxSpec{1, mpq_class(2), 3}) == 1);
  CHECK(box_volume(BoxSpec{2, mpq_class(2), 7}) == 32);
  CHECK(box_volume(BoxSpec{1, mpq_class(3), 0}) == 8);
  // closed form 2^{2n+1-(v-n)s} on a grid, and monotone decrease in s for v > n
  for (int n = 1; n <= 2; ++n)
    for (long vi = n; vi <= n + 2; ++vi) {
      mpq_class prev = -1;
      for (long s = 0; s <= 4; ++s) {
        mpq_class vol = box_volume(BoxSpec{n, mpq_class(vi), s});
        CHECK(vol == pow2_mpq(2 * n + 1 - (vi - n) * s));
        if (prev >= 0) {
          if (vi > n)
            CHECK(vol < prev);
          else
            CHECK(vol == prev);
        }
        prev = vol;
      }
    }
}

TEST_CASE("parse_exact grammar") {
  CHECK(parse_exact("2^-3") == mpq_class(1, 8));
  CHECK(parse_exact("2^4") == 16);
  CHECK(parse_exact("3/7") == mpq_class(3, 7));
  CHECK(parse_exact("0.25") == mpq_class(1, 4));
  CHECK(parse_exact("-2") == -2);
  CHECK_THROWS_AS(parse_exact("1/0"), std::invalid_argument);
}

TEST_CASE("target vector construction") {
  TargetVector y = TargetVector::from_decimals({"0.5", "0.25"}, 64);
  CHECK(y.n == 2);
  CHECK(y.coords[0].to_mpq() == mpq_class(1, 2));
  CHECK(y.coords[1].to_mpq() == mpq_class(1, 4));
  CHECK_THROWS_AS(TargetVector({Dyadic(mpz_class(1), 100)}, 64), std::invalid_argument);
}
