#include <catch2/catch_amalgamated.hpp>

#include "diolab/measures.hpp"

using namespace diolab;

TEST_CASE("map evaluation is exact") {
  MapSpec v2 = MapSpec::veronese(2);
  Point img = v2.apply({mpq_class(3, 2)});
  REQUIRE(img.size() == 2);
  CHECK(img[0] == mpq_class(3, 2));
  CHECK(img[1] == mpq_class(9, 4));

  MapSpec p = MapSpec::polynomial({{mpq_class(1), mpq_class(2)}, {mpq_class(0), mpq_class(0), mpq_class(1)}});
  Point pi = p.apply({mpq_class(1, 3)});
  CHECK(pi[0] == mpq_class(5, 3));  // 1 + 2x
  CHECK(pi[1] == mpq_class(1, 9));  // x^2

  MapSpec a = MapSpec::affine_embedding({{mpq_class(1)}, {mpq_class(0)}}, {mpq_class(0), mpq_class(1, 3)});
  Point ai = a.apply({mpq_class(2, 5)});
  CHECK(ai[0] == mpq_class(2, 5));
  CHECK(ai[1] == mpq_class(1, 3));

  MapSpec id = MapSpec::identity(2);
  Point ii = id.apply({mpq_class(7), mpq_class(-2, 3)});
  CHECK(ii[0] == 7);
  CHECK(ii[1] == mpq_class(-2, 3));
}

TEST_CASE("lebesgue sampler stays in its box and is deterministic") {
  MeasureSampler ms = MeasureSampler::lebesgue_interval(1, 2, 42);
  MeasureSampler ms2 = MeasureSampler::lebesgue_interval(1, 2, 42);
  for (uint64_t i = 0; i < 50; ++i) {
    Point p = ms.sample(i);
    CHECK(p[0] >= 1);
    CHECK(p[0] < 2);
    CHECK(p[0] == ms2.sample(i)[0]);  // bit-for-bit
  }
  MeasureSampler other = MeasureSampler::lebesgue_interval(1, 2, 43);
  bool any_diff = false;
  for (uint64_t i = 0; i < 10; ++i)
    if (other.sample(i)[0] != ms.sample(i)[0]) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("lebesgue resolution bits carry through") {
  MeasureSampler ms = MeasureSampler::lebesgue_interval(0, 1, 7);
  ms.res_bits = 200;
  Point p = ms.sample(3);
  // denominator divides 2^200 and exceeds 2^53 with overwhelming probability
  mpz_class den = p[0].get_den();
  mpz_class full = 1;
  mpz_mul_2exp(full.get_mpz_t(), full.get_mpz_t(), 200);
  CHECK(full % den == 0);
  CHECK(den > mpz_class(1) << 53);
}

TEST_CASE("cantor samples satisfy the ternary digit constraint") {
  MeasureSampler ms = MeasureSampler::cantor(99, 40);
  for (uint64_t i = 0; i < 30; ++i) {
    Point p = ms.sample(i);
    CHECK(p[0] >= 0);
    CHECK(p[0] < 1);
    // x * 3^depth is an integer whose base-3 digits are all 0 or 2
    mpq_class scaled = p[0];
    for (int k = 0; k < 40; ++k) scaled *= 3;
    REQUIRE(scaled.get_den() == 1);
    mpz_class m = scaled.get_num();
    while (m > 0) {
      mpz_class digit = m % 3;
      CHECK((digit == 0 || digit == 2));
      m /= 3;
    }
  }
}

TEST_CASE("pushforward applies the map exactly") {
  MeasureSampler base = MeasureSampler::lebesgue_interval(1, 2, 5);
  MeasureSampler push = MeasureSampler::pushforward(base, MapSpec::veronese(2));
  for (uint64_t i = 0; i < 20; ++i) {
    Point b = base.sample(i);
    Point p = push.sample(i);
    CHECK(p[0] == b[0]);
    CHECK(p[1] == b[0] * b[0]);
  }
}

TEST_CASE("ifs sampler reproduces the cantor set for the standard maps") {
  std::vector<IfsMap> maps{{mpq_class(1, 3), {mpq_class(0)}, 1.0},
                           {mpq_class(1, 3), {mpq_class(2, 3)}, 1.0}};
  MeasureSampler ms = MeasureSampler::ifs(maps, 30, 321);
  for (uint64_t i = 0; i < 20; ++i) {
    Point p = ms.sample(i);
    CHECK(p[0] >= 0);
    CHECK(p[0] <= 1);
    mpq_class scaled = p[0];
    for (int k = 0; k < 30; ++k) scaled *= 3;
    CHECK(scaled.get_den() == 1);
  }
}

TEST_CASE("federer ratio of lebesgue is near three") {
  MeasureSampler ms = MeasureSampler::lebesgue_interval(0, 1, 11);
  PropertyCheckOptions opt;
  opt.ref_size = 200000;
  opt.trials = 40;
  opt.radii = {0.02, 0.04};
  PropertyReport rep = check_federer(ms, opt);
  CHECK(rep.trials > 0);
  CHECK(rep.D_hat == Catch::Approx(3.0).margin(0.3));
}

TEST_CASE("scaling exponent of lebesgue is near one") {
  MeasureSampler ms = MeasureSampler::lebesgue_interval(0, 1, 13);
  PropertyCheckOptions opt;
  opt.ref_size = 200000;
  opt.trials = 20;
  opt.radii = {0.01, 0.02, 0.04, 0.08};
  PropertyReport rep = check_scaling(ms, opt);
  CHECK(rep.beta_hat == Catch::Approx(1.0).margin(0.15));
}

TEST_CASE("absolute decay of lebesgue in the plane") {
  MeasureSampler ms = MeasureSampler::lebesgue({mpq_class(0), mpq_class(0)}, 1, 17);
  PropertyCheckOptions opt;
  opt.ref_size = 100000;
  opt.trials = 10;
  opt.radii = {0.2};
  opt.hyperplane_census = 16;
  PropertyReport rep = check_abs_decay(ms, opt);
  CHECK(rep.alpha_hat > 0.5);
}
