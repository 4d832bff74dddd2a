#include <catch2/catch_amalgamated.hpp>

#include "diolab/goodness.hpp"

using namespace diolab;

namespace {

GoodnessOptions fast_opts() {
  GoodnessOptions opt;
  opt.ref_size = 60000;
  opt.coeff_census = 32;
  opt.subball_census = 4;
  return opt;
}

}  // namespace

TEST_CASE("linear map on a symmetric interval") {
  MapSpec f = MapSpec::polynomial({{mpq_class(0), mpq_class(1)}});
  MeasureSampler ms = MeasureSampler::lebesgue_interval(-1, 1, 21);
  DomainBall ball = DomainBall::interval(-1, 1);
  GoodnessReport rep = check_good(f, ms, ball, fast_opts());
  // sublevel sets of |c0 + c1 x| shrink linearly
  CHECK(rep.alpha_hat > 0.8);
  CHECK(rep.alpha_hat < 1.15);
  CHECK(rep.rho_hat > 0);
  CHECK(rep.C_hat >= 1.0);
  CHECK(rep.degenerate == 0);
}

TEST_CASE("squaring map decays with exponent near one half") {
  MapSpec f = MapSpec::polynomial({{mpq_class(0), mpq_class(0), mpq_class(1)}});
  MeasureSampler ms = MeasureSampler::lebesgue_interval(-1, 1, 22);
  DomainBall ball = DomainBall::interval(-1, 1);
  GoodnessReport rep = check_good(f, ms, ball, fast_opts());
  CHECK(rep.alpha_hat > 0.35);
  CHECK(rep.alpha_hat <= 1.05);
}

TEST_CASE("veronese curve on a shifted interval is nonplanar") {
  MapSpec f = MapSpec::veronese(2);
  MeasureSampler ms = MeasureSampler::lebesgue_interval(1, 2, 23);
  DomainBall ball = DomainBall::interval(1, 2);
  NonplanarReport rep = check_nonplanar(f, ms, ball, 64);
  CHECK(rep.nonplanar);
  CHECK(rep.sigma_ratio > 1e-4);
}

TEST_CASE("affine line image is planar") {
  // f(x) = (x, 2x + 1): exact relation 2 f1 - f2 + 1 = 0
  MapSpec f = MapSpec::polynomial({{mpq_class(0), mpq_class(1)}, {mpq_class(1), mpq_class(2)}});
  MeasureSampler ms = MeasureSampler::lebesgue_interval(1, 2, 24);
  DomainBall ball = DomainBall::interval(1, 2);
  NonplanarReport rep = check_nonplanar(f, ms, ball, 64);
  CHECK_FALSE(rep.nonplanar);
}

TEST_CASE("identity on the cantor measure is nonplanar") {
  MapSpec f = MapSpec::identity(1);
  MeasureSampler ms = MeasureSampler::cantor(25, 48);
  DomainBall ball = DomainBall::interval(0, 1);
  NonplanarReport rep = check_nonplanar(f, ms, ball, 64);
  CHECK(rep.nonplanar);
}

TEST_CASE("nonplanar preconditions") {
  MapSpec f = MapSpec::veronese(2);
  MeasureSampler ms = MeasureSampler::lebesgue_interval(1, 2, 26);
  DomainBall ball = DomainBall::interval(1, 2);
  CHECK_THROWS_AS(check_nonplanar(f, ms, ball, 3), std::invalid_argument);
  // empty support: ball disjoint from the sampling interval
  DomainBall far = DomainBall::interval(10, 11);
  CHECK_THROWS_AS(check_nonplanar(f, ms, far, 16), std::runtime_error);
}

TEST_CASE("nonplanarity verdict survives affine domain reparametrization") {
  // same curve traversed by x -> 2x - 1 has the same image rank
  MapSpec f = MapSpec::veronese(2);
  MapSpec g = MapSpec::polynomial({{mpq_class(-1), mpq_class(2)},
                                   {mpq_class(1), mpq_class(-4), mpq_class(4)}});
  MeasureSampler msf = MeasureSampler::lebesgue_interval(1, 2, 27);
  MeasureSampler msg = MeasureSampler::lebesgue_interval(1, 2, 27);
  DomainBall ball = DomainBall::interval(1, 2);
  CHECK(check_nonplanar(f, msf, ball, 64).nonplanar ==
        check_nonplanar(g, msg, ball, 64).nonplanar);
}
