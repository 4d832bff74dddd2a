#include <catch2/catch_amalgamated.hpp>

#include "diolab/correspondence.hpp"
#include "test_util.hpp"

using namespace diolab;

TEST_CASE("build_u structure") {
  TargetVector zero = TargetVector::from_decimals({"0"}, 64);
  LatticeBasis u0 = build_u(zero);
  CHECK(u0.log2_den == 0);
  CHECK(u0.cols[0][0] == 1);
  CHECK(u0.cols[1][0] == 0);

  TargetVector half = TargetVector::from_decimals({"0.5"}, 64);
  LatticeBasis uh = build_u(half);
  CHECK(uh.entry(0, 0) == 1);
  CHECK(uh.entry(0, 1) == mpq_class(1, 2));
  CHECK(uh.entry(1, 1) == 1);
  CHECK(uh.entry(1, 0) == 0);

  TargetVector y2 = TargetVector::from_decimals({"0.5", "0.25"}, 64);
  LatticeBasis u2 = build_u(y2);
  CHECK(u2.dim == 3);
  CHECK(u2.entry(0, 1) == mpq_class(1, 2));
  CHECK(u2.entry(0, 2) == mpq_class(1, 4));
  CHECK(is_unimodular(u2));
}

TEST_CASE("apply_flow diagonal action") {
  TargetVector y = TargetVector::from_decimals({"0", "0"}, 64);
  LatticeBasis id = build_u(y);
  LatticeBasis f = apply_flow(id, FlowSpec::standard(2, 1));
  CHECK(f.entry(0, 0) == 4);
  CHECK(f.entry(1, 1) == mpq_class(1, 2));
  CHECK(f.entry(2, 2) == mpq_class(1, 2));
  CHECK(is_unimodular(f));

  LatticeBasis m = apply_flow(id, FlowSpec::multiplicative(2, {1, 0}));
  CHECK(m.entry(0, 0) == 2);
  CHECK(m.entry(1, 1) == mpq_class(1, 2));
  CHECK(m.entry(2, 2) == 1);
  CHECK(is_unimodular(m));

  CHECK_THROWS_AS(apply_flow(id, FlowSpec::standard(1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(FlowSpec::multiplicative(2, {1}), std::invalid_argument);
  CHECK_THROWS_AS(FlowSpec::multiplicative(2, {-1, 2}), std::invalid_argument);
}

TEST_CASE("flow preserves unimodularity for quantized targets") {
  TargetVector y = TargetVector::from_decimals({"0.6180339887"}, 128);
  LatticeBasis u = build_u(y);
  for (long t : {0L, 1L, 5L, 17L}) {
    CHECK(is_unimodular(apply_flow(u, FlowSpec::standard(1, t))));
  }
}

TEST_CASE("zero target trajectory heights") {
  TargetVector y = TargetVector::from_decimals({"0"}, 256);
  TrajectoryOptions opt;
  opt.t_max = 5;
  TrajectoryRecord rec = trajectory(y, opt);
  REQUIRE(rec.points.size() == 5);
  for (long t = 1; t <= 5; ++t) {
    CHECK(rec.points[t - 1].t == t);
    CHECK(rec.points[t - 1].lambda1 == pow2_mpq(-t));
  }
  CHECK(rec.gamma_hat == Catch::Approx(1.0));
}

TEST_CASE("heights bounded by one and integer equivariance") {
  TargetVector a = TargetVector::from_decimals({"0.70710678"}, 256);
  TargetVector b = TargetVector::from_decimals({"1.70710678"}, 256);
  TrajectoryOptions opt;
  opt.t_max = 40;
  TrajectoryRecord ra = trajectory(a, opt);
  TrajectoryRecord rb = trajectory(b, opt);
  REQUIRE(ra.points.size() == rb.points.size());
  for (size_t i = 0; i < ra.points.size(); ++i) {
    CHECK(ra.points[i].lambda1 <= 1);
    CHECK(ra.points[i].lambda1 == rb.points[i].lambda1);
  }
}

TEST_CASE("prefix stability of trajectories") {
  TargetVector y = TargetVector::from_decimals({"0.3183098861"}, 512);
  TrajectoryOptions small, big;
  small.t_max = 30;
  big.t_max = 60;
  TrajectoryRecord rs = trajectory(y, small);
  TrajectoryRecord rb = trajectory(y, big);
  for (size_t i = 0; i < rs.points.size(); ++i)
    CHECK(rs.points[i].lambda1 == rb.points[i].lambda1);
}

TEST_CASE("precision precondition enforced") {
  TargetVector y = TargetVector::from_decimals({"0.5"}, 64);
  TrajectoryOptions opt;
  opt.t_max = 100;  // needs (n+1)*100 + 64 bits
  CHECK_THROWS_AS(trajectory(y, opt), std::invalid_argument);
}

TEST_CASE("rational targets are flagged, irrational ones detected as bounded") {
  // rational: exact zero form contracts forever
  TargetVector r = TargetVector::from_rationals({mpq_class(1, 3)}, 256);
  TrajectoryOptions opt;
  opt.t_max = 50;
  TrajectoryRecord rec = trajectory(r, opt);
  CHECK_FALSE(detect_ba(rec, mpq_class(1, 10)).badly_approximable);
  CHECK(rec.h_min < mpq_class(1, 1000));

  TargetVector z = TargetVector::from_decimals({"0"}, 256);
  CHECK_FALSE(detect_ba(trajectory(z, opt), mpq_class(1, 10)).badly_approximable);

  TargetVector s({diolab_test::quadratic_frac(2, 512)}, 1024);
  TrajectoryOptions opt2;
  opt2.t_max = 200;
  BaVerdict v = detect_ba(trajectory(s, opt2), mpq_class(1, 10));
  CHECK(v.badly_approximable);
}

TEST_CASE("badly approximable constant scan") {
  TargetVector half = TargetVector::from_decimals({"0.5"}, 64);
  CHECK(ba_constant_estimate(half, 2) == 0);
  TargetVector zero = TargetVector::from_decimals({"0"}, 64);
  CHECK(ba_constant_estimate(zero, 5) == 0);
  TargetVector golden({diolab_test::quadratic_frac(5, 256).mul_pow2(-1) +
                       Dyadic(mpz_class(1), 1)},
                      512);
  // (sqrt5-2)/2 + 1/2 = (sqrt5-1)/2
  mpq_class c = ba_constant_estimate(golden, 1000);
  // the minimum is attained already at q = 1: dist(phi, 1) = 2 - phi ~ 0.382
  CHECK(c > mpq_class(3, 8));
  CHECK(c < mpq_class(2, 5));
}

TEST_CASE("nearest integer distance") {
  // mantissa at scale 4: 23/16 = 1.4375 -> distance 7/16
  CHECK(nearest_int_dist(mpz_class(23), 4) == mpq_class(7, 16));
  CHECK(nearest_int_dist(mpz_class(16), 4) == 0);
  CHECK(nearest_int_dist(mpz_class(-3), 4) == mpq_class(3, 16));
}

TEST_CASE("multiplicative trajectory matches standard on the diagonal for n=1") {
  TargetVector y = TargetVector::from_decimals({"0.7071067811"}, 512);
  TrajectoryOptions st, mu;
  st.t_max = 20;
  mu.t_max = 20;
  mu.kind = FlowKind::Multiplicative;
  TrajectoryRecord rs = trajectory(y, st);
  TrajectoryRecord rm = trajectory(y, mu);
  // n = 1: the simplex is a single point, flows coincide
  REQUIRE(rs.points.size() == rm.points.size());
  for (size_t i = 0; i < rs.points.size(); ++i)
    CHECK(rs.points[i].lambda1 == rm.points[i].lambda1);
}
