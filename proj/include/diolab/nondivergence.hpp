#ifndef DIOLAB_NONDIVERGENCE_HPP
#define DIOLAB_NONDIVERGENCE_HPP

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "diolab/correspondence.hpp"
#include "diolab/goodness.hpp"
#include "diolab/measures.hpp"
#include "diolab/oracle.hpp"
#include "diolab/parallel.hpp"
#include "diolab/stats.hpp"

namespace diolab {

namespace detail {

// Exact first minima of g_t u_y Z^{n+1} along an increasing t schedule,
// warm-starting the reduction from the previous step.
inline std::vector<mpq_class> lambda1_schedule(const TargetVector& y,
                                               const std::vector<long>& ts) {
  LatticeBasis u = build_u(y);
  int k = u.dim;
  IntMat transform(k, std::vector<mpz_class>(k, 0));
  for (int i = 0; i < k; ++i) transform[i][i] = 1;

  std::vector<mpq_class> out;
  out.reserve(ts.size());
  for (long t : ts) {
    LatticeBasis flowed = apply_flow(u, FlowSpec::standard(y.n, t));
    LatticeBasis warm = flowed;
    for (int j = 0; j < k; ++j) {
      std::vector<mpz_class> col(k, 0);
      for (int l = 0; l < k; ++l)
        for (int r = 0; r < k; ++r) col[r] += transform[j][l] * flowed.cols[l][r];
      warm.cols[j] = std::move(col);
    }
    lll_reduce_inplace(warm, mpq_class(99, 100), &transform);
    SupEnum e;
    mpz_class init_sup = sup_norm_int(warm.cols[0]);
    std::vector<mpz_class> init_vec = warm.cols[0];
    for (int j = 1; j < k; ++j) {
      mpz_class s = sup_norm_int(warm.cols[j]);
      if (s < init_sup) {
        init_sup = s;
        init_vec = warm.cols[j];
      }
    }
    e.run(warm.cols, init_sup, init_vec);
    mpq_class l1 = mpq_class(e.best_sup) / pow2_mpq(warm.log2_den);
    l1.canonicalize();
    out.push_back(std::move(l1));
  }
  return out;
}

inline unsigned long schedule_precision(int n, long t_max) {
  return (unsigned long)((n + 1) * t_max + 64);
}

}  // namespace detail

struct NondivergenceScan {
  std::vector<long> t_list;
  std::vector<mpq_class> eps_grid;
  std::vector<std::vector<double>> ratios;  // [t index][eps index]
  std::vector<double> slopes;               // per-t log-log slope of ratio in eps
  double alpha_bound = 0;                   // min slope across the schedule
  double K_hat = 0;                         // smallest K with ratio <= K (eps/rho)^alpha
  bool theorem_bound_holds = false;
  bool hypothesis_unverified = false;       // dilated ball left the sampled support box
  uint64_t samples = 0;
};

struct ScanOptions {
  std::vector<long> t_list;       // default 5,10,...,100
  std::vector<mpq_class> eps_grid;  // default 2^-1..2^-12
  uint64_t samples = 20000;
  int threads = 1;
  // certified inputs from the goodness module; alpha <= 0 skips the K fit
  double C_hat = 0;
  double alpha_hat = 0;
  double rho_hat = 0;
};

// Fraction of mu-sampled x in B whose flowed lattice g_t u_{f(x)} Z^{n+1} has
// first minimum below eps, for each (t, eps) on the grid.
inline NondivergenceScan scan(const MapSpec& map, const MeasureSampler& ms,
                              const DomainBall& ball, ScanOptions opt = {}) {
  NondivergenceScan sc;
  sc.t_list = opt.t_list;
  if (sc.t_list.empty())
    for (long t = 5; t <= 100; t += 5) sc.t_list.push_back(t);
  sc.eps_grid = opt.eps_grid;
  if (sc.eps_grid.empty())
    for (long j = 1; j <= 12; ++j) sc.eps_grid.push_back(pow2_mpq(-j));
  if (!std::is_sorted(sc.t_list.begin(), sc.t_list.end()))
    throw std::invalid_argument("scan: t_list must be increasing");

  long t_max = sc.t_list.back();
  unsigned long prec = detail::schedule_precision(map.n, t_max);

  // collect samples inside the ball; cap the rejection loop
  std::vector<Point> xs;
  uint64_t i = 0, cap = opt.samples * 1000 + 1000;
  while (xs.size() < opt.samples && i < cap) {
    Point p = ms.sample(i++, /*stream=*/0);
    std::vector<double> pd(map.d);
    for (int j = 0; j < map.d; ++j) pd[j] = p[j].get_d();
    if (ball.contains(pd)) xs.push_back(std::move(p));
  }
  if (xs.empty()) throw std::runtime_error("scan: empty support in ball");
  sc.samples = xs.size();

  // Federer-style hypothesis needs the 3^{n+1}-dilated ball; compare against
  // the support box seen in a reference sample.
  {
    detail::RefSample ref;
    ref.build(ms, std::min<uint64_t>(opt.samples, 20000), /*stream=*/3);
    std::vector<double> lo, hi;
    ref.bounding_box(lo, hi);
    double dil = std::pow(3.0, map.n + 1) * ball.radius;
    for (int j = 0; j < map.d; ++j)
      if (ball.center[j] - dil < lo[j] || ball.center[j] + dil > hi[j])
        sc.hypothesis_unverified = true;
  }

  // per-sample exact minima along the schedule
  std::vector<std::vector<mpq_class>> l1(xs.size());
  parallel_for(xs.size(), opt.threads, [&](uint64_t s) {
    TargetVector y = TargetVector::from_rationals(map.apply(xs[s]), prec);
    l1[s] = detail::lambda1_schedule(y, sc.t_list);
  });

  sc.ratios.assign(sc.t_list.size(), std::vector<double>(sc.eps_grid.size(), 0));
  for (size_t ti = 0; ti < sc.t_list.size(); ++ti)
    for (size_t ei = 0; ei < sc.eps_grid.size(); ++ei) {
      uint64_t hits = 0;
      for (size_t s = 0; s < xs.size(); ++s)
        if (l1[s][ti] < sc.eps_grid[ei]) ++hits;
      sc.ratios[ti][ei] = (double)hits / (double)xs.size();
    }

  double amin = std::numeric_limits<double>::infinity();
  for (size_t ti = 0; ti < sc.t_list.size(); ++ti) {
    std::vector<double> lx, ly;
    for (size_t ei = 0; ei < sc.eps_grid.size(); ++ei) {
      double r = sc.ratios[ti][ei];
      if (r <= 0) r = 0.5 / (double)xs.size();
      lx.push_back(log2_mpq(sc.eps_grid[ei]));
      ly.push_back(std::log2(r));
    }
    double sl = detail::ls_slope(lx, ly);
    sc.slopes.push_back(sl);
    amin = std::min(amin, sl);
  }
  sc.alpha_bound = std::isfinite(amin) ? amin : 0;

  if (opt.alpha_hat > 0 && opt.rho_hat > 0) {
    double k = 0;
    for (size_t ti = 0; ti < sc.t_list.size(); ++ti)
      for (size_t ei = 0; ei < sc.eps_grid.size(); ++ei) {
        double eps = std::pow(2.0, log2_mpq(sc.eps_grid[ei]));
        if (eps > opt.rho_hat) continue;  // theorem rows only
        double rhs = std::pow(eps / opt.rho_hat, opt.alpha_hat);
        k = std::max(k, sc.ratios[ti][ei] / rhs);
      }
    sc.K_hat = k;
    sc.theorem_bound_holds = std::isfinite(k);
  }
  return sc;
}

struct BcSeries {
  mpq_class v;
  mpq_class gamma;
  bool hypothesis_ok = false;       // gamma > gamma(v)
  std::vector<double> terms;        // index t-1 holds the t-th term
  std::vector<double> partial_sums;
  bool converged = false;           // last-quarter increment < 1e-3 * S(T)
  uint64_t samples = 0;
};

struct BcOptions {
  long t_max = 100;
  uint64_t samples = 2000;
  int threads = 1;
};

// Partial sums S(T) = sum_{t<=T} mu({x in B : lambda1(g_t u_{f(x)}) < 2^{-gamma t}}).
inline BcSeries borel_cantelli_series(const MapSpec& map, const MeasureSampler& ms,
                                      const DomainBall& ball, const mpq_class& v,
                                      const mpq_class& gamma, BcOptions opt = {}) {
  BcSeries bc;
  bc.v = v;
  bc.gamma = gamma;
  bc.hypothesis_ok = (v >= map.n) && (gamma > gamma_of_v(map.n, v));

  std::vector<long> ts;
  for (long t = 1; t <= opt.t_max; ++t) ts.push_back(t);
  unsigned long prec = detail::schedule_precision(map.n, opt.t_max);

  std::vector<Point> xs;
  uint64_t i = 0, cap = opt.samples * 1000 + 1000;
  while (xs.size() < opt.samples && i < cap) {
    Point p = ms.sample(i++, /*stream=*/0);
    std::vector<double> pd(map.d);
    for (int j = 0; j < map.d; ++j) pd[j] = p[j].get_d();
    if (ball.contains(pd)) xs.push_back(std::move(p));
  }
  if (xs.empty()) throw std::runtime_error("borel_cantelli_series: empty support in ball");
  bc.samples = xs.size();

  std::vector<std::vector<mpq_class>> l1(xs.size());
  parallel_for(xs.size(), opt.threads, [&](uint64_t s) {
    TargetVector y = TargetVector::from_rationals(map.apply(xs[s]), prec);
    l1[s] = detail::lambda1_schedule(y, ts);
  });

  double acc = 0;
  for (size_t ti = 0; ti < ts.size(); ++ti) {
    uint64_t hits = 0;
    mpq_class exponent = gamma * ts[ti];
    for (size_t s = 0; s < xs.size(); ++s)
      if (less_than_pow2(l1[s][ti], exponent)) ++hits;
    double term = (double)hits / (double)xs.size();
    bc.terms.push_back(term);
    acc += term;
    bc.partial_sums.push_back(acc);
  }

  long q0 = (3 * opt.t_max) / 4;
  double tail = acc - bc.partial_sums[std::max<long>(q0 - 1, 0)];
  bc.converged = acc > 0 ? (tail < 1e-3 * acc) : true;
  return bc;
}

struct ExtremalityResult {
  std::vector<double> omegas;       // per-sample standard-flow exponent estimate
  std::vector<double> omegas_mult;  // multiplicative, when requested
  double median_omega = 0;
  double median_omega_mult = 0;
  double frac_exceeding = 0;        // fraction with omega > n + margin
  double margin = 0;
  long t_max = 0;
  uint64_t samples = 0;
};

struct ExtremalityOptions {
  long t_max = 100;
  uint64_t samples = 50;
  double margin = 0.5;
  bool multiplicative = false;
  long mult_t_max = 0;   // defaults to n * t_max / 4 (simplex scans are costly)
  long mult_stride = 0;  // defaults to mult_t_max / 8
  int threads = 1;
};

// Empirical exponent distribution of the pushforward: extremal measures should
// concentrate omega near n.
inline ExtremalityResult extremality_experiment(const MapSpec& map, const MeasureSampler& ms,
                                                const DomainBall& ball,
                                                ExtremalityOptions opt = {}) {
  unsigned long prec = detail::schedule_precision(map.n, opt.t_max);
  std::vector<Point> xs;
  uint64_t i = 0, cap = opt.samples * 1000 + 1000;
  while (xs.size() < opt.samples && i < cap) {
    Point p = ms.sample(i++, /*stream=*/0);
    std::vector<double> pd(map.d);
    for (int j = 0; j < map.d; ++j) pd[j] = p[j].get_d();
    if (ball.contains(pd)) xs.push_back(std::move(p));
  }
  if (xs.empty()) throw std::runtime_error("extremality_experiment: empty support in ball");

  ExtremalityResult res;
  res.t_max = opt.t_max;
  res.margin = opt.margin;
  res.samples = xs.size();
  res.omegas.resize(xs.size());
  if (opt.multiplicative) res.omegas_mult.resize(xs.size());

  long mt = opt.mult_t_max > 0 ? opt.mult_t_max : map.n * opt.t_max / 4;
  long mstride = opt.mult_stride > 0 ? opt.mult_stride : std::max<long>(1, mt / 8);

  parallel_for(xs.size(), opt.threads, [&](uint64_t s) {
    TargetVector y = TargetVector::from_rationals(map.apply(xs[s]), prec);
    TrajectoryOptions topt;
    topt.t_max = opt.t_max;
    res.omegas[s] = trajectory(y, topt).omega_hat_sharp;
    if (opt.multiplicative) {
      TrajectoryOptions mopt;
      mopt.kind = FlowKind::Multiplicative;
      mopt.t_max = mt;
      mopt.stride = mstride;
      res.omegas_mult[s] = trajectory(y, mopt).omega_hat_paper;
    }
  });

  res.median_omega = detail::median(res.omegas);
  if (opt.multiplicative) res.median_omega_mult = detail::median(res.omegas_mult);
  uint64_t exceed = 0;
  for (double w : res.omegas)
    if (w > map.n + opt.margin) ++exceed;
  res.frac_exceeding = (double)exceed / (double)res.omegas.size();
  return res;
}

}  // namespace diolab

#endif  // DIOLAB_NONDIVERGENCE_HPP
