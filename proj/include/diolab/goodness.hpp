#ifndef DIOLAB_GOODNESS_HPP
#define DIOLAB_GOODNESS_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "diolab/measures.hpp"
#include "diolab/rng.hpp"
#include "diolab/stats.hpp"

namespace diolab {

// Sup-norm ball in the map's domain.
struct DomainBall {
  std::vector<double> center;
  double radius = 1;

  bool contains(const std::vector<double>& p) const {
    for (size_t j = 0; j < center.size(); ++j)
      if (std::fabs(p[j] - center[j]) > radius) return false;
    return true;
  }

  static DomainBall interval(double lo, double hi) {
    return DomainBall{{(lo + hi) / 2}, (hi - lo) / 2};
  }
};

struct GoodnessReport {
  double C_hat = 0;
  double alpha_hat = 0;
  double rho_hat = 0;            // min over the coefficient census of ||f_c||_{mu,B}
  std::vector<double> worst_c;   // coefficient vector attaining alpha_hat
  int worst_ball = -1;           // sub-ball index attaining alpha_hat
  int trials = 0;
  int discarded = 0;
  int degenerate = 0;            // combinations vanishing on the sampled support
  bool pass = false;
};

struct GoodnessOptions {
  uint64_t ref_size = 200000;
  int coeff_census = 256;
  int subball_census = 16;
  std::vector<double> eps_fracs;   // eps as a fraction of ||f_c||; default 2^-1..2^-8
  size_t min_hits = 50;
  double degenerate_tol = 1e-12;
};

namespace detail {

// f_c(x) = c_0 + sum_i c_i f_i(x) evaluated on precomputed map images
inline double combo_value(const std::vector<double>& c, const std::vector<double>& fx) {
  double v = c[0];
  for (size_t i = 0; i < fx.size(); ++i) v += c[i + 1] * fx[i];
  return v;
}

}  // namespace detail

// Worst-case sublevel decay of |c_0 + sum c_i f_i| over a census of unit
// coefficient vectors and sub-balls: alpha_hat is the smallest fitted log-log
// slope of mu(|f_c| < eps)/mu(B') against eps/||f_c||, C_hat the smallest
// constant covering every recorded ratio at that exponent.
inline GoodnessReport check_good(const MapSpec& map, const MeasureSampler& ms,
                                 const DomainBall& ball, GoodnessOptions opt = {}) {
  if (opt.eps_fracs.empty())
    for (int j = 1; j <= 8; ++j) opt.eps_fracs.push_back(std::pow(2.0, -j));

  // reference sample of the domain measure, with map images precomputed
  std::vector<std::vector<double>> xs;
  std::vector<std::vector<double>> fs;
  xs.reserve(opt.ref_size);
  fs.reserve(opt.ref_size);
  for (uint64_t i = 0; i < opt.ref_size; ++i) {
    Point p = ms.sample(i, /*stream=*/0);
    std::vector<double> row(map.d);
    for (int j = 0; j < map.d; ++j) row[j] = p[j].get_d();
    Point img = map.apply(p);
    std::vector<double> frow(map.n);
    for (int j = 0; j < map.n; ++j) frow[j] = img[j].get_d();
    xs.push_back(std::move(row));
    fs.push_back(std::move(frow));
  }

  // sub-balls: the declared ball plus dyadic shrinks centered at support points
  std::vector<DomainBall> balls{ball};
  for (int k = 0; k < opt.subball_census; ++k) {
    Point cz = ms.sample((uint64_t)k, /*stream=*/1);
    std::vector<double> c(map.d);
    for (int j = 0; j < map.d; ++j) c[j] = cz[j].get_d();
    if (!ball.contains(c)) continue;
    balls.push_back(DomainBall{c, ball.radius / (2 << (k % 3))});
  }

  // membership lists per ball
  std::vector<std::vector<size_t>> members(balls.size());
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t b = 0; b < balls.size(); ++b)
      if (balls[b].contains(xs[i])) members[b].push_back(i);

  auto dirs = lds::sphere_census(map.n + 1, opt.coeff_census);

  GoodnessReport rep;
  double alpha_min = std::numeric_limits<double>::infinity();
  double rho_min = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> recorded;  // (eps_frac, ratio)

  for (const auto& c : dirs) {
    // sup-norm over the full declared ball fixes rho for this combination
    double sup_full = 0;
    for (size_t i : members[0]) sup_full = std::max(sup_full, std::fabs(detail::combo_value(c, fs[i])));
    if (sup_full < opt.degenerate_tol) {
      ++rep.degenerate;
      continue;
    }
    rho_min = std::min(rho_min, sup_full);

    for (size_t b = 0; b < balls.size(); ++b) {
      const auto& idx = members[b];
      if (idx.size() < opt.min_hits) {
        ++rep.discarded;
        continue;
      }
      double sup = 0;
      for (size_t i : idx) sup = std::max(sup, std::fabs(detail::combo_value(c, fs[i])));
      if (sup < opt.degenerate_tol) {
        ++rep.degenerate;
        continue;
      }
      std::vector<double> lx, ly;
      for (double f : opt.eps_fracs) {
        double eps = f * sup;
        size_t hits = 0;
        for (size_t i : idx)
          if (std::fabs(detail::combo_value(c, fs[i])) < eps) ++hits;
        double ratio = (double)hits / (double)idx.size();
        recorded.emplace_back(f, ratio);
        if (ratio <= 0) continue;  // empty sublevel set: trivially good at this eps
        lx.push_back(std::log2(f));
        ly.push_back(std::log2(ratio));
      }
      if (lx.size() < 3) {  // sublevel sets vanish across the grid: trivially good
        ++rep.trials;
        continue;
      }
      double slope = detail::ls_slope(lx, ly);
      if (slope < alpha_min) {
        alpha_min = slope;
        rep.worst_c = c;
        rep.worst_ball = (int)b;
      }
      ++rep.trials;
    }
  }

  rep.alpha_hat = std::isfinite(alpha_min) ? std::max(alpha_min, 0.0) : 0;
  rep.rho_hat = std::isfinite(rho_min) ? rho_min : 0;
  double cmax = 0;
  for (auto [f, ratio] : recorded)
    if (ratio > 0) cmax = std::max(cmax, ratio / std::pow(f, rep.alpha_hat));
  rep.C_hat = std::max(cmax, 1.0);
  rep.pass = rep.degenerate == 0 && rep.alpha_hat > 0 && rep.rho_hat > 0;
  return rep;
}

struct NonplanarReport {
  bool nonplanar = false;
  double sigma_min = 0;
  double sigma_ratio = 0;  // sigma_min / sigma_max
  int rows = 0;
};

// Numerical rank of the moment matrix with rows (1, f_1(x), ..., f_n(x)) over
// support samples in the ball: full rank n+1 means the image spans no proper
// affine subspace.
inline NonplanarReport check_nonplanar(const MapSpec& map, const MeasureSampler& ms,
                                       const DomainBall& ball, int sample_count,
                                       double rel_tol = 1e-8) {
  if (sample_count < map.n + 2)
    throw std::invalid_argument("check_nonplanar: sample_count must be >= n+2");

  std::vector<std::vector<double>> rows;
  uint64_t i = 0, cap = (uint64_t)sample_count * 1000 + 1000;
  while ((int)rows.size() < sample_count && i < cap) {
    Point p = ms.sample(i++, /*stream=*/2);
    std::vector<double> x(map.d);
    for (int j = 0; j < map.d; ++j) x[j] = p[j].get_d();
    if (!ball.contains(x)) continue;
    Point img = map.apply(p);
    std::vector<double> row(map.n + 1);
    row[0] = 1;
    for (int j = 0; j < map.n; ++j) row[j + 1] = img[j].get_d();
    rows.push_back(std::move(row));
  }
  if ((int)rows.size() < map.n + 1)
    throw std::runtime_error("check_nonplanar: fewer than n+1 support samples in the ball");

  Eigen::MatrixXd M(rows.size(), map.n + 1);
  for (size_t r = 0; r < rows.size(); ++r)
    for (int cidx = 0; cidx <= map.n; ++cidx) M(r, cidx) = rows[r][cidx];

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  NonplanarReport rep;
  rep.rows = (int)rows.size();
  rep.sigma_min = s(s.size() - 1);
  rep.sigma_ratio = s(0) > 0 ? rep.sigma_min / s(0) : 0;
  rep.nonplanar = rep.sigma_ratio > rel_tol;
  return rep;
}

}  // namespace diolab

#endif  // DIOLAB_GOODNESS_HPP
