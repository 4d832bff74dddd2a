#ifndef DIOLAB_CORRESPONDENCE_HPP
#define DIOLAB_CORRESPONDENCE_HPP

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "diolab/core.hpp"
#include "diolab/lattice.hpp"

namespace diolab {

enum class FlowKind { Standard, Multiplicative };

// Diagonal flow: standard g_t = diag(2^{nt}, 2^{-t},...,2^{-t}); multiplicative
// g_t = diag(2^t, 2^{-t_1},...,2^{-t_n}) with t = sum t_i.  Determinant 1.
struct FlowSpec {
  int n = 1;
  FlowKind kind = FlowKind::Standard;
  long t = 0;                // standard
  std::vector<long> t_vec;   // multiplicative

  static FlowSpec standard(int n, long t) { return FlowSpec{n, FlowKind::Standard, t, {}}; }
  static FlowSpec multiplicative(int n, std::vector<long> tv) {
    if ((int)tv.size() != n) throw std::invalid_argument("t_vec length must equal n");
    long total = 0;
    for (long ti : tv) {
      if (ti < 0) throw std::invalid_argument("t_i must be nonnegative");
      total += ti;
    }
    return FlowSpec{n, FlowKind::Multiplicative, total, std::move(tv)};
  }
};

// u_y = (1 y; 0 I_n): upper triangular, first row (1, y_1,...,y_n).
inline LatticeBasis build_u(const TargetVector& y) {
  int k = y.n + 1;
  unsigned long prec = 0;
  for (const auto& c : y.coords) prec = std::max(prec, c.scale());
  LatticeBasis b;
  b.dim = k;
  b.log2_den = (long)prec;
  b.cols.assign(k, std::vector<mpz_class>(k, 0));
  mpz_class unit = 1;
  mpz_mul_2exp(unit.get_mpz_t(), unit.get_mpz_t(), prec);
  for (int j = 0; j < k; ++j) b.cols[j][j] = unit;
  for (int j = 1; j < k; ++j) b.cols[j][0] = y.coords[j - 1].mantissa_at(prec);
  return b;
}

inline LatticeBasis apply_flow(const LatticeBasis& basis, const FlowSpec& flow) {
  if (flow.n + 1 != basis.dim) throw std::invalid_argument("apply_flow: dimension mismatch");
  LatticeBasis out = basis;
  if (flow.kind == FlowKind::Standard) {
    if (flow.t == 0) return out;
    // denominator gains t; row 0 is scaled by 2^{nt} * 2^{t}
    out.log2_den += flow.t;
    unsigned long sh = (unsigned long)((flow.n + 1) * flow.t);
    for (int j = 0; j < basis.dim; ++j)
      mpz_mul_2exp(out.cols[j][0].get_mpz_t(), out.cols[j][0].get_mpz_t(), sh);
    return out;
  }
  long tmax = 0;
  for (long ti : flow.t_vec) tmax = std::max(tmax, ti);
  out.log2_den += tmax;
  for (int j = 0; j < basis.dim; ++j) {
    mpz_mul_2exp(out.cols[j][0].get_mpz_t(), out.cols[j][0].get_mpz_t(),
                 (unsigned long)(flow.t + tmax));
    for (int i = 1; i < basis.dim; ++i) {
      unsigned long sh = (unsigned long)(tmax - flow.t_vec[i - 1]);
      if (sh) mpz_mul_2exp(out.cols[j][i].get_mpz_t(), out.cols[j][i].get_mpz_t(), sh);
    }
  }
  return out;
}

// One point of a trajectory: the first minimum of g_t u_y Z^{n+1}.
struct TrajectoryPoint {
  long t = 0;
  mpq_class lambda1;
  double log2_lambda1 = 0;
  std::vector<mpq_class> witness;
  std::vector<long> t_vec;  // populated for multiplicative scans
};

struct TrajectoryRecord {
  TargetVector y;
  FlowKind kind = FlowKind::Standard;
  std::vector<TrajectoryPoint> points;  // increasing t
  long tail_start = 0;                  // gamma fit window [tail_start, t_max]
  double gamma_hat = 0;
  double omega_hat_sharp = 0;
  double omega_hat_paper = 0;
  mpq_class h_min;
  long h_min_t = 0;
  bool precision_exhausted = false;
};

inline double log2_mpq(const mpq_class& q) {
  if (q <= 0) return -std::numeric_limits<double>::infinity();
  signed long e1, e2;
  double n = mpz_get_d_2exp(&e1, q.get_num().get_mpz_t());
  double d = mpz_get_d_2exp(&e2, q.get_den().get_mpz_t());
  return std::log2(n) - std::log2(d) + (double)(e1 - e2);
}

namespace detail {

// Compositions of `total` into n parts, each a multiple of `stride`.
inline void simplex_grid(int n, long total, long stride,
                         const std::function<void(const std::vector<long>&)>& fn) {
  std::vector<long> tv(n, 0);
  std::function<void(int, long)> rec = [&](int idx, long rem) {
    if (idx == n - 1) {
      if (rem % stride == 0) {
        tv[idx] = rem;
        fn(tv);
      }
      return;
    }
    for (long v = 0; v <= rem; v += stride) {
      tv[idx] = v;
      rec(idx + 1, rem - v);
    }
  };
  rec(0, total);
}

}  // namespace detail

struct TrajectoryOptions {
  long t_max = 100;
  FlowKind kind = FlowKind::Standard;
  long stride = 1;          // schedule stride (standard), simplex stride (multiplicative)
  bool check_precision = true;
};

// Heights lambda1(g_t u_y Z^{n+1}) for t = stride, 2*stride, ..., t_max, with a
// limsup-style rate fit over the tail window [t_max/2, t_max].  Multiplicative
// trajectories scan the simplex {sum t_i = t} and keep the deepest excursion.
inline TrajectoryRecord trajectory(const TargetVector& y, const TrajectoryOptions& opt) {
  if (opt.t_max < 1) throw std::invalid_argument("trajectory: t_max must be >= 1");
  if (opt.check_precision && opt.kind == FlowKind::Standard &&
      (long)y.precision_bits < (y.n + 1) * opt.t_max + 64)
    throw std::invalid_argument("trajectory: precision budget below (n+1)*t_max + 64");

  TrajectoryRecord rec;
  rec.y = y;
  rec.kind = opt.kind;
  LatticeBasis u = build_u(y);
  int k = u.dim;

  // Floor below which heights are quantization artifacts.
  mpq_class floor_q = pow2_mpq(-(long)y.precision_bits);

  bool have_min = false;
  if (opt.kind == FlowKind::Standard) {
    // Carry the reducing transform between steps: the flowed basis at t+dt is a
    // diagonal rescaling of the one at t, so the previous transform leaves it
    // nearly reduced and each step costs only a few swaps.
    IntMat transform;
    {
      transform.assign(k, std::vector<mpz_class>(k, 0));
      for (int i = 0; i < k; ++i) transform[i][i] = 1;
    }
    for (long t = opt.stride; t <= opt.t_max; t += opt.stride) {
      LatticeBasis flowed = apply_flow(u, FlowSpec::standard(y.n, t));
      // start from previous reduced coordinates
      LatticeBasis warm = flowed;
      for (int j = 0; j < k; ++j) {
        std::vector<mpz_class> col(k, 0);
        for (int l = 0; l < k; ++l)
          for (int r = 0; r < k; ++r) col[r] += transform[j][l] * flowed.cols[l][r];
        warm.cols[j] = std::move(col);
      }
      lll_reduce_inplace(warm, mpq_class(99, 100), &transform);
      detail::SupEnum e;
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

      TrajectoryPoint pt;
      pt.t = t;
      mpq_class den = pow2_mpq(warm.log2_den);
      pt.lambda1 = mpq_class(e.best_sup) / den;
      pt.lambda1.canonicalize();
      pt.log2_lambda1 = log2_mpq(pt.lambda1);
      for (int r = 0; r < k; ++r) {
        mpq_class c = mpq_class(e.best_vec[r]) / den;
        c.canonicalize();
        pt.witness.push_back(c);
      }
      if (opt.check_precision && pt.lambda1 <= floor_q) rec.precision_exhausted = true;
      if (!have_min || pt.lambda1 < rec.h_min) {
        rec.h_min = pt.lambda1;
        rec.h_min_t = t;
        have_min = true;
      }
      rec.points.push_back(std::move(pt));
    }
  } else {
    for (long t = opt.stride * y.n; t <= opt.t_max; t += opt.stride * y.n) {
      TrajectoryPoint best;
      bool first = true;
      detail::simplex_grid(y.n, t, opt.stride, [&](const std::vector<long>& tv) {
        LatticeBasis flowed = apply_flow(u, FlowSpec::multiplicative(y.n, tv));
        ShortVectorResult r = first_minimum(flowed, MinimumMode::Exact);
        if (first || r.sup_norm < best.lambda1) {
          best.t = t;
          best.lambda1 = r.sup_norm;
          best.witness = r.vector;
          best.t_vec = tv;
          first = false;
        }
      });
      best.log2_lambda1 = log2_mpq(best.lambda1);
      if (opt.check_precision && best.lambda1 <= floor_q) rec.precision_exhausted = true;
      if (!have_min || best.lambda1 < rec.h_min) {
        rec.h_min = best.lambda1;
        rec.h_min_t = t;
        have_min = true;
      }
      rec.points.push_back(std::move(best));
    }
  }

  long t_last = rec.points.empty() ? 0 : rec.points.back().t;
  rec.tail_start = (t_last + 1) / 2;
  double gamma = 0;
  for (const auto& pt : rec.points) {
    if (pt.t < rec.tail_start) continue;
    double g = -pt.log2_lambda1 / (double)pt.t;
    gamma = std::max(gamma, g);
  }
  rec.gamma_hat = gamma;
  if (opt.kind == FlowKind::Standard) {
    // gamma here is the per-axis rate; the total-time rate is gamma/n and the
    // two inversions then agree on the same v.
    rec.omega_hat_sharp = v_of_gamma_d(y.n, gamma, GammaConvention::Sharp);
    rec.omega_hat_paper = v_of_gamma_d(y.n, gamma / y.n, GammaConvention::Paper);
  } else {
    // total-time normalization matches the paper's gamma inversion
    rec.omega_hat_paper = v_of_gamma_d(y.n, gamma, GammaConvention::Paper);
    rec.omega_hat_sharp = rec.omega_hat_paper;
  }
  return rec;
}

struct BaVerdict {
  bool badly_approximable = false;  // finite-horizon verdict: h_min >= eps0
  mpq_class h_min;
  long h_min_t = 0;
};

// Finite-horizon surrogate for Dani's bounded-orbit criterion.
inline BaVerdict detect_ba(const TrajectoryRecord& rec, const mpq_class& epsilon0) {
  if (rec.points.empty()) throw std::invalid_argument("detect_ba: empty record");
  BaVerdict v;
  v.h_min = rec.h_min;
  v.h_min_t = rec.h_min_t;
  v.badly_approximable = (rec.h_min >= epsilon0);
  return v;
}

// Distance from the dyadic value (given as mantissa at scale `prec`) to the
// nearest integer, as an exact rational.
inline mpq_class nearest_int_dist(const mpz_class& mant, unsigned long prec) {
  mpz_class mask = 1;
  mpz_mul_2exp(mask.get_mpz_t(), mask.get_mpz_t(), prec);
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), mant.get_mpz_t(), mask.get_mpz_t());  // r in [0, 2^prec)
  mpz_class alt = mask - r;
  mpz_class d = (r <= alt) ? r : alt;
  mpq_class q(d);
  q /= mpq_class(mask);
  q.canonicalize();
  return q;
}

// c(Q) = min over 0 < |q| <= Q of |y q + p| * |q|^n with p the nearest integer.
inline mpq_class ba_constant_estimate(const TargetVector& y, long Q) {
  if (Q < 1) throw std::invalid_argument("ba_constant_estimate: Q must be >= 1");
  unsigned long prec = y.precision_bits;
  int n = y.n;
  std::vector<mpz_class> ym(n);
  for (int i = 0; i < n; ++i) ym[i] = y.coords[i].mantissa_at(prec);

  mpq_class best = -1;
  std::vector<long> q(n, -Q);
  // iterate the full box; symmetry q -> -q would halve it but exactness is cheap here
  while (true) {
    bool zero = true;
    long sup = 0;
    for (long qi : q) {
      if (qi != 0) zero = false;
      sup = std::max(sup, std::abs(qi));
    }
    if (!zero) {
      mpz_class acc = 0;
      for (int i = 0; i < n; ++i) acc += ym[i] * q[i];
      mpq_class d = nearest_int_dist(acc, prec);
      mpz_class qn = 1;
      for (int i = 0; i < n; ++i) qn *= sup;
      mpq_class val = d * qn;
      if (best < 0 || val < best) best = val;
    }
    int idx = n - 1;
    while (idx >= 0 && q[idx] == Q) q[idx--] = -Q;
    if (idx < 0) break;
    ++q[idx];
  }
  return best;
}

}  // namespace diolab

#endif  // DIOLAB_CORRESPONDENCE_HPP
