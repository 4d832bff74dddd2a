#ifndef DIOLAB_ORACLE_HPP
#define DIOLAB_ORACLE_HPP

#include <gmpxx.h>

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "diolab/core.hpp"
#include "diolab/correspondence.hpp"
#include "diolab/stats.hpp"

namespace diolab {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Enumerates integer q != 0 with |q| <= Q (sup-norm), one representative per
// {q, -q} pair, and reports the numerator of dist(y q, Z) at scale prec.
// The first coordinate runs incrementally so the inner loop is a single add.
class ShellScanner {
 public:
  ShellScanner(const TargetVector& y, long Q) : Q_(Q), n_(y.n), prec_(y.precision_bits) {
    ym_.resize(n_);
    for (int i = 0; i < n_; ++i) ym_[i] = y.coords[i].mantissa_at(prec_);
    mask_ = 1;
    mpz_mul_2exp(mask_.get_mpz_t(), mask_.get_mpz_t(), prec_);
    half_ = mask_ >> 1;
  }

  static double cost(int n, long Q) { return std::pow(2.0 * Q + 1.0, n); }

  // visit(q, dnum): dnum/2^prec is the distance from y q to the nearest integer
  void scan(const std::function<void(const std::vector<long>&, const mpz_class&)>& visit) {
    std::vector<long> q(n_, 0);
    rec(q, n_ - 1, true, visit);
  }

  unsigned long prec() const { return prec_; }

 private:
  void rec(std::vector<long>& q, int idx, bool all_zero_above,
           const std::function<void(const std::vector<long>&, const mpz_class&)>& visit) {
    if (idx == 0) {
      inner(q, all_zero_above, visit);
      return;
    }
    long lo = all_zero_above ? 0 : -Q_;
    for (long v = lo; v <= Q_; ++v) {
      q[idx] = v;
      rec(q, idx - 1, all_zero_above && v == 0, visit);
    }
    q[idx] = 0;
  }

  void inner(std::vector<long>& q, bool all_zero_above,
             const std::function<void(const std::vector<long>&, const mpz_class&)>& visit) {
    long lo = all_zero_above ? 1 : -Q_;
    acc_ = ym_[0] * lo;
    for (int i = 1; i < n_; ++i) acc_ += ym_[i] * q[i];
    for (long v = lo; v <= Q_; ++v) {
      q[0] = v;
      mpz_fdiv_r(r_.get_mpz_t(), acc_.get_mpz_t(), mask_.get_mpz_t());
      if (r_ > half_) mpz_sub(r_.get_mpz_t(), mask_.get_mpz_t(), r_.get_mpz_t());
      visit(q, r_);
      acc_ += ym_[0];
    }
    q[0] = 0;
  }
  mpz_class acc_, r_;

  long Q_;
  int n_;
  unsigned long prec_;
  std::vector<mpz_class> ym_;
  mpz_class mask_, half_;
};

inline void check_scan_budget(int n, long s_max, double max_points) {
  long Q = 1L << s_max;
  double cost = ShellScanner::cost(n, Q);
  if (cost > max_points)
    throw BudgetExceeded("oracle scan refused: ~" + std::to_string(cost) +
                         " points exceed budget " + std::to_string(max_points));
}

inline double default_scan_budget() { return 3e8; }

}  // namespace detail

struct BestApproxRow {
  long s = 0;
  mpq_class m;                // cumulative min of |y q + p| over 0 < |q| <= 2^s
  std::vector<long> arg_q;
  mpz_class arg_p;
  double v_scale = 0;         // largest v with m(s) < 2^{-vs}; inf when m = 0
  bool exact_zero = false;
};

struct BestApproximationTable {
  TargetVector y;
  long s_max = 0;
  std::vector<BestApproxRow> rows;  // s = 0..s_max
  double omega_limsup = 0;          // tail-window max of v_scale
  double omega_slope = 0;           // tail-window LS slope of -log2 m(s) vs s
  bool omega_infinite = false;      // an exact zero was found
  long tail_start = 0;
};

// Exhaustive best approximations m(s) = min_{0<|q|<=2^s} dist(y q, Z).
inline BestApproximationTable best_approximations(const TargetVector& y, long s_max,
                                                  double max_points = detail::default_scan_budget()) {
  if (s_max < 0) throw std::invalid_argument("best_approximations: s_max must be >= 0");
  detail::check_scan_budget(y.n, s_max, max_points);
  long Q = 1L << s_max;
  detail::ShellScanner scanner(y, Q);
  unsigned long prec = scanner.prec();

  // per-shell minima; shell s holds |q| in (2^{s-1}, 2^s]
  std::vector<mpz_class> shell_min(s_max + 1);
  std::vector<std::vector<long>> shell_q(s_max + 1);
  std::vector<bool> shell_has(s_max + 1, false);

  scanner.scan([&](const std::vector<long>& q, const mpz_class& d) {
    long sup = 0;
    for (long qi : q) sup = std::max(sup, std::labs(qi));
    long s = 0;
    while ((1L << s) < sup) ++s;
    if (!shell_has[s] || d < shell_min[s]) {
      shell_min[s] = d;
      shell_q[s] = q;
      shell_has[s] = true;
    }
  });

  BestApproximationTable tab;
  tab.y = y;
  tab.s_max = s_max;
  mpq_class den = pow2_mpq((long)prec);

  mpz_class cur;
  std::vector<long> cur_q;
  bool have = false;
  std::vector<mpz_class> ym(y.n);
  for (int i = 0; i < y.n; ++i) ym[i] = y.coords[i].mantissa_at(prec);

  for (long s = 0; s <= s_max; ++s) {
    if (shell_has[s] && (!have || shell_min[s] < cur)) {
      cur = shell_min[s];
      cur_q = shell_q[s];
      have = true;
    }
    BestApproxRow row;
    row.s = s;
    row.m = mpq_class(cur) / den;
    row.m.canonicalize();
    row.arg_q = cur_q;
    // p = -round(y q)
    mpz_class acc = 0;
    for (int i = 0; i < y.n; ++i) acc += ym[i] * cur_q[i];
    mpz_class mask = 1;
    mpz_mul_2exp(mask.get_mpz_t(), mask.get_mpz_t(), prec);
    mpz_class r, qq;
    mpz_fdiv_qr(qq.get_mpz_t(), r.get_mpz_t(), acc.get_mpz_t(), mask.get_mpz_t());
    if (2 * r > mask) qq += 1;
    row.arg_p = -qq;
    row.exact_zero = (cur == 0);
    if (row.exact_zero) {
      row.v_scale = std::numeric_limits<double>::infinity();
      tab.omega_infinite = true;
    } else if (s >= 1) {
      row.v_scale = -log2_mpq(row.m) / (double)s;
    }
    tab.rows.push_back(std::move(row));
  }

  tab.tail_start = std::max<long>(1, (s_max + 1) / 2);
  std::vector<double> xs, ys;
  double omega = 0;
  for (const auto& row : tab.rows) {
    if (row.s < tab.tail_start) continue;
    omega = std::max(omega, row.v_scale);
    if (!row.exact_zero) {
      xs.push_back((double)row.s);
      ys.push_back(-log2_mpq(row.m));
    }
  }
  tab.omega_limsup = tab.omega_infinite ? std::numeric_limits<double>::infinity() : omega;
  tab.omega_slope = tab.omega_infinite ? std::numeric_limits<double>::infinity()
                                       : detail::ls_slope(xs, ys);
  return tab;
}

// Pareto-minimal approximation pairs: sup-norm of q against dist(y q, Z),
// increasing in sup, strictly decreasing in dist.
struct ApproxFront {
  int n = 1;
  long s_max = 0;
  std::vector<std::pair<long, mpq_class>> points;  // (sup |q|, dist)
};

inline ApproxFront approximation_front(const TargetVector& y, long s_max,
                                       double max_points = detail::default_scan_budget()) {
  if (s_max < 0) throw std::invalid_argument("approximation_front: s_max must be >= 0");
  detail::check_scan_budget(y.n, s_max, max_points);
  detail::ShellScanner scanner(y, 1L << s_max);
  unsigned long prec = scanner.prec();

  std::map<long, mpz_class> best;  // sup -> min dist numerator, Pareto-pruned
  scanner.scan([&](const std::vector<long>& q, const mpz_class& d) {
    long sup = 0;
    for (long qi : q) sup = std::max(sup, std::labs(qi));
    auto it = best.upper_bound(sup);
    if (it != best.begin() && std::prev(it)->second <= d) return;  // dominated
    best[sup] = d;
    for (it = best.upper_bound(sup); it != best.end() && it->second >= d;)
      it = best.erase(it);
  });

  ApproxFront f;
  f.n = y.n;
  f.s_max = s_max;
  mpq_class den = pow2_mpq((long)prec);
  for (const auto& [sup, num] : best) {
    mpq_class d = mpq_class(num) / den;
    d.canonicalize();
    f.points.emplace_back(sup, d);
  }
  return f;
}

// lambda1(g_t u_y Z^{n+1}) reconstructed from the front; exact for 1 <= t <=
// s_max because the optimal vector has 2^{-t}|q| <= lambda1 <= 1 (Minkowski),
// hence |q| <= 2^t within the scanned range.
inline mpq_class front_lambda1(const ApproxFront& f, long t) {
  if (t < 1 || t > f.s_max) throw std::invalid_argument("front_lambda1: need 1 <= t <= s_max");
  mpq_class expand = pow2_mpq(f.n * t);
  mpq_class shrink = pow2_mpq(-t);
  mpq_class best = expand;  // q = 0, p = 1
  for (const auto& [sup, d] : f.points) {
    mpq_class a = expand * d;
    mpq_class b = shrink * sup;
    mpq_class v = a > b ? a : b;
    if (v < best) best = v;
  }
  return best;
}

// Exponent estimate from the front, with the same tail-max convention as the
// trajectory fit, so dynamics and brute force are compared like for like.
inline double front_omega_sharp(const ApproxFront& f, long t_max) {
  if (t_max > f.s_max) throw std::invalid_argument("front_omega_sharp: t_max exceeds s_max");
  long tail = (t_max + 1) / 2;
  double gamma = 0;
  for (long t = tail; t <= t_max; ++t)
    gamma = std::max(gamma, -log2_mpq(front_lambda1(f, t)) / (double)t);
  return v_of_gamma_d(f.n, gamma, GammaConvention::Sharp);
}

struct System21Result {
  bool satisfied = false;
  std::vector<long> q;
  mpz_class p;
  bool box_agrees = false;  // inequality scan vs box membership of the witness
};

// exact test d < 2^{-v s} for rational v: d^b < 2^{-a} with v s = a / b
inline bool less_than_pow2(const mpq_class& d, const mpq_class& exponent_neg) {
  // tests d < 2^{-e} for e = exponent_neg (rational, >= 0 in our usage)
  mpq_class e = exponent_neg;
  e.canonicalize();
  mpz_class a = e.get_num(), b = e.get_den();
  // d^b < 2^{-a}  <=>  num^b * 2^{a} < den^b   (a >= 0)
  mpz_class nb, db;
  unsigned long bb = b.get_ui();
  mpz_pow_ui(nb.get_mpz_t(), d.get_num().get_mpz_t(), bb);
  mpz_pow_ui(db.get_mpz_t(), d.get_den().get_mpz_t(), bb);
  if (a >= 0) {
    mpz_mul_2exp(nb.get_mpz_t(), nb.get_mpz_t(), a.get_ui());
  } else {
    mpz_class na = -a;
    mpz_mul_2exp(db.get_mpz_t(), db.get_mpz_t(), na.get_ui());
  }
  return nb < db;
}

// Membership of a point in B_{v,s}: |x_0| < 2^{-vs}, |x_i| < 2^{s+1}.
inline bool box_contains(const BoxSpec& box, const std::vector<mpq_class>& x) {
  if ((int)x.size() != box.n + 1) throw std::invalid_argument("box_contains: dimension mismatch");
  mpq_class vs = box.v * box.s;
  if (!less_than_pow2(abs(x[0]), vs)) return false;
  mpq_class side = pow2_mpq(box.s + 1);
  for (int i = 1; i <= box.n; ++i)
    if (abs(x[i]) >= side) return false;
  return true;
}

// Does |y q + p| < 2^{-vs}, |q| < 2^{s+1} have a solution with q != 0?
// Also re-checks the witness as a lattice point of u_y Z^{n+1} inside B_{v,s}.
inline System21Result check_system_21(const TargetVector& y, const mpq_class& v, long s,
                                      double max_points = detail::default_scan_budget()) {
  if (s < 0) throw std::invalid_argument("check_system_21: s must be >= 0");
  long Q = (1L << (s + 1)) - 1;
  double cost = detail::ShellScanner::cost(y.n, Q);
  if (cost > max_points)
    throw BudgetExceeded("check_system_21 refused: ~" + std::to_string(cost) + " points");
  detail::ShellScanner scanner(y, Q);
  unsigned long prec = scanner.prec();
  mpq_class den = pow2_mpq((long)prec);
  mpq_class vs = v * s;

  System21Result res;
  mpq_class best_d;
  bool have = false;
  std::vector<long> best_q;
  scanner.scan([&](const std::vector<long>& q, const mpz_class& d) {
    mpq_class dq = mpq_class(d) / den;
    dq.canonicalize();
    if (!have || dq < best_d) {
      best_d = dq;
      best_q = q;
      have = true;
    }
  });
  if (!have) return res;
  res.satisfied = less_than_pow2(best_d, vs);
  if (res.satisfied) {
    res.q = best_q;
    // p = -round(y q)
    std::vector<mpz_class> ym(y.n);
    for (int i = 0; i < y.n; ++i) ym[i] = y.coords[i].mantissa_at(prec);
    mpz_class acc = 0;
    for (int i = 0; i < y.n; ++i) acc += ym[i] * best_q[i];
    mpz_class mask = 1;
    mpz_mul_2exp(mask.get_mpz_t(), mask.get_mpz_t(), prec);
    mpz_class r, qq;
    mpz_fdiv_qr(qq.get_mpz_t(), r.get_mpz_t(), acc.get_mpz_t(), mask.get_mpz_t());
    if (2 * r > mask) qq += 1;
    res.p = -qq;
    // independent formulation: u_y (p, q) must lie in B_{v,s}
    std::vector<mpq_class> w(y.n + 1);
    w[0] = mpq_class(res.p);
    for (int i = 0; i < y.n; ++i) w[0] += y.coords[i].to_mpq() * best_q[i];
    for (int i = 0; i < y.n; ++i) w[i + 1] = best_q[i];
    res.box_agrees = box_contains(BoxSpec{y.n, v, s}, w);
  } else {
    res.box_agrees = true;  // vacuous: no witness claimed
  }
  return res;
}

struct ContinuedFraction {
  mpq_class y;
  std::vector<mpz_class> partial_quotients;  // a_1, a_2, ...
  std::vector<mpz_class> denominators;       // q_1, q_2, ... (q_k for convergent k)
  bool terminated = false;                   // expansion ended exactly (rational input)
  bool rational_signal = false;              // terminated, or a convergent denominator
                                             // exploded past the truncation guard
};

// Classical continued fraction of a rational in (0,1); stops at K quotients or
// when convergent denominators pass 2^{prec/2} (truncation-safety guard).
inline ContinuedFraction cf_expand(const TargetVector& y, int K) {
  if (y.n != 1) throw std::invalid_argument("cf_expand: n = 1 only");
  mpq_class x = y.coords[0].to_mpq();
  if (x <= 0 || x >= 1) throw std::invalid_argument("cf_expand: y must lie in (0,1)");
  mpz_class qbound = 1;
  mpz_mul_2exp(qbound.get_mpz_t(), qbound.get_mpz_t(), y.precision_bits / 2);

  ContinuedFraction cf;
  cf.y = x;
  mpz_class qk_1 = 0, qk = 1;  // q_{-1}, q_0
  mpz_class num = x.get_num(), den = x.get_den();
  // x = num/den in (0,1); iterate den/num = a + rem/num
  for (int k = 0; k < K; ++k) {
    if (num == 0) {
      cf.terminated = true;
      break;
    }
    mpz_class a, rem;
    mpz_fdiv_qr(a.get_mpz_t(), rem.get_mpz_t(), den.get_mpz_t(), num.get_mpz_t());
    mpz_class qnew = a * qk + qk_1;
    if (qnew > qbound && k > 0) {
      // a denominator beyond 2^{prec/2} cannot be distinguished from an exact
      // relation at this precision: treat it as a rational signal
      cf.rational_signal = true;
      break;
    }
    cf.partial_quotients.push_back(a);
    cf.denominators.push_back(qnew);
    qk_1 = qk;
    qk = qnew;
    den = num;
    num = rem;
  }
  if (num == 0) cf.terminated = true;
  if (cf.terminated) cf.rational_signal = true;
  return cf;
}

struct CfExponent {
  bool rational_signal = false;
  double exponent = 0;  // tail-window max of log q_{k+1} / log q_k
};

inline CfExponent cf_exponent(const ContinuedFraction& cf) {
  CfExponent res;
  if (cf.rational_signal) {
    res.rational_signal = true;
    res.exponent = std::numeric_limits<double>::infinity();
    return res;
  }
  std::vector<double> ratios;
  for (size_t k = 0; k + 1 < cf.denominators.size(); ++k) {
    if (cf.denominators[k] < 2) continue;
    double a = log2_mpq(mpq_class(cf.denominators[k]));
    double b = log2_mpq(mpq_class(cf.denominators[k + 1]));
    ratios.push_back(b / a);
  }
  if (ratios.empty()) throw std::invalid_argument("cf_exponent: too few convergents");
  size_t start = ratios.size() / 2;
  double m = 0;
  for (size_t i = start; i < ratios.size(); ++i) m = std::max(m, ratios[i]);
  res.exponent = m;
  return res;
}

struct MultiplicativeRow {
  long s = 0;
  mpq_class m;            // min |y q + p| over |q| <= 2^s
  double v_mult = 0;      // largest v with |y q + p| < Pi_+(q)^{-v/n} seen so far
  double v_standard = 0;  // same with |q|-based rate, for the ordering check
  bool exact_zero = false;
};

struct MultiplicativeTable {
  TargetVector y;
  long s_max = 0;
  std::vector<MultiplicativeRow> rows;
  double omega_mult = 0;      // tail-window max of v_mult
  double omega_standard = 0;  // tail-window max of v_standard
  bool omega_infinite = false;
  long tail_start = 0;
};

// Pi_+(q) = product of |q_i| over nonzero coordinates.
inline mpz_class pi_plus(const std::vector<long>& q) {
  mpz_class p = 1;
  for (long qi : q)
    if (qi != 0) p *= std::labs(qi);
  return p;
}

// Multiplicative variant of the brute-force table.  Vectors with Pi_+(q) = 1
// (finitely many exist in total) fall back to the sup-norm rate so the
// ordering omega_mult >= omega_standard holds pointwise.
inline MultiplicativeTable multiplicative_best(const TargetVector& y, long s_max,
                                               double max_points = detail::default_scan_budget()) {
  if (s_max < 0) throw std::invalid_argument("multiplicative_best: s_max must be >= 0");
  detail::check_scan_budget(y.n, s_max, max_points);
  long Q = 1L << s_max;
  detail::ShellScanner scanner(y, Q);
  unsigned long prec = scanner.prec();
  mpq_class den = pow2_mpq((long)prec);

  std::vector<mpz_class> shell_min(s_max + 1);
  std::vector<bool> shell_has(s_max + 1, false);
  std::vector<double> shell_vmult(s_max + 1, 0), shell_vstd(s_max + 1, 0);
  bool any_zero = false;

  scanner.scan([&](const std::vector<long>& q, const mpz_class& d) {
    long sup = 0;
    for (long qi : q) sup = std::max(sup, std::labs(qi));
    long s = 0;
    while ((1L << s) < sup) ++s;
    if (!shell_has[s] || d < shell_min[s]) {
      shell_min[s] = d;
      shell_has[s] = true;
    }
    if (d == 0) {
      any_zero = true;
      return;
    }
    if (sup < 2) return;  // rates undefined at |q| = 1
    signed long e;
    double mant = mpz_get_d_2exp(&e, d.get_mpz_t());
    double log2d = std::log2(mant) + (double)e - (double)prec;  // < 0
    mpz_class pp = pi_plus(q);
    double vstd = -log2d / std::log2((double)sup);
    double vmult;
    if (pp >= 2) {
      signed long ep;
      double mp = mpz_get_d_2exp(&ep, pp.get_mpz_t());
      vmult = -(double)y.n * log2d / (std::log2(mp) + (double)ep);
    } else {
      vmult = vstd;
    }
    shell_vmult[s] = std::max(shell_vmult[s], vmult);
    shell_vstd[s] = std::max(shell_vstd[s], vstd);
  });

  MultiplicativeTable tab;
  tab.y = y;
  tab.s_max = s_max;
  tab.omega_infinite = any_zero;

  mpz_class cur;
  bool have = false;
  double cum_vm = 0, cum_vs = 0;
  for (long s = 0; s <= s_max; ++s) {
    if (shell_has[s] && (!have || shell_min[s] < cur)) {
      cur = shell_min[s];
      have = true;
    }
    cum_vm = std::max(cum_vm, shell_vmult[s]);
    cum_vs = std::max(cum_vs, shell_vstd[s]);
    MultiplicativeRow row;
    row.s = s;
    row.m = mpq_class(cur) / den;
    row.m.canonicalize();
    row.v_mult = cum_vm;
    row.v_standard = cum_vs;
    row.exact_zero = (have && cur == 0);
    tab.rows.push_back(row);
  }
  tab.tail_start = std::max<long>(1, (s_max + 1) / 2);
  double om = 0, os = 0;
  for (const auto& row : tab.rows) {
    if (row.s < tab.tail_start) continue;
    om = std::max(om, row.v_mult);
    os = std::max(os, row.v_standard);
  }
  if (any_zero) {
    tab.omega_mult = tab.omega_standard = std::numeric_limits<double>::infinity();
  } else {
    tab.omega_mult = om;
    tab.omega_standard = os;
  }
  return tab;
}

}  // namespace diolab

#endif  // DIOLAB_ORACLE_HPP
