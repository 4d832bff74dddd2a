#ifndef DIOLAB_LATTICE_HPP
#define DIOLAB_LATTICE_HPP

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <vector>

#include "diolab/core.hpp"

namespace diolab {

// Column-major integer matrix: cols[j] is the j-th basis vector.
using IntMat = std::vector<std::vector<mpz_class>>;

// Basis of a unimodular lattice in R^k.  Entries are rationals with a common
// power-of-two denominator: value(i,j) = cols[j][i] / 2^log2_den.
struct LatticeBasis {
  int dim = 0;
  IntMat cols;
  long log2_den = 0;

  static LatticeBasis identity(int k) {
    LatticeBasis b;
    b.dim = k;
    b.cols.assign(k, std::vector<mpz_class>(k, 0));
    for (int i = 0; i < k; ++i) b.cols[i][i] = 1;
    return b;
  }

  mpq_class entry(int i, int j) const {
    mpq_class q(cols[j][i]);
    return q / pow2_mpq(log2_den) / 1;  // value = int / 2^log2_den
  }
};

inline mpz_class det_bareiss(IntMat m) {
  int k = (int)m.size();
  mpz_class prev = 1;
  int sign = 1;
  for (int c = 0; c < k - 1; ++c) {
    if (m[c][c] == 0) {
      int p = -1;
      for (int j = c + 1; j < k; ++j)
        if (m[j][c] != 0) {
          p = j;
          break;
        }
      if (p < 0) return 0;
      std::swap(m[c], m[p]);
      sign = -sign;
    }
    for (int j = c + 1; j < k; ++j)
      for (int i = c + 1; i < k; ++i) {
        m[j][i] = (m[c][c] * m[j][i] - m[j][c] * m[c][i]) / prev;
      }
    prev = m[c][c];
  }
  return sign * m[k - 1][k - 1];
}

// Exact unimodularity check: integer determinant must be +-2^{k*log2_den}.
inline bool is_unimodular(const LatticeBasis& b) {
  mpz_class d = det_bareiss(b.cols);
  mpz_class want = 1;
  mpz_mul_2exp(want.get_mpz_t(), want.get_mpz_t(), (unsigned long)(b.dim * b.log2_den));
  return d == want || d == -want;
}

inline mpz_class dot(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
  mpz_class s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline mpz_class sup_norm_int(const std::vector<mpz_class>& v) {
  mpz_class s = 0;
  for (const auto& x : v) {
    mpz_class a = abs(x);
    if (a > s) s = a;
  }
  return s;
}

namespace detail {

// Gram-Schmidt data over the rationals for an integer basis.
struct Gso {
  int k;
  std::vector<std::vector<mpq_class>> mu;  // mu[i][j], j < i
  std::vector<mpq_class> B;                // squared norms of b*_i

  void compute(const IntMat& b) {
    k = (int)b.size();
    mu.assign(k, std::vector<mpq_class>(k, 0));
    B.assign(k, 0);
    // bstar kept as rational vectors only transiently
    std::vector<std::vector<mpq_class>> bstar(k, std::vector<mpq_class>(k, 0));
    for (int i = 0; i < k; ++i) {
      for (int r = 0; r < k; ++r) bstar[i][r] = mpq_class(b[i][r]);
      for (int j = 0; j < i; ++j) {
        mpq_class d = 0;
        for (int r = 0; r < k; ++r) d += mpq_class(b[i][r]) * bstar[j][r];
        mu[i][j] = (B[j] == 0) ? mpq_class(0) : mpq_class(d / B[j]);
        for (int r = 0; r < k; ++r) bstar[i][r] -= mu[i][j] * bstar[j][r];
      }
      mpq_class n2 = 0;
      for (int r = 0; r < k; ++r) n2 += bstar[i][r] * bstar[i][r];
      B[i] = n2;
    }
  }
};

inline mpz_class round_nearest(const mpq_class& q) {
  // round half away from zero; any consistent rounding works for size reduction
  mpz_class num = q.get_num(), den = q.get_den();
  bool neg = num < 0;
  if (neg) num = -num;
  mpz_class twice = 2 * num + den;
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), twice.get_mpz_t(), mpz_class(2 * den).get_mpz_t());
  if (neg) r = -r;
  return r;
}

}  // namespace detail

// Exact-integer LLL on the columns of `basis`.  If `transform` is non-null it
// is multiplied on the right by the applied unimodular operations, so that
// output = input * transform holds column-wise.
inline void lll_reduce_inplace(LatticeBasis& basis, const mpq_class& delta = mpq_class(99, 100),
                               IntMat* transform = nullptr) {
  if (delta <= mpq_class(1, 4) || delta >= 1)
    throw std::domain_error("lll_reduce: delta must lie in (1/4, 1)");
  IntMat& b = basis.cols;
  int k = basis.dim;
  if (k <= 1) return;

  detail::Gso g;
  g.compute(b);

  auto size_reduce = [&](int i, int j) {
    if (abs(g.mu[i][j]) <= mpq_class(1, 2)) return;
    mpz_class q = detail::round_nearest(g.mu[i][j]);
    for (int r = 0; r < k; ++r) b[i][r] -= q * b[j][r];
    if (transform)
      for (int r = 0; r < k; ++r) (*transform)[i][r] -= q * (*transform)[j][r];
    mpq_class qq(q);
    for (int l = 0; l < j; ++l) g.mu[i][l] -= qq * g.mu[j][l];
    g.mu[i][j] -= qq;
  };

  int i = 1;
  while (i < k) {
    size_reduce(i, i - 1);
    mpq_class lhs = g.B[i] + g.mu[i][i - 1] * g.mu[i][i - 1] * g.B[i - 1];
    if (lhs >= delta * g.B[i - 1]) {
      for (int j = i - 2; j >= 0; --j) size_reduce(i, j);
      ++i;
    } else {
      std::swap(b[i], b[i - 1]);
      if (transform) std::swap((*transform)[i], (*transform)[i - 1]);
      // standard GSO swap update
      mpq_class muv = g.mu[i][i - 1];
      mpq_class Bnew = g.B[i] + muv * muv * g.B[i - 1];
      if (Bnew == 0) {
        g.compute(b);  // degenerate, should not happen for full-rank input
      } else {
        mpq_class mu_new = muv * g.B[i - 1] / Bnew;
        mpq_class Bi_new = g.B[i - 1] * g.B[i] / Bnew;
        g.B[i - 1] = Bnew;
        g.B[i] = Bi_new;
        for (int j = 0; j < i - 1; ++j) std::swap(g.mu[i][j], g.mu[i - 1][j]);
        for (int l = i + 1; l < k; ++l) {
          mpq_class t = g.mu[l][i];
          g.mu[l][i] = g.mu[l][i - 1] - muv * t;
          g.mu[l][i - 1] = t + mu_new * g.mu[l][i];
        }
        g.mu[i][i - 1] = mu_new;
      }
      if (i > 1) --i;
    }
  }
}

inline LatticeBasis lll_reduce(const LatticeBasis& basis, const mpq_class& delta = mpq_class(99, 100),
                               IntMat* transform = nullptr) {
  LatticeBasis out = basis;
  lll_reduce_inplace(out, delta, transform);
  return out;
}

struct ShortVectorResult {
  std::vector<mpq_class> vector;  // components of the witness
  mpq_class sup_norm;
  bool exact = false;           // true if from enumeration
  mpq_class lower_bound_sq = 0; // valid in LLL-only mode: lambda1^2 >= this (Euclidean)
};

enum class MinimumMode { Lll, Exact };

namespace detail {

// floor(sqrt(q)) for a nonnegative rational, as an integer (floor of the root).
inline mpz_class isqrt_floor(const mpq_class& q) {
  mpz_class f = q.get_num() / q.get_den();
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), f.get_mpz_t());
  return r;
}

// Depth-first sup-norm SVP: enumerate all x with |sum x_i b_i|_2^2 <= C,
// shrinking C = k * best_sup^2 as better sup-norms are found.
struct SupEnum {
  const IntMat* b;
  int k;
  Gso g;
  mpz_class best_sup;
  std::vector<mpz_class> best_vec;
  std::vector<mpz_class> x;
  mpq_class C;

  void run(const IntMat& basis, const mpz_class& init_sup,
           const std::vector<mpz_class>& init_vec) {
    b = &basis;
    k = (int)basis.size();
    g.compute(basis);
    best_sup = init_sup;
    best_vec = init_vec;
    x.assign(k, 0);
    C = mpq_class(best_sup * best_sup) * k;
    descend(k - 1, 0);
  }

  void descend(int level, const mpq_class& used) {
    if (level < 0) {
      std::vector<mpz_class> v((size_t)k, 0);
      bool zero = true;
      for (int j = 0; j < k; ++j) {
        if (x[j] != 0) zero = false;
        for (int r = 0; r < k; ++r) v[r] += x[j] * (*b)[j][r];
      }
      if (zero) return;
      mpz_class s = sup_norm_int(v);
      if (s < best_sup) {
        best_sup = s;
        best_vec = v;
        C = mpq_class(best_sup * best_sup) * k;
      }
      return;
    }
    mpq_class off = 0;
    for (int i = level + 1; i < k; ++i) off += mpq_class(x[i]) * g.mu[i][level];
    mpq_class budget = C - used;
    if (budget < 0) return;
    if (g.B[level] == 0) return;
    mpq_class lim = budget / g.B[level];
    mpz_class rad = isqrt_floor(lim) + 1;
    mpz_class center = round_nearest(-off);
    for (mpz_class xl = center - rad; xl <= center + rad; ++xl) {
      mpq_class y = mpq_class(xl) + off;
      mpq_class contrib = y * y * g.B[level];
      if (contrib > budget) continue;
      x[level] = xl;
      descend(level - 1, used + contrib);
      // C may have shrunk; keep scanning, the exact test above re-checks
    }
    x[level] = 0;
  }
};

}  // namespace detail

// First minimum of the lattice in the sup-norm.  Exact mode enumerates inside
// an LLL-derived Euclidean bound (dim <= 8); LLL mode returns the best reduced
// basis vector, which brackets lambda1 within the usual 2^{(k-1)/2} factor.
inline ShortVectorResult first_minimum(const LatticeBasis& basis,
                                       MinimumMode mode = MinimumMode::Exact,
                                       const mpq_class& delta = mpq_class(99, 100)) {
  if (basis.dim < 1) throw std::domain_error("first_minimum: empty basis");
  if (mode == MinimumMode::Exact && basis.dim > 8)
    throw std::domain_error("first_minimum: exact mode limited to dim <= 8");
  LatticeBasis red = lll_reduce(basis, delta);

  int best = 0;
  mpz_class best_sup = sup_norm_int(red.cols[0]);
  for (int j = 1; j < red.dim; ++j) {
    mpz_class s = sup_norm_int(red.cols[j]);
    if (s < best_sup) {
      best_sup = s;
      best = j;
    }
  }
  std::vector<mpz_class> witness = red.cols[best];

  if (mode == MinimumMode::Exact) {
    detail::SupEnum e;
    e.run(red.cols, best_sup, witness);
    best_sup = e.best_sup;
    witness = e.best_vec;
  }

  ShortVectorResult res;
  res.exact = (mode == MinimumMode::Exact);
  mpq_class den = pow2_mpq(basis.log2_den);
  res.vector.reserve(basis.dim);
  for (int r = 0; r < basis.dim; ++r) {
    mpq_class c = mpq_class(witness[r]) / den;
    c.canonicalize();
    res.vector.push_back(c);
  }
  res.sup_norm = mpq_class(best_sup) / den;
  res.sup_norm.canonicalize();
  if (mode == MinimumMode::Lll) {
    // Euclidean lambda1^2 >= |b_best|^2 / 2^{k-1}
    mpz_class e2 = dot(red.cols[best], red.cols[best]);
    res.lower_bound_sq = mpq_class(e2) / (den * den) / pow2_mpq(basis.dim - 1);
    res.lower_bound_sq.canonicalize();
  }
  return res;
}

// Membership in Omega_k(eps): some nonzero lattice vector of sup-norm < eps.
inline bool in_omega_epsilon(const LatticeBasis& basis, const mpq_class& eps) {
  if (eps <= 0) throw std::domain_error("in_omega_epsilon: eps must be positive");
  return first_minimum(basis, MinimumMode::Exact).sup_norm < eps;
}

}  // namespace diolab

#endif  // DIOLAB_LATTICE_HPP
