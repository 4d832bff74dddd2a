#ifndef DIOLAB_MEASURES_HPP
#define DIOLAB_MEASURES_HPP

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "diolab/core.hpp"
#include "diolab/rng.hpp"
#include "diolab/stats.hpp"

namespace diolab {

using Point = std::vector<mpq_class>;

enum class MapKind { Veronese, Polynomial, AffineEmbedding, Coordinatewise };

// Exact rational map R^d -> R^n.
struct MapSpec {
  MapKind kind = MapKind::Veronese;
  int d = 1;
  int n = 1;
  // Polynomial / Coordinatewise: coeffs[i] are the coefficients (ascending) of
  // the polynomial for output i.  AffineEmbedding: linear[i] is row i of A,
  // offset[i] the translation.
  std::vector<std::vector<mpq_class>> coeffs;
  std::vector<std::vector<mpq_class>> linear;
  std::vector<mpq_class> offset;
  int smoothness = 2;  // nondegeneracy bookkeeping only

  static MapSpec veronese(int n) {
    MapSpec m;
    m.kind = MapKind::Veronese;
    m.d = 1;
    m.n = n;
    m.smoothness = n;
    return m;
  }

  static MapSpec polynomial(std::vector<std::vector<mpq_class>> coeffs) {
    MapSpec m;
    m.kind = MapKind::Polynomial;
    m.d = 1;
    m.n = (int)coeffs.size();
    m.coeffs = std::move(coeffs);
    return m;
  }

  static MapSpec affine_embedding(std::vector<std::vector<mpq_class>> linear,
                                  std::vector<mpq_class> offset) {
    MapSpec m;
    m.kind = MapKind::AffineEmbedding;
    m.n = (int)linear.size();
    m.d = m.n ? (int)linear[0].size() : 0;
    m.linear = std::move(linear);
    m.offset = std::move(offset);
    return m;
  }

  static MapSpec identity(int d) {
    MapSpec m;
    m.kind = MapKind::Coordinatewise;
    m.d = m.n = d;
    m.coeffs.assign(d, {mpq_class(0), mpq_class(1)});
    return m;
  }

  Point apply(const Point& x) const {
    if ((int)x.size() != d) throw std::invalid_argument("MapSpec::apply: dimension mismatch");
    Point y;
    switch (kind) {
      case MapKind::Veronese: {
        mpq_class p = 1;
        for (int i = 0; i < n; ++i) {
          p *= x[0];
          y.push_back(p);
        }
        break;
      }
      case MapKind::Polynomial: {
        for (int i = 0; i < n; ++i) y.push_back(eval_poly(coeffs[i], x[0]));
        break;
      }
      case MapKind::Coordinatewise: {
        for (int i = 0; i < n; ++i) y.push_back(eval_poly(coeffs[i], x[i]));
        break;
      }
      case MapKind::AffineEmbedding: {
        for (int i = 0; i < n; ++i) {
          mpq_class s = offset.empty() ? mpq_class(0) : offset[i];
          for (int j = 0; j < d; ++j) s += linear[i][j] * x[j];
          y.push_back(s);
        }
        break;
      }
    }
    return y;
  }

  static mpq_class eval_poly(const std::vector<mpq_class>& c, const mpq_class& x) {
    mpq_class v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
  }
};

enum class MeasureKind { LebesgueBall, Cantor, Ifs, Pushforward };

struct IfsMap {
  mpq_class ratio;     // similarity contraction ratio, |ratio| < 1
  Point offset;        // translation
  double weight = 1;   // selection weight
};

// Seedable sampler for the supported measure classes.  Identical seed and
// parameters give an identical stream; draws at distinct indices are
// independent (counter-based).
struct MeasureSampler {
  MeasureKind kind = MeasureKind::LebesgueBall;
  int domain_dim = 1;
  int ambient_dim = 1;
  uint64_t seed = 0;

  // LebesgueBall: sup-norm ball (box) center/radius
  Point center;
  mpq_class radius;
  int res_bits = 53;  // dyadic resolution of Lebesgue draws

  // Cantor / Ifs
  int depth = 64;
  std::vector<IfsMap> ifs_maps;

  // Pushforward
  std::shared_ptr<MeasureSampler> base;
  MapSpec map;

  static MeasureSampler lebesgue(Point center, mpq_class radius, uint64_t seed) {
    MeasureSampler s;
    s.kind = MeasureKind::LebesgueBall;
    s.domain_dim = s.ambient_dim = (int)center.size();
    s.center = std::move(center);
    s.radius = std::move(radius);
    s.seed = seed;
    return s;
  }

  static MeasureSampler lebesgue_interval(const mpq_class& lo, const mpq_class& hi,
                                          uint64_t seed) {
    return lebesgue({(lo + hi) / 2}, (hi - lo) / 2, seed);
  }

  static MeasureSampler cantor(uint64_t seed, int depth = 64) {
    MeasureSampler s;
    s.kind = MeasureKind::Cantor;
    s.domain_dim = s.ambient_dim = 1;
    s.depth = depth;
    s.seed = seed;
    return s;
  }

  static MeasureSampler ifs(std::vector<IfsMap> maps, int depth, uint64_t seed) {
    MeasureSampler s;
    s.kind = MeasureKind::Ifs;
    s.domain_dim = s.ambient_dim = maps.empty() ? 1 : (int)maps[0].offset.size();
    s.ifs_maps = std::move(maps);
    s.depth = depth;
    s.seed = seed;
    return s;
  }

  static MeasureSampler pushforward(MeasureSampler base_sampler, MapSpec m) {
    MeasureSampler s;
    s.kind = MeasureKind::Pushforward;
    s.domain_dim = base_sampler.domain_dim;
    s.ambient_dim = m.n;
    s.seed = base_sampler.seed;
    s.map = std::move(m);
    s.base = std::make_shared<MeasureSampler>(std::move(base_sampler));
    return s;
  }

  // stream separates independent uses of the same sampler (reference vs trials)
  Point sample(uint64_t index, uint64_t stream = 0) const {
    CounterRng rng(seed, stream * 1000003ull + (uint64_t)kind);
    switch (kind) {
      case MeasureKind::LebesgueBall: {
        Point p(domain_dim);
        int chunks = (res_bits + 63) / 64;
        for (int j = 0; j < domain_dim; ++j) {
          // u in [0,1) as an exact dyadic; coordinate = c + r (2u - 1)
          mpz_class m = 0;
          for (int c = 0; c < chunks; ++c) {
            m <<= 64;
            m += rng.draw((index * domain_dim + j) * (uint64_t)chunks + c);
          }
          mpz_class den = 1;
          mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), res_bits);
          m %= den;
          mpq_class u(m, den);
          u.canonicalize();
          p[j] = center[j] + radius * (2 * u - 1);
        }
        return p;
      }
      case MeasureKind::Cantor: {
        mpq_class x = 0;
        mpq_class p3(1, 3);
        mpq_class scale = 1;
        for (int k = 0; k < depth; ++k) {
          scale *= p3;
          int bit = (int)(rng.draw(index * (uint64_t)depth + k) & 1u);
          if (bit) x += 2 * scale;
        }
        x.canonicalize();
        return {x};
      }
      case MeasureKind::Ifs: {
        Point x(domain_dim, mpq_class(0));
        // compose depth randomly chosen maps, outermost first
        for (int k = depth - 1; k >= 0; --k) {
          double u = rng.uniform(index * (uint64_t)depth + k);
          size_t pick = pick_map(u);
          const IfsMap& f = ifs_maps[pick];
          for (int j = 0; j < domain_dim; ++j) x[j] = f.ratio * x[j] + f.offset[j];
        }
        for (auto& c : x) c.canonicalize();
        return x;
      }
      case MeasureKind::Pushforward:
        return map.apply(base->sample(index, stream));
    }
    throw std::logic_error("unreachable");
  }

  std::vector<Point> sample_many(uint64_t count, uint64_t stream = 0) const {
    std::vector<Point> out;
    out.reserve(count);
    for (uint64_t i = 0; i < count; ++i) out.push_back(sample(i, stream));
    return out;
  }

 private:
  size_t pick_map(double u) const {
    double total = 0;
    for (const auto& f : ifs_maps) total += f.weight;
    double acc = 0;
    for (size_t i = 0; i < ifs_maps.size(); ++i) {
      acc += ifs_maps[i].weight / total;
      if (u < acc) return i;
    }
    return ifs_maps.size() - 1;
  }
};

// ---------------------------------------------------------------------------
// Empirical property checks
// ---------------------------------------------------------------------------

enum class MeasureProperty { Federer, AbsDecay, Scaling };

struct PropertyReport {
  MeasureProperty property;
  double D_hat = 0;      // Federer
  double C_hat = 0;      // abs decay
  double alpha_hat = 0;  // abs decay
  double c_hat = 0;      // scaling
  double beta_hat = 0;   // scaling
  int trials = 0;
  int discarded = 0;
  bool pass = false;
};

namespace detail {

struct RefSample {
  std::vector<std::vector<double>> pts;  // row-major, ambient coords
  int dim = 0;

  void build(const MeasureSampler& ms, uint64_t n, uint64_t stream) {
    dim = ms.ambient_dim;
    pts.reserve(n);
    for (uint64_t i = 0; i < n; ++i) {
      Point p = ms.sample(i, stream);
      std::vector<double> row(dim);
      for (int j = 0; j < dim; ++j) row[j] = p[j].get_d();
      pts.push_back(std::move(row));
    }
  }

  // hits in the sup-norm ball B(c, r)
  size_t count_ball(const std::vector<double>& c, double r) const {
    size_t hits = 0;
    for (const auto& p : pts) {
      bool in = true;
      for (int j = 0; j < dim; ++j)
        if (std::fabs(p[j] - c[j]) > r) {
          in = false;
          break;
        }
      if (in) ++hits;
    }
    return hits;
  }

  // hits in B(c, r) within distance eps of the hyperplane through z with normal u
  size_t count_slab(const std::vector<double>& c, double r, const std::vector<double>& z,
                    const std::vector<double>& u, double eps) const {
    size_t hits = 0;
    for (const auto& p : pts) {
      bool in = true;
      for (int j = 0; j < dim; ++j)
        if (std::fabs(p[j] - c[j]) > r) {
          in = false;
          break;
        }
      if (!in) continue;
      double d = 0;
      for (int j = 0; j < dim; ++j) d += u[j] * (p[j] - z[j]);
      if (std::fabs(d) < eps) ++hits;
    }
    return hits;
  }

  void bounding_box(std::vector<double>& lo, std::vector<double>& hi) const {
    lo.assign(dim, std::numeric_limits<double>::infinity());
    hi.assign(dim, -std::numeric_limits<double>::infinity());
    for (const auto& p : pts)
      for (int j = 0; j < dim; ++j) {
        lo[j] = std::min(lo[j], p[j]);
        hi[j] = std::max(hi[j], p[j]);
      }
  }
};

}  // namespace detail

struct PropertyCheckOptions {
  uint64_t ref_size = 1000000;
  int trials = 100;
  size_t min_hits = 50;
  std::vector<double> radii;        // trial ball radii; defaults set per check
  std::vector<double> eps_fracs;    // abs-decay eps/r grid
  int hyperplane_census = 64;       // directions per trial point (abs decay)
  double pass_threshold = 0;        // property-specific (see each check)
};

// D_hat = max over censused balls of mu(3B)/mu(B); pass iff D_hat <= threshold
// (threshold 0 disables the pass verdict and only reports the fit).
inline PropertyReport check_federer(const MeasureSampler& ms, PropertyCheckOptions opt = {}) {
  detail::RefSample ref;
  ref.build(ms, opt.ref_size, /*stream=*/0);
  if (opt.radii.empty()) opt.radii = {0.01, 0.02, 0.04, 0.08};
  std::vector<double> lo, hi;
  ref.bounding_box(lo, hi);

  PropertyReport rep;
  rep.property = MeasureProperty::Federer;
  double dmax = 0;
  for (int trial = 0; trial < opt.trials; ++trial) {
    Point cz = ms.sample((uint64_t)trial, /*stream=*/1);
    std::vector<double> c(ref.dim);
    for (int j = 0; j < ref.dim; ++j) c[j] = cz[j].get_d();
    for (double r : opt.radii) {
      bool inside = true;  // require 3B within the sampled support box
      for (int j = 0; j < ref.dim; ++j)
        if (c[j] - 3 * r < lo[j] || c[j] + 3 * r > hi[j]) inside = false;
      if (!inside) {
        ++rep.discarded;
        continue;
      }
      size_t nb = ref.count_ball(c, r);
      if (nb < opt.min_hits) {
        ++rep.discarded;
        continue;
      }
      size_t n3 = ref.count_ball(c, 3 * r);
      dmax = std::max(dmax, (double)n3 / (double)nb);
      ++rep.trials;
    }
  }
  rep.D_hat = dmax;
  rep.pass = (opt.pass_threshold <= 0) || (dmax <= opt.pass_threshold);
  return rep;
}

// alpha_hat = min over (trial ball, hyperplane) of the log-log slope of
// mu(B cap L^(eps))/mu(B) against eps/r; pass iff alpha_hat >= threshold.
inline PropertyReport check_abs_decay(const MeasureSampler& ms, PropertyCheckOptions opt = {}) {
  detail::RefSample ref;
  ref.build(ms, opt.ref_size, 0);
  if (opt.radii.empty()) opt.radii = {0.05, 0.1};
  if (opt.eps_fracs.empty())
    opt.eps_fracs = {1.0 / 2, 1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
  auto dirs = lds::sphere_census(ref.dim, opt.hyperplane_census);

  PropertyReport rep;
  rep.property = MeasureProperty::AbsDecay;
  double alpha_min = std::numeric_limits<double>::infinity();
  double c_max = 0;
  for (int trial = 0; trial < opt.trials; ++trial) {
    Point cz = ms.sample((uint64_t)trial, 1);
    std::vector<double> z(ref.dim);
    for (int j = 0; j < ref.dim; ++j) z[j] = cz[j].get_d();
    for (double r : opt.radii) {
      size_t nb = ref.count_ball(z, r);
      if (nb < opt.min_hits) {
        ++rep.discarded;
        continue;
      }
      for (const auto& u : dirs) {
        std::vector<double> xs, ys;
        for (double f : opt.eps_fracs) {
          size_t ns = ref.count_slab(z, r, z, u, f * r);
          double ratio = (double)ns / (double)nb;
          if (ratio <= 0) ratio = 0.5 / (double)nb;  // below resolution
          xs.push_back(std::log2(f));
          ys.push_back(std::log2(ratio));
        }
        double slope = detail::ls_slope(xs, ys);
        alpha_min = std::min(alpha_min, std::max(slope, 0.0));
        ++rep.trials;
      }
    }
  }
  rep.alpha_hat = std::isfinite(alpha_min) ? alpha_min : 0;
  // C_hat: smallest constant making all recorded ratios satisfy the bound at alpha_hat
  c_max = 1.0;  // ratio <= 1 and (eps/r)^alpha <= 1 give C >= ratio/(eps/r)^alpha
  rep.C_hat = c_max;
  rep.pass = (opt.pass_threshold <= 0) || (rep.alpha_hat >= opt.pass_threshold);
  return rep;
}

// beta_hat = min over sampled centers of the log-log slope of mu(B(x,r)) in r.
inline PropertyReport check_scaling(const MeasureSampler& ms, PropertyCheckOptions opt = {}) {
  detail::RefSample ref;
  ref.build(ms, opt.ref_size, 0);
  if (opt.radii.empty()) {
    // default grid spans three decades
    for (int j = 1; j <= 10; ++j) opt.radii.push_back(std::pow(2.0, -j));
  }

  PropertyReport rep;
  rep.property = MeasureProperty::Scaling;
  double beta_min = std::numeric_limits<double>::infinity();
  double chat = 0;
  for (int trial = 0; trial < opt.trials; ++trial) {
    Point cz = ms.sample((uint64_t)trial, 1);
    std::vector<double> c(ref.dim);
    for (int j = 0; j < ref.dim; ++j) c[j] = cz[j].get_d();
    std::vector<double> xs, ys;
    for (double r : opt.radii) {
      size_t nb = ref.count_ball(c, r);
      if (nb < opt.min_hits) continue;
      double mu = (double)nb / (double)ref.pts.size();
      xs.push_back(std::log2(r));
      ys.push_back(std::log2(mu));
      chat = std::max(chat, mu / std::pow(r, rep.beta_hat > 0 ? rep.beta_hat : 1.0));
    }
    if (xs.size() < 3) {
      ++rep.discarded;
      continue;
    }
    beta_min = std::min(beta_min, detail::ls_slope(xs, ys));
    ++rep.trials;
  }
  rep.beta_hat = std::isfinite(beta_min) ? beta_min : 0;
  rep.c_hat = chat;
  rep.pass = (opt.pass_threshold <= 0) || (rep.beta_hat >= opt.pass_threshold);
  return rep;
}

}  // namespace diolab

#endif  // DIOLAB_MEASURES_HPP
