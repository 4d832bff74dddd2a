#ifndef DIOLAB_RNG_HPP
#define DIOLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace diolab {

// Counter-based generator: draw(i) is a pure function of (seed, stream, i), so
// sampling streams are splittable by index and independent of worker count.
class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  uint64_t draw(uint64_t index) const {
    uint64_t x = seed_ + 0x9E3779B97F4A7C15ull * (index + 1) +
                 0xBF58476D1CE4E5B9ull * (stream_ + 1);
    return mix(mix(x) ^ 0x94D049BB133111EBull);
  }

  // uniform in [0,1) with 53 random bits
  double uniform(uint64_t index) const {
    return (double)(draw(index) >> 11) * 0x1.0p-53;
  }

  // numerator of a dyadic uniform in [0,1): draw >> (64 - bits)
  uint64_t uniform_bits(uint64_t index, int bits) const {
    return draw(index) >> (64 - bits);
  }

 private:
  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  uint64_t seed_;
  uint64_t stream_;
};

namespace lds {

// radical-inverse in base b (Halton component)
inline double radical_inverse(uint64_t i, uint32_t base) {
  double inv = 1.0 / base, f = inv, r = 0;
  while (i > 0) {
    r += f * (double)(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

// Acklam-style inverse normal CDF, good to ~1e-9 (ample for census directions)
inline double inv_normal_cdf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

// Deterministic low-discrepancy directions on S^{dim-1}.  The first 2*dim
// entries are the signed coordinate axes (worst cases for planar supports);
// the rest are normalized inverse-CDF Halton points.
inline std::vector<std::vector<double>> sphere_census(int dim, int count) {
  static const uint32_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  std::vector<std::vector<double>> out;
  for (int i = 0; i < dim && (int)out.size() < count; ++i) {
    for (int sgn = +1; sgn >= -1; sgn -= 2) {
      std::vector<double> e(dim, 0.0);
      e[i] = sgn;
      out.push_back(e);
      if ((int)out.size() >= count) break;
    }
  }
  uint64_t idx = 1;
  while ((int)out.size() < count) {
    std::vector<double> v(dim);
    double n2 = 0;
    for (int j = 0; j < dim; ++j) {
      double u = radical_inverse(idx, primes[j % 8]);
      u = std::min(std::max(u, 1e-12), 1 - 1e-12);
      v[j] = inv_normal_cdf(u);
      n2 += v[j] * v[j];
    }
    ++idx;
    if (n2 < 1e-12) continue;
    double inv = 1.0 / std::sqrt(n2);
    for (double& x : v) x *= inv;
    out.push_back(v);
  }
  return out;
}

}  // namespace lds
}  // namespace diolab

#endif  // DIOLAB_RNG_HPP
