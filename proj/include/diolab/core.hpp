#ifndef DIOLAB_CORE_HPP
#define DIOLAB_CORE_HPP

#include <gmpxx.h>

#include <cstdlib>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "diolab/dyadic.hpp"

namespace diolab {

// Point y = (y_1,...,y_n) in R^n held as exact dyadics.
struct TargetVector {
  int n = 1;
  std::vector<Dyadic> coords;
  unsigned long precision_bits = 64;

  TargetVector() = default;
  TargetVector(std::vector<Dyadic> c, unsigned long prec)
      : n((int)c.size()), coords(std::move(c)), precision_bits(prec) {
    for (const auto& y : coords)
      if (y.scale() > precision_bits)
        throw std::invalid_argument("coordinate scale exceeds precision budget");
  }

  static TargetVector from_decimals(const std::vector<std::string>& literals,
                                    unsigned long precision_bits) {
    std::vector<Dyadic> c;
    c.reserve(literals.size());
    for (const auto& s : literals) c.push_back(quantize(s, precision_bits));
    return TargetVector(std::move(c), precision_bits);
  }

  static TargetVector from_rationals(const std::vector<mpq_class>& vals,
                                     unsigned long precision_bits) {
    std::vector<Dyadic> c;
    c.reserve(vals.size());
    for (const auto& v : vals) c.push_back(quantize_mpq(v, precision_bits));
    return TargetVector(std::move(c), precision_bits);
  }
};

struct ApproximationQuery {
  mpq_class v;          // exponent, >= n
  long norm_bound = 1;  // sup-norm cap Q on q
  bool multiplicative = false;
};

/// The box B_{v,s}: |x_0| < 2^{-vs}, |x_i| < 2^{s+1} for i = 1..n.
struct BoxSpec {
  int n = 1;
  mpq_class v;
  long s = 0;
};

// Exact rational that may be +infinity (pole of an exponent inversion).
struct RatOrInf {
  bool infinite = false;
  mpq_class value;

  static RatOrInf inf() { return RatOrInf{true, 0}; }
  static RatOrInf of(mpq_class q) { return RatOrInf{false, std::move(q)}; }

  std::string str() const { return infinite ? "inf" : value.get_str(); }
  double to_double() const {
    return infinite ? std::numeric_limits<double>::infinity() : value.get_d();
  }
};

enum class GammaConvention { Paper, Sharp };

// gamma(v) = (v - n) / (n (v + 1)), the decay rate matched to exponent v.
inline mpq_class gamma_of_v(int n, const mpq_class& v) {
  if (n < 1) throw std::domain_error("gamma_of_v: n must be >= 1");
  if (v < n) throw std::domain_error("gamma_of_v: require v >= n");
  mpq_class r = (v - n) / (n * (v + 1));
  r.canonicalize();
  return r;
}

// The uneven-balancing rate (v - n) / (v + 1); equals n * gamma_of_v.
inline mpq_class gamma_sharp_of_v(int n, const mpq_class& v) {
  mpq_class r = gamma_of_v(n, v) * n;
  r.canonicalize();
  return r;
}

// Inverts gamma back to v.  Paper convention: v = n(1+g)/(1-ng), pole at g = 1/n.
// Sharp convention: v = (n+g)/(1-g), pole at g = 1.
inline RatOrInf v_of_gamma(int n, const mpq_class& gamma, GammaConvention conv) {
  if (n < 1) throw std::domain_error("v_of_gamma: n must be >= 1");
  if (gamma < 0) throw std::domain_error("v_of_gamma: gamma must be >= 0");
  if (conv == GammaConvention::Paper) {
    mpq_class den = 1 - n * gamma;
    if (den <= 0) return RatOrInf::inf();
    mpq_class r = n * (1 + gamma) / den;
    r.canonicalize();
    return RatOrInf::of(r);
  }
  mpq_class den = 1 - gamma;
  if (den <= 0) return RatOrInf::inf();
  mpq_class r = (n + gamma) / den;
  r.canonicalize();
  return RatOrInf::of(r);
}

inline double v_of_gamma_d(int n, double gamma, GammaConvention conv) {
  if (conv == GammaConvention::Paper) {
    double den = 1 - n * gamma;
    if (den <= 0) return std::numeric_limits<double>::infinity();
    return n * (1 + gamma) / den;
  }
  double den = 1 - gamma;
  if (den <= 0) return std::numeric_limits<double>::infinity();
  return (n + gamma) / den;
}

// 2^e as an exact rational, e may be negative.
inline mpq_class pow2_mpq(long e) {
  mpz_class p = 1;
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), (unsigned long)std::abs(e));
  if (e >= 0) return mpq_class(p);
  mpq_class q(1, p);
  q.canonicalize();
  return q;
}

// Lebesgue volume of B_{v,s}, equal to 2^{2n+1-(v-n)s} exactly.
// Computed from the side lengths; the closed form is asserted in tests.
inline mpq_class box_volume(const BoxSpec& b) {
  if (b.n < 1 || b.s < 0) throw std::domain_error("box_volume: invalid BoxSpec");
  // 2 * 2^{-vs} * (2 * 2^{s+1})^n; vs is rational so work with a common root.
  mpq_class e = mpq_class(2 * b.n + 1) - (b.v - b.n) * b.s;
  e.canonicalize();
  // e = p/q: volume = 2^{p/q}; for a valid BoxSpec (v - n) s has integral
  // numerator only when q divides p, which holds iff v s is an integer.
  if (e.get_den() != 1)
    throw std::domain_error("box_volume: 2^{2n+1-(v-n)s} is irrational for this (v,s)");
  long p = (long)e.get_num().get_si();
  return pow2_mpq(p);
}

// Both decay-rate conventions for a given (n, v).
struct CorrespondenceParams {
  int n;
  mpq_class v;
  mpq_class gamma_paper;
  mpq_class gamma_sharp;

  CorrespondenceParams(int n_, mpq_class v_)
      : n(n_), v(std::move(v_)), gamma_paper(gamma_of_v(n_, v)), gamma_sharp(gamma_sharp_of_v(n_, v)) {}
};

// Flag grammar for exact CLI inputs: "p/q", "2^-k", "2^k", plain decimals.
inline mpq_class parse_exact(const std::string& s) {
  if (s.rfind("2^", 0) == 0) {
    long e = std::stol(s.substr(2));
    return pow2_mpq(e);
  }
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    mpz_class num(s.substr(0, slash));
    mpz_class den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
  return parse_decimal(s);
}

inline std::string rat_str(const mpq_class& q) { return q.get_str(); }

}  // namespace diolab

#endif  // DIOLAB_CORE_HPP
