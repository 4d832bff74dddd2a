#ifndef DIOLAB_DYADIC_HPP
#define DIOLAB_DYADIC_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace diolab {

// Dyadic rational m / 2^scale with arbitrary-precision mantissa.
// Canonical form: mantissa odd or zero; zero has scale 0.
// Addition, subtraction, multiplication and comparison are exact;
// division is supported only by powers of two.
class Dyadic {
 public:
  Dyadic() : mant_(0), scale_(0) {}
  Dyadic(long v) : mant_(v), scale_(0) {}
  Dyadic(mpz_class mant, unsigned long scale) : mant_(std::move(mant)), scale_(scale) {
    canonicalize();
  }

  const mpz_class& mantissa() const { return mant_; }
  unsigned long scale() const { return scale_; }

  bool is_zero() const { return mant_ == 0; }
  int sign() const { return sgn(mant_); }

  // Value as an exact rational.
  mpq_class to_mpq() const {
    mpq_class q(mant_);
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), scale_);
    q /= mpq_class(den);
    return q;
  }

  double to_double() const { return mpq_get_d(to_mpq().get_mpq_t()); }

  // Mantissa rescaled to the given scale; requires target >= scale_.
  mpz_class mantissa_at(unsigned long target_scale) const {
    if (target_scale < scale_) throw std::invalid_argument("mantissa_at: scale too small");
    mpz_class m;
    mpz_mul_2exp(m.get_mpz_t(), mant_.get_mpz_t(), target_scale - scale_);
    return m;
  }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    unsigned long s = std::max(a.scale_, b.scale_);
    return Dyadic(a.mantissa_at(s) + b.mantissa_at(s), s);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) {
    unsigned long s = std::max(a.scale_, b.scale_);
    return Dyadic(a.mantissa_at(s) - b.mantissa_at(s), s);
  }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(a.mant_ * b.mant_, a.scale_ + b.scale_);
  }
  Dyadic operator-() const { return Dyadic(-mant_, scale_); }

  // Multiply by 2^e (e may be negative).
  Dyadic mul_pow2(long e) const {
    if (is_zero()) return Dyadic();
    if (e >= 0) {
      long drop = std::min<long>(e, (long)scale_);
      mpz_class m;
      mpz_mul_2exp(m.get_mpz_t(), mant_.get_mpz_t(), e - drop);
      Dyadic r;
      r.mant_ = m;
      r.scale_ = scale_ - drop;
      return r;
    }
    return Dyadic(mant_, scale_ + (unsigned long)(-e));
  }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.scale_ == b.scale_ && a.mant_ == b.mant_;
  }
  friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }
  friend bool operator<(const Dyadic& a, const Dyadic& b) {
    unsigned long s = std::max(a.scale_, b.scale_);
    return a.mantissa_at(s) < b.mantissa_at(s);
  }
  friend bool operator>(const Dyadic& a, const Dyadic& b) { return b < a; }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return !(b < a); }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) { return !(a < b); }

  std::string str() const {
    mpq_class q = to_mpq();
    return q.get_str();
  }

 private:
  void canonicalize() {
    if (mant_ == 0) {
      scale_ = 0;
      return;
    }
    unsigned long tz = mpz_scan1(mant_.get_mpz_t(), 0);
    unsigned long drop = std::min(tz, scale_);
    if (drop > 0) {
      mpz_tdiv_q_2exp(mant_.get_mpz_t(), mant_.get_mpz_t(), drop);
      scale_ -= drop;
    }
  }

  mpz_class mant_;
  unsigned long scale_;
};

// Round-half-to-even division num/den, exact inputs.
inline mpz_class div_round_half_even(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::invalid_argument("division by zero");
  mpz_class q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  mpz_class d = abs(den);
  mpz_class twice_r = 2 * r;
  int c = cmp(twice_r, d);
  if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;
  return q;
}

// Nearest dyadic with scale <= precision_bits; ties round to even mantissa.
inline Dyadic quantize_mpq(const mpq_class& v, unsigned long precision_bits) {
  mpz_class num = v.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), precision_bits);
  mpz_class m = div_round_half_even(num, v.get_den());
  return Dyadic(m, precision_bits);
}

// Parse a plain decimal literal ("-12", "0.375", "1.25e-3" is not accepted).
inline mpq_class parse_decimal(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty decimal literal");
  size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') {
    neg = (s[i] == '-');
    ++i;
  }
  std::string intpart, fracpart;
  while (i < s.size() && isdigit((unsigned char)s[i])) intpart += s[i++];
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && isdigit((unsigned char)s[i])) fracpart += s[i++];
  }
  if (i != s.size() || (intpart.empty() && fracpart.empty()))
    throw std::invalid_argument("malformed decimal literal: " + s);
  mpz_class num(intpart.empty() ? "0" : intpart);
  mpz_class den = 1;
  for (char c : fracpart) {
    num = num * 10 + (c - '0');
    den *= 10;
  }
  mpq_class q(num, den);
  q.canonicalize();
  if (neg) q = -q;
  return q;
}

inline Dyadic quantize(const std::string& decimal_literal, unsigned long precision_bits) {
  return quantize_mpq(parse_decimal(decimal_literal), precision_bits);
}

// floor(sqrt(v) * 2^precision_bits) / 2^precision_bits for v >= 0: lets
// quadratic irrationals be specified to the full working precision.
inline Dyadic dyadic_sqrt(const mpq_class& v, unsigned long precision_bits) {
  if (v < 0) throw std::domain_error("dyadic_sqrt: negative argument");
  // floor(sqrt(num * 2^{2p} / den)) = floor(sqrt(floor(num * 2^{2p} / den)))
  mpz_class scaled = v.get_num();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * precision_bits);
  scaled /= v.get_den();
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), scaled.get_mpz_t());
  return Dyadic(r, precision_bits);
}

}  // namespace diolab

#endif  // DIOLAB_DYADIC_HPP
