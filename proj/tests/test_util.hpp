#ifndef DIOLAB_TEST_UTIL_HPP
#define DIOLAB_TEST_UTIL_HPP

#include "diolab/core.hpp"
#include "diolab/dyadic.hpp"
#include "diolab/lattice.hpp"
#include "diolab/rng.hpp"

namespace diolab_test {

// Random unimodular integer basis built from shears and sign flips; entries
// stay small enough that reduction is instant.
inline diolab::LatticeBasis random_unimodular(int k, uint64_t seed, int ops = 24) {
  diolab::LatticeBasis b = diolab::LatticeBasis::identity(k);
  diolab::CounterRng rng(seed, 17);
  for (int step = 0; step < ops; ++step) {
    uint64_t r = rng.draw((uint64_t)step);
    int i = (int)(r % (uint64_t)k);
    int j = (int)((r >> 8) % (uint64_t)k);
    if (i == j) {
      // negate a column: determinant flips sign, stays unimodular
      for (int row = 0; row < k; ++row) b.cols[i][row] = -b.cols[i][row];
      continue;
    }
    long c = (long)((r >> 16) % 7) - 3;
    if (c == 0) c = 1;
    for (int row = 0; row < k; ++row) b.cols[i][row] += c * b.cols[j][row];
  }
  return b;
}

// Fractional part of sqrt(d) as an exact dyadic at the given precision.
inline diolab::Dyadic quadratic_frac(long d, unsigned long precision_bits) {
  diolab::Dyadic r = diolab::dyadic_sqrt(mpq_class(d), precision_bits);
  long fl = (long)r.to_double();
  return r - diolab::Dyadic(fl);
}

// Full-entropy dyadic in [0,1) at `bits` bits of resolution.
inline diolab::Dyadic random_dyadic(uint64_t seed, uint64_t index, int bits) {
  diolab::CounterRng rng(seed, 5);
  int chunks = (bits + 63) / 64;
  mpz_class m = 0;
  for (int c = 0; c < chunks; ++c) {
    m <<= 64;
    m += rng.draw(index * (uint64_t)chunks + (uint64_t)c);
  }
  mpz_class den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), (unsigned long)bits);
  m %= den;
  return diolab::Dyadic(m, (unsigned long)bits);
}

}  // namespace diolab_test

#endif  // DIOLAB_TEST_UTIL_HPP
