#ifndef DIOLAB_STATS_HPP
#define DIOLAB_STATS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace diolab::detail {

inline double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  size_t m = xs.size();
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double den = m * sxx - sx * sx;
  return (m * sxy - sx * sy) / den;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

}  // namespace diolab::detail

#endif  // DIOLAB_STATS_HPP
