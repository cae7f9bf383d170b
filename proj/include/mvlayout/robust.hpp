#pragma once

// Small robust-statistics helpers shared by the column binning and the
// consensus aggregation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace mvlayout {

inline double median_sorted(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  if (n % 2 == 0) return 0.5 * (v[n / 2 - 1] + v[n / 2]);
  return v[n / 2];
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return median_sorted(v);
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Population standard deviation (divides by n).
inline double population_std(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

// Median absolute deviation about a given center.
inline double mad(const std::vector<double>& v, double center) {
  std::vector<double> dev(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) dev[i] = std::abs(v[i] - center);
  return median(std::move(dev));
}

}  // namespace mvlayout
