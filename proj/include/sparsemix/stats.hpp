#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sparsemix/errors.hpp"

namespace sparsemix {

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman–Fan type 7, R's default). Sorts its argument.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) fail(ErrorCode::InvalidArgument, "quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, p);
}

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) fail(ErrorCode::InvalidArgument, "mean of an empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace sparsemix
