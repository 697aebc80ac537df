#pragma once

#include <limits>
#include <vector>

#include "sparsemix/errors.hpp"
#include "sparsemix/linalg.hpp"
#include "sparsemix/rng.hpp"

namespace sparsemix {

struct KMeansResult {
  Matrix centers;               // k × d
  std::vector<int> assignment;  // row -> cluster, 0-based
  double objective = 0.0;       // sum of squared Euclidean distances
  int iterations = 0;
};

namespace detail {

inline double sq_dist(const Matrix& x, Eigen::Index i, const Matrix& centers, Eigen::Index k) {
  return (x.row(i) - centers.row(k)).squaredNorm();
}

inline Matrix kmeanspp_seed(const Matrix& x, int k, RngStream& rng) {
  const Eigen::Index n = x.rows();
  Matrix centers(k, x.cols());
  centers.row(0) = x.row(static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n))));
  Vector d2(n);
  for (Eigen::Index i = 0; i < n; ++i) d2(i) = sq_dist(x, i, centers, 0);
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = n - 1;
    if (total > 0.0) {
      double u = rng.uniform() * total;
      for (Eigen::Index i = 0; i < n; ++i) {
        u -= d2(i);
        if (u <= 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = x.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) d2(i) = std::min(d2(i), sq_dist(x, i, centers, c));
  }
  return centers;
}

inline KMeansResult lloyd(const Matrix& x, Matrix centers, int max_iter) {
  const Eigen::Index n = x.rows();
  const auto k = static_cast<int>(centers.rows());
  KMeansResult res;
  res.assignment.assign(static_cast<std::size_t>(n), -1);
  Vector best(n);
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int arg = 0;
      double dmin = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = sq_dist(x, i, centers, c);
        if (d < dmin) {
          dmin = d;
          arg = c;
        }
      }
      best(i) = dmin;
      if (res.assignment[static_cast<std::size_t>(i)] != arg) {
        res.assignment[static_cast<std::size_t>(i)] = arg;
        changed = true;
      }
    }
    res.iterations = it + 1;
    if (!changed && it > 0) break;

    Matrix sums = Matrix::Zero(k, x.cols());
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = res.assignment[static_cast<std::size_t>(i)];
      sums.row(c) += x.row(i);
      ++sizes[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c) {
      if (sizes[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / sizes[static_cast<std::size_t>(c)];
      } else {
        // Empty cluster: move it onto the worst-fitted point.
        Eigen::Index far = 0;
        best.maxCoeff(&far);
        centers.row(c) = x.row(far);
        best(far) = 0.0;
      }
    }
  }
  res.objective = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    res.objective += sq_dist(x, i, centers, res.assignment[static_cast<std::size_t>(i)]);
  }
  res.centers = std::move(centers);
  return res;
}

}  // namespace detail

/// Lloyd's algorithm with k-means++ seeding; the best of `restarts` runs by
/// objective is kept (first one wins ties).
inline KMeansResult kmeans(const Matrix& x, int k, RngStream& rng, int restarts = 10,
                           int max_iter = 100) {
  if (k < 1 || k > x.rows()) fail(ErrorCode::InvalidArgument, "kmeans needs 1 <= k <= rows");
  KMeansResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    KMeansResult res = detail::lloyd(x, detail::kmeanspp_seed(x, k, rng), max_iter);
    if (res.objective < best.objective) best = std::move(res);
  }
  return best;
}

}  // namespace sparsemix
