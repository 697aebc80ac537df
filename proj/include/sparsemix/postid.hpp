#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sparsemix/kmeans.hpp"
#include "sparsemix/sampler.hpp"
#include "sparsemix/stats.hpp"

namespace sparsemix {

// ---------------------------------------------------------------------------
// K̂₀
// ---------------------------------------------------------------------------

struct KPosterior {
  std::vector<int> histogram;  // histogram[h] = #iterations with K₀ = h, h = 0..K (h = 0 is always 0)
  int k0_hat = 0;
  int m0 = 0;                  // histogram[k0_hat]

  int K() const noexcept { return static_cast<int>(histogram.size()) - 1; }
};

/// Mode of the K₀ sequence; ties go to the smallest h.
inline KPosterior estimate_K0(std::span<const int> k0, int K) {
  if (k0.empty()) fail(ErrorCode::NoRetainedIterations, "empty K0 sequence");
  KPosterior kp;
  kp.histogram.assign(static_cast<std::size_t>(K) + 1, 0);
  for (int h : k0) {
    if (h < 1 || h > K) fail(ErrorCode::InvalidArgument, "K0 value out of range");
    ++kp.histogram[static_cast<std::size_t>(h)];
  }
  for (int h = 1; h <= K; ++h) {
    if (kp.histogram[static_cast<std::size_t>(h)] > kp.m0) {
      kp.m0 = kp.histogram[static_cast<std::size_t>(h)];
      kp.k0_hat = h;
    }
  }
  return kp;
}

inline KPosterior estimate_K0(const ChainArchive& ar) {
  return estimate_K0(std::span<const int>(ar.k0.data(), static_cast<std::size_t>(ar.k0.size())), ar.K);
}

// ---------------------------------------------------------------------------
// Point process
// ---------------------------------------------------------------------------

struct DrawRef {
  int iteration;  // archive row
  int component;  // original component index
};

/// Mean draws of the non-empty components of every iteration with exactly
/// K̂₀ non-empty components. Rows come in blocks of K̂₀ per iteration, in
/// ascending original component order.
struct PointProcess {
  Matrix points;
  std::vector<DrawRef> provenance;
  int k0_hat = 0;
  int m0 = 0;
};

inline PointProcess assemble_point_process(const ChainArchive& ar, const KPosterior& kp) {
  if (kp.m0 < 1 || kp.k0_hat < 1) fail(ErrorCode::NoRetainedIterations, "no iteration has K0-hat non-empty components");
  PointProcess pp;
  pp.k0_hat = kp.k0_hat;
  pp.m0 = kp.m0;
  pp.points.resize(static_cast<Eigen::Index>(kp.k0_hat) * kp.m0, ar.r);
  pp.provenance.reserve(static_cast<std::size_t>(pp.points.rows()));
  Eigen::Index row = 0;
  for (int m = 0; m < ar.M(); ++m) {
    if (ar.k0(m) != kp.k0_hat) continue;
    for (int k = 0; k < ar.K; ++k) {
      if (ar.counts(m, k) == 0) continue;
      pp.points.row(row++) = ar.mu_at(m, k).transpose();
      pp.provenance.push_back({m, k});
    }
  }
  if (row != pp.points.rows()) fail(ErrorCode::InvalidState, "K0 record inconsistent with counts");
  return pp;
}

// ---------------------------------------------------------------------------
// K-centroids
// ---------------------------------------------------------------------------

enum class Distance { Mahalanobis, Euclidean };

inline const char* to_string(Distance d) { return d == Distance::Mahalanobis ? "mahalanobis" : "euclidean"; }

inline Distance distance_from_string(const std::string& s) {
  if (s == "mahalanobis") return Distance::Mahalanobis;
  if (s == "euclidean") return Distance::Euclidean;
  fail(ErrorCode::InvalidArgument, "unknown distance '" + s + "' (expected mahalanobis|euclidean)");
}

struct KCentroidsOptions {
  int restarts = 5;
  int max_iter = 100;
  bool monotone = true;  // see detail::mahalanobis_run
};

struct CentroidSet {
  Distance distance = Distance::Mahalanobis;
  Matrix centers;                     // K × r
  std::vector<SpdMatrix> dispersions; // S_k (identity for Euclidean)
  std::vector<int> assignment;        // row -> cluster, 0-based
  double objective = 0.0;             // Σ_i d(x_i, c_{S(i)}) under the final assignment
  int iterations = 0;
  std::vector<double> trace;          // objective after each assignment pass (see kcentroids_*)

  int K() const noexcept { return static_cast<int>(centers.rows()); }
};

namespace detail {

inline double centroid_distance(const Matrix& x, Eigen::Index i, const Matrix& centers, int k, const SpdMatrix& s) {
  const Vector d = (x.row(i) - centers.row(k)).transpose();
  return std::sqrt(s.inv_quad(d));
}

/// Within-cluster covariance (divisor n - 1) with ridge 1e-8·tr/r.
inline SpdMatrix cluster_dispersion(const Matrix& x, const std::vector<int>& assign, int k, const Vector& mean) {
  const Eigen::Index r = x.cols();
  Matrix s = Matrix::Zero(r, r);
  int n = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (assign[static_cast<std::size_t>(i)] != k) continue;
    const Vector d = x.row(i).transpose() - mean;
    s.selfadjointView<Eigen::Lower>().rankUpdate(d);
    ++n;
  }
  s = s.selfadjointView<Eigen::Lower>();
  if (n > 1) s /= static_cast<double>(n - 1);
  const double tr = s.trace();
  const double ridge = tr > 0.0 ? 1e-8 * tr / static_cast<double>(r) : 1e-8;
  s.diagonal().array() += ridge;
  return cholesky(s);
}

inline Vector cluster_mean(const Matrix& x, const std::vector<int>& assign, int k) {
  Vector sum = Vector::Zero(x.cols());
  int n = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (assign[static_cast<std::size_t>(i)] != k) continue;
    sum += x.row(i).transpose();
    ++n;
  }
  return n > 0 ? Vector(sum / n) : sum;
}

inline double cluster_cost(const Matrix& x, const std::vector<int>& assign, int k, const Matrix& centers,
                           const SpdMatrix& s) {
  double c = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (assign[static_cast<std::size_t>(i)] == k) c += centroid_distance(x, i, centers, k, s);
  }
  return c;
}

/// Nearest-centroid pass; ties go to the lowest index. Returns Σ distances
/// and whether any assignment changed.
inline double assign_rows(const Matrix& x, const Matrix& centers, const std::vector<SpdMatrix>& disp,
                          std::vector<int>& assign, bool& changed) {
  changed = false;
  double total = 0.0;
  const int K = static_cast<int>(centers.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    int best = 0;
    double dmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      const double d = centroid_distance(x, i, centers, k, disp[static_cast<std::size_t>(k)]);
      if (d < dmin) {
        dmin = d;
        best = k;
      }
    }
    total += dmin;
    if (assign[static_cast<std::size_t>(i)] != best) {
      assign[static_cast<std::size_t>(i)] = best;
      changed = true;
    }
  }
  return total;
}

inline std::vector<int> cluster_sizes(const std::vector<int>& assign, int K) {
  std::vector<int> n(static_cast<std::size_t>(K), 0);
  for (int a : assign) ++n[static_cast<std::size_t>(a)];
  return n;
}

/// One Mahalanobis K-centroids run from a k-means start.
///
/// Step (ii) moves c_k to the within-cluster mean and S_k to the
/// within-cluster covariance. That update does not minimize the objective (the
/// objective falls as S_k grows), so on its own it can raise the objective.
/// With `monotone`, an S_k that would raise cluster k's share is inflated by
/// the smallest factor that keeps the share at its previous value; the shape
/// of the covariance is kept and the objective is non-increasing.
inline CentroidSet mahalanobis_run(const Matrix& x, int K, RngStream& rng, const KCentroidsOptions& opts) {
  const Eigen::Index r = x.cols();
  const KMeansResult km = kmeans(x, K, rng, 1, opts.max_iter);
  CentroidSet cs;
  cs.distance = Distance::Mahalanobis;
  cs.centers = km.centers;
  cs.assignment = km.assignment;
  {
    const std::vector<int> n = cluster_sizes(cs.assignment, K);
    for (int k = 0; k < K; ++k) {
      if (n[static_cast<std::size_t>(k)] < r + 1) fail(ErrorCode::DegenerateCluster, "k-means start has a cluster below r+1 rows");
      cs.dispersions.push_back(cluster_dispersion(x, cs.assignment, k, cs.centers.row(k).transpose()));
    }
  }

  bool reseeded = false;
  for (int it = 0;; ++it) {
    bool changed = false;
    const double obj = assign_rows(x, cs.centers, cs.dispersions, cs.assignment, changed);
    cs.trace.push_back(obj);
    cs.iterations = it + 1;
    if (!changed || it + 1 >= opts.max_iter) break;

    const std::vector<int> n = cluster_sizes(cs.assignment, K);
    int small = -1;
    for (int k = 0; k < K; ++k) {
      if (n[static_cast<std::size_t>(k)] < r + 1) small = k;
    }
    if (small >= 0) {
      if (reseeded) fail(ErrorCode::DegenerateCluster, "cluster " + std::to_string(small) + " fell below r+1 rows twice");
      reseeded = true;
      // Move the emptied cluster onto the row farthest from its own centroid.
      Eigen::Index far = 0;
      double dmax = -1.0;
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const int a = cs.assignment[static_cast<std::size_t>(i)];
        if (n[static_cast<std::size_t>(a)] < r + 2) continue;
        const double d = centroid_distance(x, i, cs.centers, a, cs.dispersions[static_cast<std::size_t>(a)]);
        if (d > dmax) {
          dmax = d;
          far = i;
        }
      }
      cs.centers.row(small) = x.row(far);
      Matrix avg = Matrix::Zero(r, r);
      for (int k = 0; k < K; ++k) {
        if (k != small) avg += cs.dispersions[static_cast<std::size_t>(k)].matrix();
      }
      cs.dispersions[static_cast<std::size_t>(small)] = cholesky(K > 1 ? Matrix(avg / (K - 1)) : Matrix::Identity(r, r));
      cs.trace.pop_back();  // the assignment has to be redone under the new centroid
      continue;
    }

    for (int k = 0; k < K; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      Matrix cand_center = cs.centers;
      cand_center.row(k) = cluster_mean(x, cs.assignment, k).transpose();
      const SpdMatrix cand_disp = cluster_dispersion(x, cs.assignment, k, cand_center.row(k).transpose());
      const double before = cluster_cost(x, cs.assignment, k, cs.centers, cs.dispersions[ku]);
      const double after = cluster_cost(x, cs.assignment, k, cand_center, cand_disp);
      cs.centers.row(k) = cand_center.row(k);
      if (!opts.monotone || after <= before) {
        cs.dispersions[ku] = cand_disp;
      } else {
        // Cost scales as α^{-1/2} under S -> αS.
        const double alpha = (after / before) * (after / before) * (1.0 + 1e-12);
        cs.dispersions[ku] = cholesky(alpha * cand_disp.matrix());
      }
    }
  }
  cs.objective = cs.trace.back();
  return cs;
}

}  // namespace detail

/// Summed Mahalanobis distance of a centroid set under its own assignment.
inline double kcentroids_objective(const Matrix& x, const CentroidSet& cs) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int k = cs.assignment[static_cast<std::size_t>(i)];
    total += detail::centroid_distance(x, i, cs.centers, k, cs.dispersions[static_cast<std::size_t>(k)]);
  }
  return total;
}

/// Best of `restarts` runs by objective. `trace` holds the objective after every
/// assignment pass and is non-increasing.
inline CentroidSet kcentroids_mahalanobis(const Matrix& x, int K, RngStream& rng, const KCentroidsOptions& opts = {}) {
  const Eigen::Index r = x.cols();
  if (K < 1) fail(ErrorCode::InvalidArgument, "K must be >= 1");
  if (x.rows() < static_cast<Eigen::Index>(K) * (r + 1)) {
    fail(ErrorCode::InvalidArgument, "need at least K·(r+1) rows for K-centroids");
  }
  CentroidSet best;
  best.objective = std::numeric_limits<double>::infinity();
  std::string last_error;
  for (int rs = 0; rs < std::max(1, opts.restarts); ++rs) {
    try {
      CentroidSet cs = detail::mahalanobis_run(x, K, rng, opts);
      if (cs.objective < best.objective) best = std::move(cs);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateCluster) throw;
      last_error = e.detail();
    }
  }
  if (!std::isfinite(best.objective)) fail(ErrorCode::DegenerateCluster, "every restart failed: " + last_error);
  return best;
}

/// Lloyd's algorithm with every S_k fixed to the identity. `trace` holds the
/// within-cluster sum of squares (the quantity Lloyd descends) after every
/// assignment pass; `objective` is the Mahalanobis objective with S = I.
inline CentroidSet kcentroids_euclidean(const Matrix& x, int K, RngStream& rng, const KCentroidsOptions& opts = {}) {
  if (K < 1 || K > x.rows()) fail(ErrorCode::InvalidArgument, "need 1 <= K <= rows");
  const Eigen::Index r = x.cols();
  CentroidSet best;
  best.objective = std::numeric_limits<double>::infinity();
  double best_wcss = std::numeric_limits<double>::infinity();
  for (int rs = 0; rs < std::max(1, opts.restarts); ++rs) {
    CentroidSet cs;
    cs.distance = Distance::Euclidean;
    cs.centers = detail::kmeanspp_seed(x, K, rng);
    cs.dispersions.assign(static_cast<std::size_t>(K), SpdMatrix::identity(r));
    cs.assignment.assign(static_cast<std::size_t>(x.rows()), -1);
    for (int it = 0;; ++it) {
      bool changed = false;
      detail::assign_rows(x, cs.centers, cs.dispersions, cs.assignment, changed);
      double wcss = 0.0;
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        wcss += (x.row(i) - cs.centers.row(cs.assignment[static_cast<std::size_t>(i)])).squaredNorm();
      }
      cs.trace.push_back(wcss);
      cs.iterations = it + 1;
      if (!changed || it + 1 >= opts.max_iter) break;
      const std::vector<int> n = detail::cluster_sizes(cs.assignment, K);
      for (int k = 0; k < K; ++k) {
        if (n[static_cast<std::size_t>(k)] > 0) cs.centers.row(k) = detail::cluster_mean(x, cs.assignment, k).transpose();
      }
    }
    cs.objective = kcentroids_objective(x, cs);
    if (cs.trace.back() < best_wcss) {
      best_wcss = cs.trace.back();
      best = std::move(cs);
    }
  }
  return best;
}

inline CentroidSet kcentroids(const Matrix& x, int K, Distance distance, RngStream& rng,
                              const KCentroidsOptions& opts = {}) {
  return distance == Distance::Mahalanobis ? kcentroids_mahalanobis(x, K, rng, opts)
                                           : kcentroids_euclidean(x, K, rng, opts);
}

// ---------------------------------------------------------------------------
// Relabeling
// ---------------------------------------------------------------------------

struct PermutationLogEntry {
  int iteration;         // archive row
  std::vector<int> rho;  // cluster label (0-based) of each non-empty component, ascending k
  bool kept;             // rho is a permutation of 0..K̂₀-1
};

/// Draws of the K̂₀ identified components. Row t is archive row iterations[t];
/// label ℓ of that row is original component origin(t, ℓ).
struct IdentifiedDraws {
  int K = 0;
  int r = 0;
  int N = 0;
  int k0_hat = 0;
  int m0 = 0;
  double m0_rho = 0.0;                 // non-permutation rate
  std::vector<int> iterations;
  Eigen::MatrixXi origin;              // M̃ × K̂₀
  Matrix mu;                           // M̃ × (K̂₀·r), column ℓ·r + j
  Matrix eta;                          // M̃ × K̂₀
  Matrix sigma;                        // M̃ × (K̂₀·r·r) when stored
  AllocationMatrix allocations;        // M̃ × N, labels 0..K̂₀-1, when stored
  std::vector<PermutationLogEntry> log;

  // Carried from the archive for reporting.
  PriorSpec spec;
  std::string distance;
  Matrix lambda;                       // M × r, every archived iteration
  Vector e0;                           // M
  double e0_acceptance = std::numeric_limits<double>::quiet_NaN();

  int retained() const noexcept { return static_cast<int>(iterations.size()); }
  bool has_sigma() const noexcept { return sigma.size() > 0; }
  bool has_allocations() const noexcept { return allocations.size() > 0; }
  Vector mu_at(int t, int l) const { return mu.row(t).segment(static_cast<Eigen::Index>(l) * r, r).transpose(); }
};

inline bool is_permutation_of_range(const std::vector<int>& rho) {
  std::vector<char> seen(rho.size(), 0);
  for (int v : rho) {
    if (v < 0 || v >= static_cast<int>(rho.size()) || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = 1;
  }
  return true;
}

inline IdentifiedDraws relabel(const ChainArchive& ar, const PointProcess& pp, const CentroidSet& cs) {
  const int k0 = pp.k0_hat;
  if (cs.assignment.size() != static_cast<std::size_t>(pp.points.rows())) {
    fail(ErrorCode::InvalidArgument, "centroid assignment does not cover the point process");
  }
  if (cs.K() != k0) fail(ErrorCode::InvalidArgument, "centroid count differs from K0-hat");
  IdentifiedDraws id;
  id.K = ar.K;
  id.r = ar.r;
  id.N = ar.N;
  id.k0_hat = k0;
  id.m0 = pp.m0;
  id.spec = ar.spec;
  id.distance = to_string(cs.distance);
  id.lambda = ar.lambda;
  id.e0 = ar.e0;
  id.e0_acceptance = ar.e0_acceptance;

  std::vector<int> kept_rows;
  for (int b = 0; b < pp.m0; ++b) {
    PermutationLogEntry entry;
    entry.iteration = pp.provenance[static_cast<std::size_t>(b) * k0].iteration;
    for (int pos = 0; pos < k0; ++pos) entry.rho.push_back(cs.assignment[static_cast<std::size_t>(b) * k0 + pos]);
    entry.kept = is_permutation_of_range(entry.rho);
    if (entry.kept) kept_rows.push_back(b);
    id.log.push_back(std::move(entry));
  }
  id.m0_rho = 1.0 - static_cast<double>(kept_rows.size()) / pp.m0;

  const auto mt = static_cast<Eigen::Index>(kept_rows.size());
  const int rr = ar.r * ar.r;
  id.origin.resize(mt, k0);
  id.mu.resize(mt, static_cast<Eigen::Index>(k0) * ar.r);
  id.eta.resize(mt, k0);
  if (ar.has_sigma()) id.sigma.resize(mt, static_cast<Eigen::Index>(k0) * rr);
  if (ar.has_allocations()) id.allocations.resize(mt, ar.N);
  std::vector<int> label_of(static_cast<std::size_t>(ar.K));
  for (Eigen::Index t = 0; t < mt; ++t) {
    const int b = kept_rows[static_cast<std::size_t>(t)];
    const PermutationLogEntry& entry = id.log[static_cast<std::size_t>(b)];
    const int m = entry.iteration;
    id.iterations.push_back(m);
    std::fill(label_of.begin(), label_of.end(), -1);
    for (int pos = 0; pos < k0; ++pos) {
      const int k = pp.provenance[static_cast<std::size_t>(b) * k0 + pos].component;
      const int l = entry.rho[static_cast<std::size_t>(pos)];
      label_of[static_cast<std::size_t>(k)] = l;
      id.origin(t, l) = k;
      for (int j = 0; j < ar.r; ++j) id.mu(t, l * ar.r + j) = ar.mu(m, k * ar.r + j);
      id.eta(t, l) = ar.eta(m, k);
      if (ar.has_sigma()) {
        for (int c = 0; c < rr; ++c) id.sigma(t, l * rr + c) = ar.sigma(m, k * rr + c);
      }
    }
    if (ar.has_allocations()) {
      for (int i = 0; i < ar.N; ++i) {
        const int l = label_of[ar.allocations(m, i)];
        if (l < 0) fail(ErrorCode::InvalidState, "allocation to an empty component");
        id.allocations(t, i) = static_cast<std::uint16_t>(l);
      }
    }
  }
  return id;
}

struct IdentifyResult {
  KPosterior kpost;
  PointProcess points;
  CentroidSet centroids;
  IdentifiedDraws draws;
};

/// Full identification pipeline; deterministic in (archive, seed).
inline IdentifyResult identify(const ChainArchive& ar, Distance distance, std::uint64_t seed,
                               const KCentroidsOptions& opts = {}) {
  IdentifyResult res;
  res.kpost = estimate_K0(ar);
  res.points = assemble_point_process(ar, res.kpost);
  RngStream rng(seed, 1);
  res.centroids = kcentroids(res.points.points, res.kpost.k0_hat, distance, rng, opts);
  res.draws = relabel(ar, res.points, res.centroids);
  return res;
}

// ---------------------------------------------------------------------------
// Summaries
// ---------------------------------------------------------------------------

struct ParameterSummary {
  std::string name;  // e.g. "mu[2,1]", "eta[3]", "sigma[1,2,2]" (1-based)
  int component;     // 1-based identified label
  double mean;
  double q025;
  double q50;
  double q975;
};

inline ParameterSummary summarize(std::string name, int component, std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return {std::move(name), component, mean_of(v), quantile_sorted(v, 0.025), quantile_sorted(v, 0.5),
          quantile_sorted(v, 0.975)};
}

inline std::vector<ParameterSummary> identified_summaries(const IdentifiedDraws& id) {
  const int mt = id.retained();
  if (mt == 0) fail(ErrorCode::NoIdentifiedDraws, "no iteration could be relabeled");
  std::vector<ParameterSummary> out;
  std::vector<double> v(static_cast<std::size_t>(mt));
  auto column = [&](const Matrix& table, Eigen::Index c) {
    for (int t = 0; t < mt; ++t) v[static_cast<std::size_t>(t)] = table(t, c);
    return v;
  };
  const int rr = id.r * id.r;
  for (int l = 0; l < id.k0_hat; ++l) {
    const std::string tag = std::to_string(l + 1);
    out.push_back(summarize("eta[" + tag + "]", l + 1, column(id.eta, l)));
    for (int j = 0; j < id.r; ++j) {
      out.push_back(summarize("mu[" + tag + "," + std::to_string(j + 1) + "]", l + 1, column(id.mu, l * id.r + j)));
    }
    if (id.has_sigma()) {
      for (int c = 0; c < rr; ++c) {
        const int a = c % id.r;
        const int b = c / id.r;
        if (a < b) continue;  // lower triangle suffices
        out.push_back(summarize("sigma[" + tag + "," + std::to_string(a + 1) + "," + std::to_string(b + 1) + "]",
                                l + 1, column(id.sigma, l * rr + c)));
      }
    }
  }
  return out;
}

/// Posterior mean of each identified component mean, K̂₀ × r.
inline Matrix identified_mu_means(const IdentifiedDraws& id) {
  if (id.retained() == 0) fail(ErrorCode::NoIdentifiedDraws, "no iteration could be relabeled");
  const Vector m = id.mu.colwise().mean().transpose();
  Matrix out(id.k0_hat, id.r);
  for (int l = 0; l < id.k0_hat; ++l) out.row(l) = m.segment(static_cast<Eigen::Index>(l) * id.r, id.r).transpose();
  return out;
}

}  // namespace sparsemix
