#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sparsemix/errors.hpp"
#include "sparsemix/linalg.hpp"

namespace sparsemix {

// ---------------------------------------------------------------------------
// Data
// ---------------------------------------------------------------------------

struct Dataset {
  Matrix y;                               // N × r observations, one per row
  std::optional<std::vector<int>> labels; // true grouping, if known
  std::vector<std::string> columns;       // feature names (may be empty)
  std::string name;

  Eigen::Index n() const noexcept { return y.rows(); }
  Eigen::Index r() const noexcept { return y.cols(); }

  void validate() const {
    if (y.rows() < 1 || y.cols() < 1) fail(ErrorCode::InvalidArgument, "dataset must be at least 1x1");
    if (!y.allFinite()) fail(ErrorCode::InvalidArgument, "dataset has missing or non-finite entries");
    if (labels && labels->size() != static_cast<std::size_t>(y.rows())) {
      fail(ErrorCode::InvalidArgument, "label count does not match row count");
    }
  }
};

/// Data-dependent hyperparameters shared by both mean priors.
struct DataHyper {
  Vector median;  // initial b0 and m0
  Vector range;   // R_j = max - min of column j
  SpdMatrix R0;   // Diag(R_1², ..., R_r²)
  double c0 = 0.0;
  double g0 = 0.0;
  SpdMatrix G0;   // (100 g0 / c0) Diag(1/R_1², ..., 1/R_r²)

  Eigen::Index r() const noexcept { return median.size(); }
};

inline double column_median(std::vector<double> v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline DataHyper derive_hyper(const Dataset& data) {
  data.validate();
  const Eigen::Index r = data.r();
  DataHyper h;
  h.median.resize(r);
  h.range.resize(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    std::vector<double> col(data.y.col(j).data(), data.y.col(j).data() + data.n());
    h.median(j) = column_median(col);
    h.range(j) = data.y.col(j).maxCoeff() - data.y.col(j).minCoeff();
    if (!(h.range(j) > 0.0)) {
      fail(ErrorCode::ZeroRangeColumn, "column " + std::to_string(j + 1) + " has zero range");
    }
  }
  const double rd = static_cast<double>(r);
  h.c0 = 2.5 + (rd - 1.0) / 2.0;
  h.g0 = 0.5 + (rd - 1.0) / 2.0;
  h.R0 = SpdMatrix::diagonal(h.range.array().square().matrix());
  h.G0 = SpdMatrix::diagonal(((100.0 * h.g0 / h.c0) / h.range.array().square()).matrix());
  return h;
}

// ---------------------------------------------------------------------------
// Prior specification
// ---------------------------------------------------------------------------

/// μ_k ~ N(b0, R0) with b0 fixed at the data median.
struct StandardPrior {};

/// μ_k | λ, b0 ~ N(b0, Λ R0 Λ), λ_j ~ G(ν₁, ν₂), flat prior on b0.
struct NormalGammaPrior {
  double nu1 = 0.5;
  double nu2 = 0.5;
};

using MeanPrior = std::variant<StandardPrior, NormalGammaPrior>;

struct FixedE0 {
  double value = 0.01;
};

/// e0 ~ G(a, a·K), so that E[e0] = 1/K.
struct GammaE0 {
  double a = 10.0;
};

using E0Policy = std::variant<FixedE0, GammaE0>;

struct PriorSpec {
  int K = 15;
  MeanPrior mean_prior = StandardPrior{};
  E0Policy e0_policy = GammaE0{};
  double mh_step = 0.5;  // s.d. of the log-scale random walk on e0

  bool normal_gamma() const noexcept { return std::holds_alternative<NormalGammaPrior>(mean_prior); }
  bool random_e0() const noexcept { return std::holds_alternative<GammaE0>(e0_policy); }

  void validate() const {
    if (K < 1) fail(ErrorCode::InvalidArgument, "K must be >= 1");
    if (!(mh_step > 0.0)) fail(ErrorCode::NonPositiveParameter, "mh_step must be positive");
    if (const auto* ng = std::get_if<NormalGammaPrior>(&mean_prior)) {
      if (!(ng->nu1 > 0.0) || !(ng->nu2 > 0.0)) fail(ErrorCode::NonPositiveParameter, "nu1, nu2 must be positive");
    }
    if (const auto* f = std::get_if<FixedE0>(&e0_policy)) {
      if (!(f->value > 0.0)) fail(ErrorCode::NonPositiveParameter, "fixed e0 must be positive");
    } else if (!(std::get<GammaE0>(e0_policy).a > 0.0)) {
      fail(ErrorCode::NonPositiveParameter, "e0 hyperprior a must be positive");
    }
  }
};

// ---------------------------------------------------------------------------
// Sampler state
// ---------------------------------------------------------------------------

/// One full Gibbs state. Component covariances are held as precisions
/// (Σ_k⁻¹), the quantity the conditionals and the classification step use;
/// covariance(k) inverts on demand.
struct MixtureState {
  Vector eta;                       // weights on the simplex
  Vector log_eta;                   // log weights (finite even where eta underflows)
  Matrix mu;                        // K × r component means
  std::vector<SpdMatrix> precision; // Σ_k⁻¹
  std::vector<int> S;               // allocations, 0-based component index
  std::vector<int> counts;          // N_k
  Vector b0;
  Vector lambda;                    // all ones under the standard prior
  SpdMatrix C0;
  double e0 = 0.0;

  int K() const noexcept { return static_cast<int>(mu.rows()); }
  Eigen::Index r() const noexcept { return mu.cols(); }

  SpdMatrix covariance(int k) const { return cholesky(precision[static_cast<std::size_t>(k)].inverse()); }

  void recount() {
    counts.assign(static_cast<std::size_t>(K()), 0);
    for (int s : S) ++counts[static_cast<std::size_t>(s)];
  }

  int nonempty() const {
    return static_cast<int>(std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }));
  }

  /// Checks the support constraints; throws InvalidState on violation.
  void validate() const {
    const int k = K();
    if (eta.size() != k || log_eta.size() != k || static_cast<int>(precision.size()) != k ||
        static_cast<int>(counts.size()) != k) {
      fail(ErrorCode::InvalidState, "component count mismatch");
    }
    if ((eta.array() < 0.0).any() || std::abs(eta.sum() - 1.0) > 1e-10) {
      fail(ErrorCode::InvalidState, "weights are not on the simplex");
    }
    for (const auto& p : precision) {
      if (p.dim() != r() || (p.factor().diagonal().array() <= 0.0).any()) {
        fail(ErrorCode::InvalidState, "precision is not SPD");
      }
    }
    if ((lambda.array() <= 0.0).any() || !lambda.allFinite()) fail(ErrorCode::InvalidState, "lambda must be positive");
    if (!(e0 > 0.0)) fail(ErrorCode::InvalidState, "e0 must be positive");
    long total = 0;
    std::vector<int> check(static_cast<std::size_t>(k), 0);
    for (int s : S) {
      if (s < 0 || s >= k) fail(ErrorCode::InvalidState, "allocation out of range");
      ++check[static_cast<std::size_t>(s)];
    }
    for (int c : counts) total += c;
    if (check != counts || total != static_cast<long>(S.size())) {
      fail(ErrorCode::InvalidState, "counts inconsistent with allocations");
    }
    if (!mu.allFinite() || !b0.allFinite()) fail(ErrorCode::InvalidState, "non-finite means");
  }
};

/// Prior covariance of the component means: R0 under the standard prior,
/// Diag(R_j² λ_j) under the normal-gamma prior.
inline SpdMatrix prior_b0_variance(const DataHyper& hyper, const MixtureState& state, const PriorSpec& spec) {
  if (!spec.normal_gamma()) return hyper.R0;
  return SpdMatrix::diagonal((hyper.range.array().square() * state.lambda.array()).matrix());
}

}  // namespace sparsemix
