#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "sparsemix/distributions.hpp"
#include "sparsemix/model.hpp"

namespace sparsemix {

/// Observations stored one row per observation, contiguous; the layout the
/// per-observation loops of the sampler want.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Floor on b_j in the λ update: with ν₁ < K/2 the GIG needs b > 0.
inline constexpr double kLambdaRateFloor = 1e-12;

// ---------------------------------------------------------------------------
// 1(a) weights
// ---------------------------------------------------------------------------

inline void step_weights(MixtureState& st, RngStream& rng) {
  Vector e(st.K());
  for (int k = 0; k < st.K(); ++k) e(k) = st.e0 + st.counts[static_cast<std::size_t>(k)];
  st.log_eta = dirichlet_sample_log(e, rng);
  st.eta = st.log_eta.array().exp();
}

// ---------------------------------------------------------------------------
// 1(b) covariances: Σ_k⁻¹ ~ W(c0 + N_k/2, C0 + ½ Σ_{i:S_i=k} (y_i - μ_k)(y_i - μ_k)ᵀ)
// ---------------------------------------------------------------------------

inline std::vector<Matrix> scatter_about_means(const MixtureState& st, const RowMatrix& y) {
  const Eigen::Index r = st.r();
  std::vector<Matrix> scatter(static_cast<std::size_t>(st.K()), Matrix::Zero(r, r));
  Vector d(r);
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    const int k = st.S[static_cast<std::size_t>(i)];
    d = y.row(i).transpose() - st.mu.row(k).transpose();
    scatter[static_cast<std::size_t>(k)].selfadjointView<Eigen::Lower>().rankUpdate(d);
  }
  for (auto& s : scatter) s = s.selfadjointView<Eigen::Lower>();
  return scatter;
}

inline void step_covariances(MixtureState& st, const RowMatrix& y, const DataHyper& hyper, RngStream& rng) {
  const std::vector<Matrix> scatter = scatter_about_means(st, y);
  st.precision.resize(static_cast<std::size_t>(st.K()));
  for (int k = 0; k < st.K(); ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double shape = hyper.c0 + 0.5 * st.counts[ku];
    const SpdMatrix rate = cholesky(st.C0.matrix() + 0.5 * scatter[ku]);
    st.precision[ku] = wishart_sample(shape, rate, rng);
  }
}

// ---------------------------------------------------------------------------
// 1(c) means: μ_k ~ N(b_k, B_k), B_k = (B0⁻¹ + N_k Σ_k⁻¹)⁻¹,
//             b_k = B_k (B0⁻¹ b0 + Σ_k⁻¹ N_k ȳ_k)
// ---------------------------------------------------------------------------

struct MeanConditional {
  Vector mean;         // b_k
  SpdMatrix precision; // B_k⁻¹
  Matrix covariance() const { return precision.inverse(); }
};

/// `sum` is Σ_{i:S_i=k} y_i (so N_k ȳ_k); B0 is diagonal and passed by its diagonal.
inline MeanConditional mean_conditional(const Vector& b0_diag_var, const Vector& b0, const SpdMatrix& precision,
                                        int n, const Vector& sum) {
  const Vector b0_prec = b0_diag_var.cwiseInverse();
  Matrix p = static_cast<double>(n) * precision.matrix();
  p.diagonal() += b0_prec;
  MeanConditional mc{Vector(), cholesky(p)};
  const Vector h = b0_prec.cwiseProduct(b0) + precision.matrix() * sum;
  mc.mean = mc.precision.solve(h);
  return mc;
}

inline void step_means(MixtureState& st, const RowMatrix& y, const DataHyper& hyper, const PriorSpec& spec,
                       RngStream& rng) {
  const Eigen::Index r = st.r();
  Matrix sums = Matrix::Zero(st.K(), r);
  for (Eigen::Index i = 0; i < y.rows(); ++i) sums.row(st.S[static_cast<std::size_t>(i)]) += y.row(i);
  const Vector b0_var = prior_b0_variance(hyper, st, spec).matrix().diagonal();
  Vector z(r);
  for (int k = 0; k < st.K(); ++k) {
    const MeanConditional mc = mean_conditional(b0_var, st.b0, st.precision[static_cast<std::size_t>(k)],
                                                st.counts[static_cast<std::size_t>(k)], sums.row(k).transpose());
    for (Eigen::Index j = 0; j < r; ++j) z(j) = rng.normal();
    // Cov = P⁻¹ = L⁻ᵀ L⁻¹, so L⁻ᵀ z has the right covariance.
    st.mu.row(k) =
        (mc.mean + mc.precision.factor().transpose().triangularView<Eigen::Upper>().solve(z)).transpose();
  }
}

// ---------------------------------------------------------------------------
// 2(a) classification
// ---------------------------------------------------------------------------

/// Precomputed per-component terms for log(η_k f_N(y | μ_k, Σ_k)).
class AllocationKernel {
 public:
  explicit AllocationKernel(const MixtureState& st) : k_(st.K()), r_(static_cast<int>(st.r())) {
    const auto kr = static_cast<std::size_t>(k_) * static_cast<std::size_t>(r_);
    upper_.assign(kr * static_cast<std::size_t>(r_), 0.0);
    mu_.assign(kr, 0.0);
    offset_.assign(static_cast<std::size_t>(k_), 0.0);
    const double half_log_2pi = 0.5 * r_ * std::log(2.0 * std::numbers::pi);
    for (int k = 0; k < k_; ++k) {
      const Matrix& l = st.precision[static_cast<std::size_t>(k)].factor();
      double* u = &upper_[static_cast<std::size_t>(k) * r_ * r_];
      for (int a = 0; a < r_; ++a) {
        for (int b = a; b < r_; ++b) u[a * r_ + b] = l(b, a);  // Lᵀ, upper triangle
      }
      for (int j = 0; j < r_; ++j) mu_[static_cast<std::size_t>(k) * r_ + j] = st.mu(k, j);
      const double le = st.log_eta(k);
      offset_[static_cast<std::size_t>(k)] =
          std::isfinite(le) ? le + l.diagonal().array().log().sum() - half_log_2pi
                            : -std::numeric_limits<double>::infinity();
    }
  }

  /// Writes the K unnormalized log allocation weights of one observation.
  void logweights(const double* yi, double* out) const {
    double d[64];
    for (int k = 0; k < k_; ++k) {
      const double off = offset_[static_cast<std::size_t>(k)];
      if (!std::isfinite(off)) {
        out[k] = off;
        continue;
      }
      const double* m = &mu_[static_cast<std::size_t>(k) * r_];
      for (int j = 0; j < r_; ++j) d[j] = yi[j] - m[j];
      const double* u = &upper_[static_cast<std::size_t>(k) * r_ * r_];
      double q = 0.0;
      for (int a = 0; a < r_; ++a) {
        double s = 0.0;
        for (int b = a; b < r_; ++b) s += u[a * r_ + b] * d[b];
        q += s * s;
      }
      out[k] = off - 0.5 * q;
    }
  }

 private:
  int k_;
  int r_;
  std::vector<double> upper_;
  std::vector<double> mu_;
  std::vector<double> offset_;
};

inline void step_classify(MixtureState& st, const RowMatrix& y, RngStream& rng) {
  if (y.cols() > 64) fail(ErrorCode::InvalidArgument, "classification supports at most 64 dimensions");
  const AllocationKernel kernel(st);
  std::vector<double> lw(static_cast<std::size_t>(st.K()));
  st.S.resize(static_cast<std::size_t>(y.rows()));
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    kernel.logweights(y.row(i).data(), lw.data());
    st.S[static_cast<std::size_t>(i)] = static_cast<int>(categorical_from_logweights(lw, rng));
  }
  st.recount();
}

// ---------------------------------------------------------------------------
// 3(a) C0 ~ W(g0 + K c0, G0 + Σ_k Σ_k⁻¹)
// ---------------------------------------------------------------------------

inline void step_C0(MixtureState& st, const DataHyper& hyper, RngStream& rng) {
  Matrix rate = hyper.G0.matrix();
  for (const auto& p : st.precision) rate += p.matrix();
  st.C0 = wishart_sample(hyper.g0 + st.K() * hyper.c0, cholesky(rate), rng);
}

// ---------------------------------------------------------------------------
// 3(b) e0 | η by random-walk Metropolis–Hastings on log e0
// ---------------------------------------------------------------------------

/// log p(e0 | η) up to a constant: G(e0; a, aK) · Γ(K e0)/Γ(e0)^K · (Π η_k)^{e0-1}.
inline double e0_log_target(double e0, const Vector& log_eta, double a) {
  const double k = static_cast<double>(log_eta.size());
  return gamma_logpdf(e0, a, a * k) + std::lgamma(k * e0) - k * std::lgamma(e0) + (e0 - 1.0) * log_eta.sum();
}

/// Log acceptance ratio of moving from -> to under the log-scale proposal,
/// Jacobian included.
inline double e0_log_acceptance(double from, double to, const Vector& log_eta, double a) {
  return (e0_log_target(to, log_eta, a) + std::log(to)) - (e0_log_target(from, log_eta, a) + std::log(from));
}

/// Returns true when the proposal was accepted. No-op under a fixed e0.
inline bool step_e0_mh(MixtureState& st, const PriorSpec& spec, RngStream& rng) {
  const auto* g = std::get_if<GammaE0>(&spec.e0_policy);
  if (g == nullptr) return false;
  const double proposal = st.e0 * std::exp(spec.mh_step * rng.normal());
  const double log_ratio = e0_log_acceptance(st.e0, proposal, st.log_eta, g->a);
  if (std::log(rng.uniform()) < std::min(0.0, log_ratio)) {
    st.e0 = proposal;
    return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// 3(c)-(d) normal-gamma hyperparameters
// ---------------------------------------------------------------------------

struct GigParams {
  double p;
  double a;
  double b;
};

inline GigParams lambda_conditional(const MixtureState& st, const DataHyper& hyper, const NormalGammaPrior& ng,
                                    Eigen::Index j) {
  const double rj2 = hyper.range(j) * hyper.range(j);
  const double b = (st.mu.col(j).array() - st.b0(j)).square().sum() / rj2;
  return {ng.nu1 - 0.5 * st.K(), 2.0 * ng.nu2, std::max(b, kLambdaRateFloor)};
}

inline void step_lambda(MixtureState& st, const DataHyper& hyper, const PriorSpec& spec, RngStream& rng) {
  const auto* ng = std::get_if<NormalGammaPrior>(&spec.mean_prior);
  if (ng == nullptr) return;
  for (Eigen::Index j = 0; j < st.r(); ++j) {
    const GigParams g = lambda_conditional(st, hyper, *ng, j);
    st.lambda(j) = gig_sample(g.p, g.a, g.b, rng);
  }
}

/// b0 ~ N(mean of all K component means, B0 / K); flat prior on b0.
inline void step_b0(MixtureState& st, const DataHyper& hyper, const PriorSpec& spec, RngStream& rng) {
  if (!spec.normal_gamma()) return;
  const Vector center = st.mu.colwise().mean().transpose();
  const double k = static_cast<double>(st.K());
  for (Eigen::Index j = 0; j < st.r(); ++j) {
    const double sd = std::sqrt(hyper.range(j) * hyper.range(j) * st.lambda(j) / k);
    st.b0(j) = center(j) + sd * rng.normal();
  }
}

// ---------------------------------------------------------------------------
// 4 random permutation
// ---------------------------------------------------------------------------

inline std::vector<int> inverse_permutation(const std::vector<int>& rho) {
  std::vector<int> inv(rho.size());
  for (std::size_t k = 0; k < rho.size(); ++k) inv[static_cast<std::size_t>(rho[k])] = static_cast<int>(k);
  return inv;
}

/// New component k takes the parameters of old component rho[k]; allocations
/// follow their parameters (S_i <- rho⁻¹(S_i)).
inline void apply_permutation(MixtureState& st, const std::vector<int>& rho) {
  const int K = st.K();
  if (static_cast<int>(rho.size()) != K) fail(ErrorCode::InvalidArgument, "permutation size mismatch");
  const std::vector<int> inv = inverse_permutation(rho);
  const Vector eta = st.eta;
  const Vector log_eta = st.log_eta;
  const Matrix mu = st.mu;
  const std::vector<SpdMatrix> prec = st.precision;
  const std::vector<int> counts = st.counts;
  for (int k = 0; k < K; ++k) {
    const auto src = static_cast<std::size_t>(rho[static_cast<std::size_t>(k)]);
    st.eta(k) = eta(static_cast<Eigen::Index>(src));
    st.log_eta(k) = log_eta(static_cast<Eigen::Index>(src));
    st.mu.row(k) = mu.row(static_cast<Eigen::Index>(src));
    st.precision[static_cast<std::size_t>(k)] = prec[src];
    st.counts[static_cast<std::size_t>(k)] = counts[src];
  }
  for (int& s : st.S) s = inv[static_cast<std::size_t>(s)];
}

inline std::vector<int> step_permute(MixtureState& st, RngStream& rng) {
  std::vector<int> rho = random_permutation(st.K(), rng);
  apply_permutation(st, rho);
  return rho;
}

// ---------------------------------------------------------------------------
// One full sweep
// ---------------------------------------------------------------------------

struct SweepOptions {
  bool classify = true;
  bool permute = true;
};

/// Steps in the fixed order 1a, 1b, 1c, 2a, 3a, 3b, 3c, 3d, 4. Returns
/// whether the e0 proposal (if any) was accepted.
inline bool gibbs_sweep(MixtureState& st, const RowMatrix& y, const DataHyper& hyper, const PriorSpec& spec,
                        RngStream& rng, SweepOptions opts = {}) {
  step_weights(st, rng);
  step_covariances(st, y, hyper, rng);
  step_means(st, y, hyper, spec, rng);
  if (opts.classify) step_classify(st, y, rng);
  step_C0(st, hyper, rng);
  const bool accepted = step_e0_mh(st, spec, rng);
  step_lambda(st, hyper, spec, rng);
  step_b0(st, hyper, spec, rng);
  if (opts.permute) step_permute(st, rng);
  return accepted;
}

}  // namespace sparsemix
