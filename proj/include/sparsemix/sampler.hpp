#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>

#include "sparsemix/init.hpp"
#include "sparsemix/steps.hpp"

namespace sparsemix {

struct ChainConfig {
  int burn_in = 2000;
  int iterations = 10000;  // M, the number of stored draws
  bool store_sigma = false;
  bool store_allocations = false;
  std::uint64_t seed = 1;

  void validate() const {
    if (burn_in < 0) fail(ErrorCode::InvalidArgument, "burn_in must be >= 0");
    if (iterations < 1) fail(ErrorCode::InvalidArgument, "iterations must be >= 1");
  }
};

using AllocationMatrix = Eigen::Matrix<std::uint16_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Post-burn-in draws. Row m of every table is stored iteration m.
struct ChainArchive {
  PriorSpec spec;
  DataHyper hyper;
  ChainConfig config;
  std::string dataset_name;
  int K = 0;
  int r = 0;
  int N = 0;

  Matrix eta;                   // M × K
  Matrix mu;                    // M × (K·r); column k·r + j holds μ_kj
  Matrix lambda;                // M × r
  Vector e0;                    // M
  Eigen::MatrixXi counts;       // M × K
  Eigen::VectorXi k0;           // M
  Matrix sigma;                 // M × (K·r·r), column-major r×r blocks; empty unless stored
  AllocationMatrix allocations; // M × N, 0-based; empty unless stored
  double e0_acceptance = std::numeric_limits<double>::quiet_NaN();  // NaN under a fixed e0

  int M() const noexcept { return static_cast<int>(eta.rows()); }
  bool has_sigma() const noexcept { return sigma.size() > 0; }
  bool has_allocations() const noexcept { return allocations.size() > 0; }

  Vector mu_at(int m, int k) const { return mu.row(m).segment(static_cast<Eigen::Index>(k) * r, r).transpose(); }

  Matrix sigma_at(int m, int k) const {
    const Eigen::Index rr = static_cast<Eigen::Index>(r) * r;
    Matrix s(r, r);
    for (Eigen::Index c = 0; c < rr; ++c) s(c % r, c / r) = sigma(m, k * rr + c);
    return s;
  }
};

inline int count_nonempty(std::span<const int> counts) {
  int n = 0;
  for (int c : counts) {
    if (c < 0) fail(ErrorCode::InvalidArgument, "counts must be nonnegative");
    if (c > 0) ++n;
  }
  return n;
}

namespace detail {

inline void record(ChainArchive& ar, int m, const MixtureState& st) {
  const int K = ar.K;
  const int r = ar.r;
  ar.eta.row(m) = st.eta.transpose();
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < r; ++j) ar.mu(m, k * r + j) = st.mu(k, j);
    ar.counts(m, k) = st.counts[static_cast<std::size_t>(k)];
  }
  ar.lambda.row(m) = st.lambda.transpose();
  ar.e0(m) = st.e0;
  ar.k0(m) = count_nonempty(st.counts);
  if (ar.config.store_sigma) {
    const int rr = r * r;
    for (int k = 0; k < K; ++k) {
      const Matrix s = st.covariance(k).matrix();
      for (int c = 0; c < rr; ++c) ar.sigma(m, k * rr + c) = s(c % r, c / r);
    }
  }
  if (ar.config.store_allocations) {
    for (int i = 0; i < ar.N; ++i) ar.allocations(m, i) = static_cast<std::uint16_t>(st.S[static_cast<std::size_t>(i)]);
  }
}

}  // namespace detail

/// Called after every sweep with (iteration, total iterations).
using ProgressFn = std::function<void(int, int)>;

/// Burn-in plus M stored sweeps of the full sampler. Kernel errors are
/// rethrown with the 0-based sweep index (burn-in included) attached.
inline ChainArchive run_chain(const Dataset& data, const PriorSpec& spec, const ChainConfig& config,
                              const ProgressFn& progress = {}) {
  data.validate();
  spec.validate();
  config.validate();
  if (spec.K > 65535) fail(ErrorCode::InvalidArgument, "K must be < 65536");

  ChainArchive ar;
  ar.spec = spec;
  ar.hyper = derive_hyper(data);
  ar.config = config;
  ar.dataset_name = data.name;
  ar.K = spec.K;
  ar.r = static_cast<int>(data.r());
  ar.N = static_cast<int>(data.n());
  const int M = config.iterations;
  ar.eta.resize(M, ar.K);
  ar.mu.resize(M, static_cast<Eigen::Index>(ar.K) * ar.r);
  ar.lambda.resize(M, ar.r);
  ar.e0.resize(M);
  ar.counts.resize(M, ar.K);
  ar.k0.resize(M);
  if (config.store_sigma) ar.sigma.resize(M, static_cast<Eigen::Index>(ar.K) * ar.r * ar.r);
  if (config.store_allocations) ar.allocations.resize(M, ar.N);

  RngStream rng(config.seed, 0);
  const RowMatrix y = to_rows(data.y);
  MixtureState st = init_state(data, ar.hyper, spec, rng);

  const int total = config.burn_in + M;
  long accepted = 0;
  for (int it = 0; it < total; ++it) {
    try {
      const bool acc = gibbs_sweep(st, y, ar.hyper, spec, rng);
      if (it >= config.burn_in) {
        if (acc) ++accepted;
        detail::record(ar, it - config.burn_in, st);
      }
    } catch (const Error& e) {
      fail(e.code(), "iteration " + std::to_string(it) + ": " + e.detail());
    }
    if (progress) progress(it + 1, total);
  }
  if (spec.random_e0()) ar.e0_acceptance = static_cast<double>(accepted) / M;
  return ar;
}

}  // namespace sparsemix
