#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sparsemix/csv.hpp"
#include "sparsemix/postid.hpp"
#include "sparsemix/simdata.hpp"

namespace sparsemix {

// ---------------------------------------------------------------------------
// Linear assignment
// ---------------------------------------------------------------------------

/// Minimum-cost assignment of every row to a distinct column (rows <= cols),
/// Hungarian algorithm with potentials, O(n² m). Returns the column of each row.
inline std::vector<int> solve_assignment(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n > m) fail(ErrorCode::InvalidArgument, "assignment needs rows <= cols");
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; p[j] is the row matched to column j, row 0 is virtual.
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(m) + 1, 0), way(static_cast<std::size_t>(m) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(m) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j) {
    if (p[static_cast<std::size_t>(j)] != 0) col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }
  return col;
}

/// Exhaustive minimum-cost injective assignment of rows into columns (rows <= cols).
inline std::vector<int> solve_assignment_exhaustive(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n > m) fail(ErrorCode::InvalidArgument, "assignment needs rows <= cols");
  std::vector<int> cur(static_cast<std::size_t>(n)), best;
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  double best_cost = std::numeric_limits<double>::infinity();
  auto rec = [&](auto&& self, int i, double acc) -> void {
    if (i == n) {
      if (acc < best_cost) {
        best_cost = acc;
        best = cur;
      }
      return;
    }
    for (int j = 0; j < m; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = 1;
      cur[static_cast<std::size_t>(i)] = j;
      self(self, i + 1, acc + cost(i, j));
      used[static_cast<std::size_t>(j)] = 0;
    }
  };
  rec(rec, 0, 0.0);
  if (best.empty() && n > 0) best = solve_assignment(cost);  // all costs infinite
  return best;
}

// ---------------------------------------------------------------------------
// Misclassification rate
// ---------------------------------------------------------------------------

struct Confusion {
  std::vector<int> est_values;    // sorted distinct
  std::vector<int> truth_values;  // sorted distinct
  Eigen::MatrixXi table;          // est × truth counts
};

inline Confusion confusion(const std::vector<int>& est, const std::vector<int>& truth) {
  if (est.size() != truth.size()) fail(ErrorCode::InvalidArgument, "label vectors differ in length");
  if (est.empty()) fail(ErrorCode::InvalidArgument, "empty label vectors");
  Confusion c;
  c.est_values = est;
  c.truth_values = truth;
  for (auto* v : {&c.est_values, &c.truth_values}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  auto index = [](const std::vector<int>& vals, int x) {
    return static_cast<Eigen::Index>(std::lower_bound(vals.begin(), vals.end(), x) - vals.begin());
  };
  c.table = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(c.est_values.size()),
                                  static_cast<Eigen::Index>(c.truth_values.size()));
  for (std::size_t i = 0; i < est.size(); ++i) ++c.table(index(c.est_values, est[i]), index(c.truth_values, truth[i]));
  return c;
}

namespace detail {

/// Maximum agreement under an injective matching from the smaller label set
/// into the larger one.
inline int max_agreement(const Eigen::MatrixXi& table, bool exhaustive) {
  const bool transpose = table.rows() > table.cols();
  const Eigen::MatrixXi t = transpose ? Eigen::MatrixXi(table.transpose()) : table;
  const Matrix cost = -t.cast<double>();
  const std::vector<int> col = exhaustive ? solve_assignment_exhaustive(cost) : solve_assignment(cost);
  int agree = 0;
  for (Eigen::Index i = 0; i < t.rows(); ++i) agree += t(i, col[static_cast<std::size_t>(i)]);
  return agree;
}

}  // namespace detail

inline double mcr_exhaustive(const std::vector<int>& est, const std::vector<int>& truth) {
  const Confusion c = confusion(est, truth);
  return 1.0 - static_cast<double>(detail::max_agreement(c.table, true)) / static_cast<double>(est.size());
}

inline double mcr_assignment(const std::vector<int>& est, const std::vector<int>& truth) {
  const Confusion c = confusion(est, truth);
  return 1.0 - static_cast<double>(detail::max_agreement(c.table, false)) / static_cast<double>(est.size());
}

/// Fraction misclassified under the best matching of estimated to true
/// labels: exhaustive when both label sets have at most 8 values, linear
/// assignment otherwise. Members of unmatched clusters count as errors.
inline double mcr(const std::vector<int>& est, const std::vector<int>& truth) {
  const Confusion c = confusion(est, truth);
  const bool small = c.est_values.size() <= 8 && c.truth_values.size() <= 8;
  return 1.0 - static_cast<double>(detail::max_agreement(c.table, small)) / static_cast<double>(est.size());
}

/// Per observation, the identified label it was allocated to most often
/// (1-based; ties to the smallest label).
inline std::vector<int> modal_classification(const IdentifiedDraws& id) {
  if (id.retained() == 0) fail(ErrorCode::NoIdentifiedDraws, "no iteration could be relabeled");
  if (!id.has_allocations()) fail(ErrorCode::InvalidArgument, "allocations were not stored in the archive");
  std::vector<int> labels(static_cast<std::size_t>(id.N));
  std::vector<int> freq(static_cast<std::size_t>(id.k0_hat));
  for (int i = 0; i < id.N; ++i) {
    std::fill(freq.begin(), freq.end(), 0);
    for (int t = 0; t < id.retained(); ++t) ++freq[id.allocations(t, i)];
    labels[static_cast<std::size_t>(i)] =
        static_cast<int>(std::max_element(freq.begin(), freq.end()) - freq.begin()) + 1;
  }
  return labels;
}

// ---------------------------------------------------------------------------
// MSE of the component means
// ---------------------------------------------------------------------------

struct ReferenceParams {
  std::vector<int> label_values;  // the true label each entry stands for
  std::vector<Vector> mu;
  std::vector<SpdMatrix> sigma;

  int size() const noexcept { return static_cast<int>(mu.size()); }
};

inline ReferenceParams reference_from_design(const SimDesign& design) {
  ReferenceParams ref;
  for (int k = 0; k < design.components(); ++k) {
    ref.label_values.push_back(k + 1);
    ref.mu.push_back(design.means[static_cast<std::size_t>(k)]);
    ref.sigma.push_back(design.covs[static_cast<std::size_t>(k)]);
  }
  return ref;
}

/// cost(ℓ, t) = mean over identified draws of the squared Mahalanobis
/// distance of μ_ℓ to reference t.
inline Matrix mse_cost_matrix(const IdentifiedDraws& id, const ReferenceParams& ref) {
  if (id.retained() == 0) fail(ErrorCode::NoIdentifiedDraws, "no iteration could be relabeled");
  Matrix cost(id.k0_hat, ref.size());
  for (int l = 0; l < id.k0_hat; ++l) {
    for (int t = 0; t < ref.size(); ++t) {
      double acc = 0.0;
      for (int m = 0; m < id.retained(); ++m) {
        acc += ref.sigma[static_cast<std::size_t>(t)].inv_quad(id.mu_at(m, l) - ref.mu[static_cast<std::size_t>(t)]);
      }
      cost(l, t) = acc / id.retained();
    }
  }
  return cost;
}

struct MseResult {
  double value = 0.0;
  std::vector<int> matching;  // identified label ℓ -> reference index
};

/// MSE under a given matching (identified label -> reference index).
inline double mse_mu(const IdentifiedDraws& id, const ReferenceParams& ref, const std::vector<int>& matching) {
  if (static_cast<int>(matching.size()) != id.k0_hat || id.k0_hat != ref.size()) {
    fail(ErrorCode::MatchingCardinalityMismatch, "matching must pair all K0-hat components with references");
  }
  const Matrix cost = mse_cost_matrix(id, ref);
  double total = 0.0;
  for (int l = 0; l < id.k0_hat; ++l) total += cost(l, matching[static_cast<std::size_t>(l)]);
  return total;
}

/// MSE under the matching that minimizes it (exhaustive for K̂₀ <= 8).
inline MseResult mse_mu(const IdentifiedDraws& id, const ReferenceParams& ref) {
  if (id.k0_hat != ref.size()) {
    fail(ErrorCode::MatchingCardinalityMismatch, "K0-hat (" + std::to_string(id.k0_hat) +
                                                     ") differs from the number of references (" +
                                                     std::to_string(ref.size()) + ")");
  }
  const Matrix cost = mse_cost_matrix(id, ref);
  MseResult res;
  res.matching = id.k0_hat <= 8 ? solve_assignment_exhaustive(cost) : solve_assignment(cost);
  for (int l = 0; l < id.k0_hat; ++l) res.value += cost(l, res.matching[static_cast<std::size_t>(l)]);
  return res;
}

// ---------------------------------------------------------------------------
// Bayes-estimate reference
// ---------------------------------------------------------------------------

/// Posterior means of μ_k and Σ_k with the allocations frozen at the true
/// labels (no classification and no permutation step).
inline ReferenceParams bayes_reference(const Dataset& data, PriorSpec spec, const ChainConfig& config) {
  data.validate();
  if (!data.labels) fail(ErrorCode::InvalidArgument, "bayes_reference needs true labels");
  config.validate();
  ReferenceParams ref;
  ref.label_values = *data.labels;
  std::sort(ref.label_values.begin(), ref.label_values.end());
  ref.label_values.erase(std::unique(ref.label_values.begin(), ref.label_values.end()), ref.label_values.end());
  const int L = static_cast<int>(ref.label_values.size());
  spec.K = L;
  spec.validate();
  const DataHyper hyper = derive_hyper(data);
  const Eigen::Index r = data.r();

  RngStream rng(config.seed, 2);
  MixtureState st;
  st.S.resize(static_cast<std::size_t>(data.n()));
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const int lab = (*data.labels)[static_cast<std::size_t>(i)];
    st.S[static_cast<std::size_t>(i)] =
        static_cast<int>(std::lower_bound(ref.label_values.begin(), ref.label_values.end(), lab) - ref.label_values.begin());
  }
  st.mu = Matrix::Zero(L, r);
  st.recount();
  for (Eigen::Index i = 0; i < data.n(); ++i) st.mu.row(st.S[static_cast<std::size_t>(i)]) += data.y.row(i);
  for (int k = 0; k < L; ++k) st.mu.row(k) /= std::max(1, st.counts[static_cast<std::size_t>(k)]);
  st.lambda = Vector::Ones(r);
  st.b0 = hyper.median;
  if (const auto* f = std::get_if<FixedE0>(&spec.e0_policy)) {
    st.e0 = f->value;
  } else {
    const double a = std::get<GammaE0>(spec.e0_policy).a;
    st.e0 = gamma_sample(a, a * L, rng);
  }
  st.C0 = wishart_sample(hyper.g0, hyper.G0, rng);

  const RowMatrix y = to_rows(data.y);
  const SweepOptions frozen{false, false};
  std::vector<Vector> mu_sum(static_cast<std::size_t>(L), Vector::Zero(r));
  std::vector<Matrix> sigma_sum(static_cast<std::size_t>(L), Matrix::Zero(r, r));
  for (int it = 0; it < config.burn_in + config.iterations; ++it) {
    gibbs_sweep(st, y, hyper, spec, rng, frozen);
    if (it < config.burn_in) continue;
    for (int k = 0; k < L; ++k) {
      mu_sum[static_cast<std::size_t>(k)] += st.mu.row(k).transpose();
      sigma_sum[static_cast<std::size_t>(k)] += st.covariance(k).matrix();
    }
  }
  for (int k = 0; k < L; ++k) {
    ref.mu.push_back(mu_sum[static_cast<std::size_t>(k)] / config.iterations);
    ref.sigma.push_back(cholesky(sigma_sum[static_cast<std::size_t>(k)] / config.iterations));
  }
  return ref;
}

// ---------------------------------------------------------------------------
// Shrinkage and e0 summaries
// ---------------------------------------------------------------------------

inline constexpr std::array<double, 5> kLambdaProbs = {0.025, 0.25, 0.5, 0.75, 0.975};

/// r × 5 table of λ_j quantiles at kLambdaProbs.
inline Matrix lambda_summary(const PriorSpec& spec, const Matrix& lambda_draws) {
  if (!spec.normal_gamma()) fail(ErrorCode::NotNormalGammaRun, "lambda is fixed at 1 under the standard prior");
  if (lambda_draws.rows() == 0) fail(ErrorCode::NoRetainedIterations, "no lambda draws");
  Matrix q(lambda_draws.cols(), static_cast<Eigen::Index>(kLambdaProbs.size()));
  for (Eigen::Index j = 0; j < lambda_draws.cols(); ++j) {
    std::vector<double> v(lambda_draws.col(j).data(), lambda_draws.col(j).data() + lambda_draws.rows());
    std::sort(v.begin(), v.end());
    for (std::size_t c = 0; c < kLambdaProbs.size(); ++c) q(j, static_cast<Eigen::Index>(c)) = quantile_sorted(v, kLambdaProbs[c]);
  }
  return q;
}

inline Matrix lambda_summary(const ChainArchive& ar) { return lambda_summary(ar.spec, ar.lambda); }
inline Matrix lambda_summary(const IdentifiedDraws& id) { return lambda_summary(id.spec, id.lambda); }

/// Median of the e0 draws, or the fixed value.
inline double e0_summary(const PriorSpec& spec, const Vector& e0_draws) {
  if (const auto* f = std::get_if<FixedE0>(&spec.e0_policy)) return f->value;
  return quantile(std::vector<double>(e0_draws.data(), e0_draws.data() + e0_draws.size()), 0.5);
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

struct EvalReport {
  int k0_hat = 0;
  int m0 = 0;
  double m0_rho = 0.0;
  int retained = 0;
  double e0_hat = 0.0;
  bool e0_fixed = false;
  double e0_acceptance = std::numeric_limits<double>::quiet_NaN();
  std::string distance;
  std::optional<double> mcr;
  std::optional<double> mse_mu;
  std::optional<std::string> mse_note;  // why MSE is absent when truth was given
  std::optional<Matrix> lambda_table;   // r × 5

  /// Flat key=value document, one entry per line.
  void write(std::ostream& out) const {
    out << "k0_hat=" << k0_hat << '\n'
        << "m0=" << m0 << '\n'
        << "m0_rho=" << format_double(m0_rho) << '\n'
        << "retained=" << retained << '\n'
        << "distance=" << distance << '\n'
        << "e0=" << format_double(e0_hat) << '\n'
        << "e0_fixed=" << (e0_fixed ? "true" : "false") << '\n';
    if (!std::isnan(e0_acceptance)) out << "e0_acceptance=" << format_double(e0_acceptance) << '\n';
    if (mcr) out << "mcr=" << format_double(*mcr) << '\n';
    if (mse_mu) out << "mse_mu=" << format_double(*mse_mu) << '\n';
    if (mse_note) out << "mse_mu_note=" << *mse_note << '\n';
  }

  std::string to_string() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }
};

/// Tab-separated λ quantile table with a header row.
inline void write_lambda_table(std::ostream& out, const Matrix& table) {
  out << "dimension\tq2.5\tq25\tq50\tq75\tq97.5\n";
  for (Eigen::Index j = 0; j < table.rows(); ++j) {
    out << (j + 1);
    for (Eigen::Index c = 0; c < table.cols(); ++c) out << '\t' << format_double(table(j, c));
    out << '\n';
  }
}

/// Builds the report. MCR needs stored allocations and `truth`; MSE_μ needs
/// `reference` and is reported only when K̂₀ equals its size.
inline EvalReport evaluate(const IdentifiedDraws& id, const std::optional<std::vector<int>>& truth,
                           const std::optional<ReferenceParams>& reference) {
  EvalReport rep;
  rep.k0_hat = id.k0_hat;
  rep.m0 = id.m0;
  rep.m0_rho = id.m0_rho;
  rep.retained = id.retained();
  rep.distance = id.distance;
  rep.e0_fixed = std::holds_alternative<FixedE0>(id.spec.e0_policy);
  rep.e0_hat = e0_summary(id.spec, id.e0);
  rep.e0_acceptance = id.e0_acceptance;
  if (id.spec.normal_gamma()) rep.lambda_table = lambda_summary(id);
  if (truth && id.retained() > 0 && id.has_allocations()) rep.mcr = mcr(modal_classification(id), *truth);
  if (reference) {
    if (id.retained() == 0) {
      rep.mse_note = "no identified draws";
    } else if (id.k0_hat != reference->size()) {
      rep.mse_note = "k0_hat differs from the true number of components";
    } else {
      rep.mse_mu = mse_mu(id, *reference).value;
    }
  }
  return rep;
}

}  // namespace sparsemix
