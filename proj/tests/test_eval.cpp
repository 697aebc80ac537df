#include <gtest/gtest.h>

#include <numeric>

#include "sparsemix/eval.hpp"
#include "test_util.hpp"

using namespace sparsemix;

namespace {

// Brute-force MCR: try every injective map from the smaller label set into
// the larger one and count agreements directly on the label vectors.
double mcr_brute(const std::vector<int>& est, const std::vector<int>& truth) {
  auto distinct = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  std::vector<int> a = distinct(est), b = distinct(truth);
  const bool swap = a.size() > b.size();
  const std::vector<int>& small = swap ? b : a;
  std::vector<int> large = swap ? a : b;
  const std::vector<int>& xs = swap ? truth : est;  // labels drawn from `small`
  const std::vector<int>& ys = swap ? est : truth;
  std::sort(large.begin(), large.end());
  int best = 0;
  do {
    int agree = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto pos = static_cast<std::size_t>(std::lower_bound(small.begin(), small.end(), xs[i]) - small.begin());
      if (large[pos] == ys[i]) ++agree;
    }
    best = std::max(best, agree);
  } while (std::next_permutation(large.begin(), large.end()));
  return 1.0 - static_cast<double>(best) / static_cast<double>(est.size());
}

double assignment_cost(const Matrix& c, const std::vector<int>& col) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) s += c(i, col[static_cast<std::size_t>(i)]);
  return s;
}

// Identified draws with given μ draws (retained × K̂₀, r = 1).
IdentifiedDraws draws_1d(const Matrix& mu) {
  IdentifiedDraws id;
  id.r = 1;
  id.k0_hat = static_cast<int>(mu.cols());
  id.K = id.k0_hat;
  id.m0 = static_cast<int>(mu.rows());
  id.mu = mu;
  id.eta = Matrix::Constant(mu.rows(), mu.cols(), 1.0 / static_cast<double>(mu.cols()));
  id.origin = Eigen::MatrixXi::Zero(mu.rows(), mu.cols());
  for (Eigen::Index t = 0; t < mu.rows(); ++t) id.iterations.push_back(static_cast<int>(t));
  id.e0 = Vector::Constant(mu.rows(), 0.01);
  id.lambda = Matrix::Ones(mu.rows(), 1);
  id.spec.e0_policy = FixedE0{0.01};
  return id;
}

ReferenceParams reference_1d(std::vector<double> means, double var = 1.0) {
  ReferenceParams ref;
  for (std::size_t t = 0; t < means.size(); ++t) {
    ref.label_values.push_back(static_cast<int>(t) + 1);
    ref.mu.push_back(Vector::Constant(1, means[t]));
    ref.sigma.push_back(cholesky(Matrix::Constant(1, 1, var)));
  }
  return ref;
}

}  // namespace

// ---------------------------------------------------------------------------
// Classification and MCR
// ---------------------------------------------------------------------------

TEST(ModalClassification, MostFrequentLabelTiesToSmallest) {
  IdentifiedDraws id = draws_1d(Matrix::Zero(4, 2));
  id.N = 4;
  id.allocations.resize(4, 4);
  id.allocations << 0, 1, 1, 0,  //
      0, 0, 1, 1,                //
      1, 1, 1, 0,                //
      0, 1, 1, 1;
  EXPECT_EQ(modal_classification(id), (std::vector<int>{1, 2, 2, 1}));
}

TEST(ModalClassification, NeedsAllocations) {
  IdentifiedDraws id = draws_1d(Matrix::Zero(2, 2));
  EXPECT_THROW(modal_classification(id), Error);
  EXPECT_THROW(modal_classification(IdentifiedDraws{}), Error);
}

TEST(Mcr, HandExample) {
  const std::vector<int> est = {1, 1, 2, 2}, truth = {1, 2, 2, 2};
  EXPECT_DOUBLE_EQ(mcr(est, truth), 0.25);
  EXPECT_DOUBLE_EQ(mcr_brute(est, truth), 0.25);
}

TEST(Mcr, UnmatchedClustersCountAsErrors) {
  // Three estimated clusters against two true ones: the smallest is unmatched.
  const std::vector<int> est = {1, 1, 2, 2, 3}, truth = {1, 1, 2, 2, 2};
  EXPECT_DOUBLE_EQ(mcr(est, truth), 0.2);
  EXPECT_DOUBLE_EQ(mcr(truth, est), 0.2);
}

TEST(Mcr, InvariantUnderRelabelingAndAtMostNaive) {
  RngStream rng(1);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 5 + static_cast<int>(rng.uniform_index(40));
    const int k = 1 + static_cast<int>(rng.uniform_index(5));
    std::vector<int> est(static_cast<std::size_t>(n)), truth(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      truth[static_cast<std::size_t>(i)] = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(k)));
      est[static_cast<std::size_t>(i)] = rng.uniform() < 0.7 ? truth[static_cast<std::size_t>(i)]
                                                             : 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(k)));
    }
    const double base = mcr(est, truth);
    const std::vector<int> perm = random_permutation(k, rng);
    std::vector<int> renamed(est.size());
    for (std::size_t i = 0; i < est.size(); ++i) renamed[i] = 10 + perm[static_cast<std::size_t>(est[i] - 1)];
    EXPECT_DOUBLE_EQ(mcr(renamed, truth), base);
    int naive_agree = 0;
    for (std::size_t i = 0; i < est.size(); ++i) naive_agree += est[i] == truth[i];
    EXPECT_LE(base, 1.0 - static_cast<double>(naive_agree) / n + 1e-15);
    EXPECT_GE(base, 0.0);
  }
}

TEST(Mcr, ExhaustiveMatchesAssignmentOn200Instances) {
  RngStream rng(2);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + static_cast<int>(rng.uniform_index(60));
    const int ka = 1 + static_cast<int>(rng.uniform_index(6));
    const int kb = 1 + static_cast<int>(rng.uniform_index(6));
    std::vector<int> est(static_cast<std::size_t>(n)), truth(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      truth[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(kb)));
      est[static_cast<std::size_t>(i)] = rng.uniform() < 0.5 ? truth[static_cast<std::size_t>(i)] % ka
                                                             : static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(ka)));
    }
    const double brute = mcr_brute(est, truth);
    EXPECT_NEAR(mcr_exhaustive(est, truth), brute, 1e-15) << rep;
    EXPECT_NEAR(mcr_assignment(est, truth), brute, 1e-15) << rep;
    EXPECT_NEAR(mcr(est, truth), brute, 1e-15) << rep;
  }
}

TEST(Assignment, HungarianMatchesExhaustiveCost) {
  RngStream rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    const int rows = 1 + static_cast<int>(rng.uniform_index(6));
    const int cols = rows + static_cast<int>(rng.uniform_index(3));
    Matrix c(rows, cols);
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rep % 4 == 0 ? std::floor(3.0 * rng.uniform()) : rng.normal();
    const std::vector<int> h = solve_assignment(c), e = solve_assignment_exhaustive(c);
    EXPECT_NEAR(assignment_cost(c, h), assignment_cost(c, e), 1e-12) << rep;
    std::vector<int> sorted = h;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(std::unique(sorted.begin(), sorted.end()), sorted.end()) << "assignment not injective";
  }
  EXPECT_THROW(solve_assignment(Matrix::Zero(3, 2)), Error);
}

TEST(Mcr, LargeLabelSetsUseAssignment) {
  // Twelve labels, est a relabeling of truth except for one row.
  std::vector<int> truth, est;
  for (int i = 0; i < 120; ++i) {
    truth.push_back(i % 12);
    est.push_back((i % 12 + 5) % 12);
  }
  est[0] = (est[0] + 1) % 12;
  EXPECT_NEAR(mcr(est, truth), 1.0 / 120.0, 1e-15);
}

// ---------------------------------------------------------------------------
// MSE of the means
// ---------------------------------------------------------------------------

TEST(MseMu, HandCase) {
  Matrix mu(2, 2);
  mu << 0.5, 10.0,  //
      -0.5, 10.0;
  const IdentifiedDraws id = draws_1d(mu);
  const MseResult res = mse_mu(id, reference_1d({10.0, 0.0}));
  EXPECT_DOUBLE_EQ(res.value, 0.25);
  EXPECT_EQ(res.matching, (std::vector<int>{1, 0}));
  EXPECT_DOUBLE_EQ(mse_mu(id, reference_1d({10.0, 0.0}, 4.0)).value, 0.0625);
  EXPECT_DOUBLE_EQ(mse_mu(id, reference_1d({0.0, 10.0}), {0, 1}), 0.25);
}

TEST(MseMu, ZeroAtTheReference) {
  Matrix mu(3, 2);
  mu << -1.0, 2.0, -1.0, 2.0, -1.0, 2.0;
  EXPECT_EQ(mse_mu(draws_1d(mu), reference_1d({-1.0, 2.0})).value, 0.0);
}

TEST(MseMu, InvariantUnderReferenceOrder) {
  RngStream rng(4);
  Matrix mu(20, 3);
  for (Eigen::Index t = 0; t < 20; ++t) {
    for (int l = 0; l < 3; ++l) mu(t, l) = 4.0 * l + rng.normal();
  }
  const IdentifiedDraws id = draws_1d(mu);
  const double a = mse_mu(id, reference_1d({0.0, 4.0, 8.0})).value;
  EXPECT_DOUBLE_EQ(mse_mu(id, reference_1d({8.0, 0.0, 4.0})).value, a);
  EXPECT_DOUBLE_EQ(mse_mu(id, reference_1d({4.0, 8.0, 0.0})).value, a);
}

TEST(MseMu, CardinalityMismatch) {
  const IdentifiedDraws id = draws_1d(Matrix::Zero(2, 2));
  try {
    mse_mu(id, reference_1d({0.0, 1.0, 2.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MatchingCardinalityMismatch);
  }
  EXPECT_THROW(mse_mu(id, reference_1d({0.0, 1.0}), {0}), Error);
  const EvalReport rep = evaluate(id, std::nullopt, reference_1d({0.0, 1.0, 2.0}));
  EXPECT_FALSE(rep.mse_mu);
  ASSERT_TRUE(rep.mse_note);
}

// ---------------------------------------------------------------------------
// Bayes-estimate reference
// ---------------------------------------------------------------------------

namespace {

ChainConfig short_chain(std::uint64_t seed) {
  ChainConfig cfg;
  cfg.burn_in = 200;
  cfg.iterations = 2000;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(BayesReference, NearGroupMomentsOnTheDesign) {
  const SimDesign design = design_equal_weights();
  const Dataset data = generate(design, 5);
  PriorSpec spec;
  const ReferenceParams ref = bayes_reference(data, spec, short_chain(6));
  ASSERT_EQ(ref.size(), 4);
  EXPECT_EQ(ref.label_values, (std::vector<int>{1, 2, 3, 4}));
  for (int k = 0; k < 4; ++k) {
    // Posterior means track the per-label sample moments closely at n ≈ 250.
    Vector sum = Vector::Zero(4);
    int n = 0;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      if ((*data.labels)[static_cast<std::size_t>(i)] != k + 1) continue;
      sum += data.y.row(i).transpose();
      ++n;
    }
    const Vector sample_mean = sum / n;
    EXPECT_LT((ref.mu[static_cast<std::size_t>(k)] - sample_mean).norm(), 0.05) << k;
    const double dist = std::sqrt(design.covs[static_cast<std::size_t>(k)].inv_quad(ref.mu[static_cast<std::size_t>(k)] - design.means[static_cast<std::size_t>(k)]));
    EXPECT_LT(dist, 0.15 * std::sqrt(4.0)) << k;
    EXPECT_LT((ref.sigma[static_cast<std::size_t>(k)].matrix() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 0.25) << k;
  }
}

TEST(BayesReference, DeterministicAndNeedsLabels) {
  Dataset data = generate(design_equal_weights(), 7);
  PriorSpec spec;
  spec.mean_prior = NormalGammaPrior{};
  spec.e0_policy = FixedE0{0.01};
  ChainConfig cfg = short_chain(8);
  cfg.iterations = 300;
  const ReferenceParams a = bayes_reference(data, spec, cfg), b = bayes_reference(data, spec, cfg);
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(a.mu[static_cast<std::size_t>(k)], b.mu[static_cast<std::size_t>(k)]);
    EXPECT_EQ(a.sigma[static_cast<std::size_t>(k)].matrix(), b.sigma[static_cast<std::size_t>(k)].matrix());
  }
  data.labels.reset();
  EXPECT_THROW(bayes_reference(data, spec, cfg), Error);
}

TEST(BayesReference, FromDesignCopiesTruth) {
  const SimDesign design = design_unequal_weights();
  const ReferenceParams ref = reference_from_design(design);
  ASSERT_EQ(ref.size(), 4);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(ref.mu[static_cast<std::size_t>(k)], design.means[static_cast<std::size_t>(k)]);
}

// ---------------------------------------------------------------------------
// Shrinkage summaries
// ---------------------------------------------------------------------------

TEST(LambdaSummary, QuantilesOfKnownDraws) {
  Matrix draws(101, 2);
  for (int t = 0; t < 101; ++t) {
    draws(t, 0) = 100 - t;
    draws(t, 1) = 0.5;
  }
  PriorSpec ng;
  ng.mean_prior = NormalGammaPrior{};
  const Matrix q = lambda_summary(ng, draws);
  ASSERT_EQ(q.rows(), 2);
  ASSERT_EQ(q.cols(), 5);
  EXPECT_DOUBLE_EQ(q(0, 0), 2.5);
  EXPECT_DOUBLE_EQ(q(0, 2), 50.0);
  EXPECT_DOUBLE_EQ(q(0, 4), 97.5);
  for (int c = 0; c < 5; ++c) EXPECT_EQ(q(1, c), 0.5);
}

TEST(LambdaSummary, StandardPriorIsRejected) {
  try {
    lambda_summary(PriorSpec{}, Matrix::Ones(3, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNormalGammaRun);
  }
}

TEST(LambdaSummary, HomogeneousDimensionsShrink) {
  const Dataset data = generate(design_equal_weights(), 9);
  PriorSpec spec;
  spec.K = 8;
  spec.mean_prior = NormalGammaPrior{};
  spec.e0_policy = FixedE0{0.01};
  const ChainArchive ar = run_chain(data, spec, short_chain(10));
  const Matrix q = lambda_summary(ar);
  EXPECT_LT(std::max(q(2, 2), q(3, 2)), 0.25 * std::min(q(0, 2), q(1, 2)));
}

TEST(E0Summary, FixedAndRandom) {
  PriorSpec fixed;
  fixed.e0_policy = FixedE0{0.003};
  EXPECT_EQ(e0_summary(fixed, Vector::Constant(3, 9.0)), 0.003);
  Vector draws(3);
  draws << 0.3, 0.1, 0.2;
  EXPECT_DOUBLE_EQ(e0_summary(PriorSpec{}, draws), 0.2);
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

TEST(Evaluate, FullPipelineOnTheDesign) {
  const SimDesign design = design_equal_weights();
  const Dataset data = generate(design, 11);
  PriorSpec spec;
  spec.K = 8;
  ChainConfig cfg = short_chain(12);
  cfg.store_allocations = true;
  const ChainArchive ar = run_chain(data, spec, cfg);
  const IdentifyResult res = identify(ar, Distance::Mahalanobis, 13);
  const EvalReport rep = evaluate(res.draws, data.labels, reference_from_design(design));
  EXPECT_EQ(rep.k0_hat, 4);
  ASSERT_TRUE(rep.mcr);
  EXPECT_LT(*rep.mcr, 0.1);
  ASSERT_TRUE(rep.mse_mu);
  EXPECT_LT(*rep.mse_mu, 0.5);
  EXPECT_FALSE(rep.lambda_table);
  EXPECT_FALSE(rep.e0_fixed);
  EXPECT_GT(rep.e0_acceptance, 0.0);
  const std::string text = rep.to_string();
  EXPECT_NE(text.find("k0_hat=4\n"), std::string::npos);
  EXPECT_NE(text.find("mcr="), std::string::npos);
  EXPECT_NE(text.find("mse_mu="), std::string::npos);

  const EvalReport partial = evaluate(res.draws, std::nullopt, std::nullopt);
  EXPECT_FALSE(partial.mcr);
  EXPECT_FALSE(partial.mse_mu);
  EXPECT_EQ(partial.k0_hat, 4);
  EXPECT_EQ(partial.to_string().find("mcr="), std::string::npos);
}
