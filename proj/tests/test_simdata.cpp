#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sparsemix/datasets.hpp"
#include "sparsemix/simdata.hpp"
#include "test_util.hpp"

using namespace sparsemix;

namespace {

std::string source_path(const std::string& rel) { return std::string(SPARSEMIX_SOURCE_DIR) + "/" + rel; }

std::vector<double> column_means(const Dataset& d) {
  std::vector<double> m;
  for (Eigen::Index j = 0; j < d.r(); ++j) m.push_back(d.y.col(j).mean());
  return m;
}

Dataset parse(const std::string& text, bool header, const std::optional<LabelColumn>& label = {}) {
  std::istringstream in(text);
  return parse_csv(in, header, label);
}

}  // namespace

// ---------------------------------------------------------------------------
// Simulation designs
// ---------------------------------------------------------------------------

TEST(Design, EqualWeightsLayout) {
  const SimDesign d = design_equal_weights();
  ASSERT_EQ(d.components(), 4);
  EXPECT_EQ(d.N, 1000);
  const double expected[4][4] = {{2, -2, 0, 0}, {-2, 2, 0, 0}, {2, 2, 0, 0}, {-2, -2, 0, 0}};
  for (int k = 0; k < 4; ++k) {
    for (int j = 0; j < 4; ++j) EXPECT_EQ(d.means[static_cast<std::size_t>(k)](j), expected[k][j]);
    EXPECT_EQ(d.covs[static_cast<std::size_t>(k)].matrix(), Matrix::Identity(4, 4));
    EXPECT_EQ(d.weights(k), 0.25);
  }
  EXPECT_EQ(d.means[1], -d.means[0]);
  EXPECT_EQ(d.means[3], -d.means[2]);
}

TEST(Design, UnequalWeightsDifferOnlyInWeights) {
  const SimDesign e = design_equal_weights(), u = design_unequal_weights();
  EXPECT_EQ(u.weights(0), 0.02);
  EXPECT_NEAR(u.weights.sum(), 1.0, 1e-15);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(u.means[static_cast<std::size_t>(k)], e.means[static_cast<std::size_t>(k)]);
  EXPECT_EQ(design_by_name("unequal").weights, u.weights);
  try {
    design_by_name("skewed");
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::UnknownDesign);
  }
}

TEST(Design, ValidationRejectsBadDesigns) {
  SimDesign d = design_equal_weights();
  d.weights(0) = 0.5;
  EXPECT_THROW(generate(d, 1), Error);
  d = design_equal_weights();
  d.N = 0;
  EXPECT_THROW(generate(d, 1), Error);
  d = design_equal_weights();
  d.covs.pop_back();
  EXPECT_THROW(generate(d, 1), Error);
}

TEST(Generate, HomogeneousDimensionsAreStandardNormal) {
  // Pooled over 20 data sets: dims 3–4 are N(0, 1) whatever the component.
  std::vector<double> v3, v4;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Dataset d = generate(design_equal_weights(), s);
    for (Eigen::Index i = 0; i < d.n(); ++i) {
      v3.push_back(d.y(i, 2));
      v4.push_back(d.y(i, 3));
    }
  }
  for (const auto* v : {&v3, &v4}) {
    const testutil::Moments m = testutil::moments(*v);
    EXPECT_LT(std::abs(m.mean), 4.0 * m.se);
    EXPECT_LT(std::abs(m.var - 1.0), 4.0 * testutil::variance_se(*v));
    EXPECT_GT(testutil::ks_pvalue(*v, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }), 0.01);
  }
}

TEST(Generate, SmallComponentCountIsBinomial) {
  // Count of label 1 under the unequal design is Binomial(1000, 0.02).
  std::vector<double> counts;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Dataset d = generate(design_unequal_weights(), s);
    counts.push_back(static_cast<double>(std::count(d.labels->begin(), d.labels->end(), 1)));
  }
  const testutil::Moments m = testutil::moments(counts);
  EXPECT_NEAR(m.mean, 20.0, 4.0 * std::sqrt(19.6 / 200.0));
  EXPECT_NEAR(m.var, 19.6, 4.0 * testutil::variance_se(counts));
}

TEST(Generate, PerComponentMeansAndLabelFrequencies) {
  const SimDesign design = design_equal_weights();
  std::vector<Vector> sums(4, Vector::Zero(4));
  std::vector<double> n(4, 0.0);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Dataset d = generate(design, 100 + s);
    ASSERT_EQ(d.n(), 1000);
    ASSERT_EQ(d.r(), 4);
    for (Eigen::Index i = 0; i < d.n(); ++i) {
      const int k = (*d.labels)[static_cast<std::size_t>(i)] - 1;
      ASSERT_GE(k, 0);
      ASSERT_LT(k, 4);
      sums[static_cast<std::size_t>(k)] += d.y.row(i).transpose();
      n[static_cast<std::size_t>(k)] += 1.0;
    }
  }
  // Chi-square goodness of fit of the label frequencies to (1/4, ..., 1/4).
  double chi2 = 0.0;
  for (double c : n) chi2 += (c - 2500.0) * (c - 2500.0) / 2500.0;
  EXPECT_LT(chi2, testutil::chi2_crit_001(3));
  for (int k = 0; k < 4; ++k) {
    const Vector mean = sums[static_cast<std::size_t>(k)] / n[static_cast<std::size_t>(k)];
    const double se = 1.0 / std::sqrt(n[static_cast<std::size_t>(k)]);
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(mean(j), design.means[static_cast<std::size_t>(k)](j), 4.0 * se);
  }
}

TEST(Generate, DeterministicInSeed) {
  const Dataset a = generate(design_equal_weights(), 42), b = generate(design_equal_weights(), 42);
  const Dataset c = generate(design_equal_weights(), 43);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(*a.labels, *b.labels);
  EXPECT_NE(a.y, c.y);
}

TEST(Generate, SingleObservation) {
  SimDesign d = design_unequal_weights();
  d.N = 1;
  const Dataset data = generate(d, 3);
  EXPECT_EQ(data.n(), 1);
  EXPECT_EQ(data.labels->size(), 1u);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

TEST(Csv, ParsesHeaderAndLabels) {
  const Dataset d = parse("a,b,cls\n1.5,2,x\n-3,4e-1,y\n0,1,x\n", true, LabelColumn{"cls", 0});
  ASSERT_EQ(d.n(), 3);
  ASSERT_EQ(d.r(), 2);
  EXPECT_EQ(d.y(0, 0), 1.5);
  EXPECT_EQ(d.y(1, 1), 0.4);
  EXPECT_EQ(d.columns, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(*d.labels, (std::vector<int>{1, 2, 1}));
}

TEST(Csv, TwoByTwoWithoutHeader) {
  const Dataset d = parse("1,2\n3,4\n", false);
  Matrix expected(2, 2);
  expected << 1, 2, 3, 4;
  EXPECT_EQ(d.y, expected);
  EXPECT_FALSE(d.labels);
}

TEST(Csv, IntegerLabelsAreKeptAndPositionSelects) {
  const Dataset d = parse("7,1.0\n3,2.0\n7,3.0\n", false, LabelColumn{"", 1});
  EXPECT_EQ(*d.labels, (std::vector<int>{7, 3, 7}));
  EXPECT_EQ(d.r(), 1);
}

TEST(Csv, ParseErrorsCarryCoordinates) {
  try {
    parse("a,b\n1,2\n3,oops\n", true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3, column 2"), std::string::npos) << e.what();
  }
  try {
    parse("1,2\n3\n", false);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse("a,b\n", true), Error);
  EXPECT_THROW(parse("a,b\n1,2\n", true, LabelColumn{"c", 0}), Error);
  EXPECT_THROW(parse("1,,2\n", false), Error);
}

TEST(Csv, WriteReadRoundTripIsExact) {
  const Dataset a = generate(design_equal_weights(), 5);
  std::stringstream ss;
  write_csv(ss, a);
  const Dataset b = parse_csv(ss, true, LabelColumn{"label", 0});
  EXPECT_EQ(a.y, b.y);  // 17 significant digits round-trip doubles exactly
  EXPECT_EQ(*a.labels, *b.labels);
  EXPECT_EQ(b.columns, (std::vector<std::string>{"y1", "y2", "y3", "y4"}));
}

TEST(Csv, MissingFileIsIo) {
  try {
    load_csv("/nonexistent/sparsemix.csv", true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

// ---------------------------------------------------------------------------
// Built-in data sets
// ---------------------------------------------------------------------------

TEST(Builtin, IrisShapeAndMoments) {
  const Dataset d = builtin("iris");
  ASSERT_EQ(d.n(), 150);
  ASSERT_EQ(d.r(), 4);
  for (int s = 1; s <= 3; ++s) EXPECT_EQ(std::count(d.labels->begin(), d.labels->end(), s), 50);
  // Published column means of Fisher's iris data.
  const std::vector<double> expected = {5.843333, 3.057333, 3.758, 1.199333};
  const std::vector<double> got = column_means(d);
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(got[static_cast<std::size_t>(j)], expected[static_cast<std::size_t>(j)], 5e-7);
}

TEST(Builtin, CrabsShapeAndMoments) {
  const Dataset d = builtin("crabs");
  ASSERT_EQ(d.n(), 200);
  ASSERT_EQ(d.r(), 5);
  for (int g = 1; g <= 4; ++g) EXPECT_EQ(std::count(d.labels->begin(), d.labels->end(), g), 50);
  EXPECT_EQ(d.columns, (std::vector<std::string>{"FL", "RW", "CL", "CW", "BD"}));
  // Published column means of the Leptograpsus crabs measurements.
  const std::vector<double> expected = {15.583, 12.7385, 32.1055, 36.4145, 14.0305};
  const std::vector<double> got = column_means(d);
  for (int j = 0; j < 5; ++j) EXPECT_NEAR(got[static_cast<std::size_t>(j)], expected[static_cast<std::size_t>(j)], 1e-9);
}

TEST(Builtin, UnknownName) {
  try {
    builtin("foo");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownDataset);
  }
}

TEST(Builtin, ChecksumsMatchAnIndependentHash) {
  // FNV-1a 64 written out again here rather than calling the library's.
  auto fnv = [](std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
    return h;
  };
  EXPECT_EQ(fnv(builtin_data::k_iris), builtin_data::k_iris_fnv1a);
  EXPECT_EQ(fnv(builtin_data::k_crabs), builtin_data::k_crabs_fnv1a);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);  // published FNV-1a 64 test vector
}

TEST(Builtin, MatchesShippedCsvFiles) {
  for (const std::string name : {"iris", "crabs"}) {
    const Dataset embedded = builtin(name);
    const Dataset file = load_csv(source_path("data/" + name + ".csv"), true,
                                  LabelColumn{name == "iris" ? "species" : "group", 0});
    EXPECT_EQ(embedded.y, file.y) << name;
    EXPECT_EQ(*embedded.labels, *file.labels) << name;
    std::ifstream in(source_path("data/" + name + ".csv"), std::ios::binary);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(fnv1a64(bytes), fnv1a64(builtin_text(name))) << name;
  }
}
