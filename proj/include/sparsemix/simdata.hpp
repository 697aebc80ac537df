#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sparsemix/distributions.hpp"
#include "sparsemix/model.hpp"

namespace sparsemix {

struct SimDesign {
  std::string name;
  std::vector<Vector> means;
  std::vector<SpdMatrix> covs;
  Vector weights;
  int N = 1000;

  int components() const noexcept { return static_cast<int>(means.size()); }

  void validate() const {
    if (means.empty()) fail(ErrorCode::InvalidArgument, "design needs at least one component");
    if (covs.size() != means.size() || weights.size() != components()) {
      fail(ErrorCode::InvalidArgument, "design list lengths differ");
    }
    for (std::size_t k = 0; k < means.size(); ++k) {
      if (means[k].size() != means[0].size() || covs[k].dim() != means[0].size()) {
        fail(ErrorCode::InvalidArgument, "design dimensions differ");
      }
    }
    if ((weights.array() < 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-12) {
      fail(ErrorCode::InvalidArgument, "design weights are not on the simplex");
    }
    if (N < 1) fail(ErrorCode::InvalidArgument, "design needs N >= 1");
  }
};

namespace detail {

inline SimDesign four_cluster_design(std::string name, Vector weights) {
  SimDesign d;
  d.name = std::move(name);
  Vector m1(4), m3(4);
  m1 << 2.0, -2.0, 0.0, 0.0;
  m3 << 2.0, 2.0, 0.0, 0.0;
  d.means = {m1, -m1, m3, -m3};
  d.covs.assign(4, SpdMatrix::identity(4));
  d.weights = std::move(weights);
  d.N = 1000;
  return d;
}

}  // namespace detail

/// Four isotropic clusters in r = 4, two homogeneous dimensions, equal weights.
inline SimDesign design_equal_weights() {
  return detail::four_cluster_design("equal", Vector::Constant(4, 0.25));
}

/// As design_equal_weights with a 2% first component.
inline SimDesign design_unequal_weights() {
  Vector w(4);
  w << 0.02, 0.33, 0.33, 0.32;
  return detail::four_cluster_design("unequal", w);
}

inline SimDesign design_by_name(const std::string& name) {
  if (name == "equal") return design_equal_weights();
  if (name == "unequal") return design_unequal_weights();
  fail(ErrorCode::UnknownDesign, "unknown design '" + name + "' (expected equal|unequal)");
}

/// Labels are 1-based component numbers.
inline Dataset generate(const SimDesign& design, std::uint64_t seed) {
  design.validate();
  RngStream rng(seed, 0);
  const Eigen::Index r = design.means[0].size();
  Dataset data;
  data.name = design.name + "-" + std::to_string(seed);
  data.y.resize(design.N, r);
  std::vector<int> labels(static_cast<std::size_t>(design.N));
  std::vector<double> logw(static_cast<std::size_t>(design.components()));
  for (int k = 0; k < design.components(); ++k) logw[static_cast<std::size_t>(k)] = std::log(design.weights(k));
  for (int i = 0; i < design.N; ++i) {
    const auto k = categorical_from_logweights(logw, rng);
    labels[static_cast<std::size_t>(i)] = static_cast<int>(k) + 1;
    data.y.row(i) = mvn_sample(design.means[k], design.covs[k], rng).transpose();
  }
  data.labels = std::move(labels);
  for (Eigen::Index j = 0; j < r; ++j) data.columns.push_back("y" + std::to_string(j + 1));
  return data;
}

}  // namespace sparsemix
