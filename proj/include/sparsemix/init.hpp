#pragma once

#include <variant>

#include "sparsemix/distributions.hpp"
#include "sparsemix/kmeans.hpp"
#include "sparsemix/model.hpp"
#include "sparsemix/steps.hpp"

namespace sparsemix {

inline RowMatrix to_rows(const Matrix& y) { return RowMatrix(y); }

/// Starting state: allocations from k-means (10 restarts), λ = 1, b0 = median,
/// e0 fixed or a prior draw, C0 a prior draw; then steps 1a–1c conditional on
/// that classification. Step 1b needs component means, so the k-means centers
/// stand in for μ until 1c draws them.
inline MixtureState init_state(const Dataset& data, const DataHyper& hyper, const PriorSpec& spec, RngStream& rng) {
  spec.validate();
  if (spec.K > data.n()) fail(ErrorCode::InvalidArgument, "K must not exceed the number of observations");
  const KMeansResult km = kmeans(data.y, spec.K, rng, 10);

  MixtureState st;
  st.S = km.assignment;
  st.mu = km.centers;
  st.recount();
  st.lambda = Vector::Ones(data.r());
  st.b0 = hyper.median;
  if (const auto* f = std::get_if<FixedE0>(&spec.e0_policy)) {
    st.e0 = f->value;
  } else {
    const double a = std::get<GammaE0>(spec.e0_policy).a;
    st.e0 = gamma_sample(a, a * spec.K, rng);
  }
  st.C0 = wishart_sample(hyper.g0, hyper.G0, rng);

  const RowMatrix y = to_rows(data.y);
  step_weights(st, rng);
  step_covariances(st, y, hyper, rng);
  step_means(st, y, hyper, spec, rng);
  return st;
}

}  // namespace sparsemix
