#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "sparsemix/errors.hpp"
#include "sparsemix/linalg.hpp"
#include "sparsemix/rng.hpp"

namespace sparsemix {

// ---------------------------------------------------------------------------
// Gamma family (shape–rate convention throughout: mean = shape / rate)
// ---------------------------------------------------------------------------

namespace detail {

// Marsaglia–Tsang for shape >= 1, boosted for shape < 1.
inline double standard_gamma(double shape, RngStream& rng) {
  if (shape < 1.0) {
    const double g = standard_gamma(shape + 1.0, rng);
    return g * std::pow(rng.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// log of a standard gamma draw; stays finite for tiny shapes where the draw
// itself underflows.
inline double log_standard_gamma(double shape, RngStream& rng) {
  if (shape < 1.0) {
    return std::log(standard_gamma(shape + 1.0, rng)) + std::log(rng.uniform()) / shape;
  }
  return std::log(standard_gamma(shape, rng));
}

}  // namespace detail

inline double gamma_sample(double shape, double rate, RngStream& rng) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    fail(ErrorCode::NonPositiveParameter, "gamma needs shape > 0 and rate > 0");
  }
  return detail::standard_gamma(shape, rng) / rate;
}

inline double gamma_logpdf(double x, double shape, double rate) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

// ---------------------------------------------------------------------------
// Multivariate normal
// ---------------------------------------------------------------------------

inline Vector mvn_sample(const Vector& mean, const SpdMatrix& cov, RngStream& rng) {
  if (mean.size() != cov.dim()) fail(ErrorCode::InvalidArgument, "mvn_sample: dimension mismatch");
  Vector z(mean.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = rng.normal();
  return mean + cov.factor().triangularView<Eigen::Lower>() * z;
}

inline double mvn_logpdf(const Vector& x, const Vector& mean, const SpdMatrix& cov) {
  if (x.size() != mean.size() || x.size() != cov.dim()) {
    fail(ErrorCode::InvalidArgument, "mvn_logpdf: dimension mismatch");
  }
  const double r = static_cast<double>(x.size());
  return -0.5 * (r * std::log(2.0 * std::numbers::pi) + cov.log_det() + cov.inv_quad(x - mean));
}

// ---------------------------------------------------------------------------
// Wishart, shape–rate form W(c, C): density ∝ |Ω|^{c-(r+1)/2} exp(-tr(CΩ)),
// E[Ω] = c C⁻¹. Equivalent to the standard Wishart with 2c degrees of freedom
// and scale (2C)⁻¹; drawn by Bartlett decomposition.
// ---------------------------------------------------------------------------

inline SpdMatrix wishart_sample(double shape, const SpdMatrix& rate, RngStream& rng) {
  const Eigen::Index r = rate.dim();
  if (2.0 * shape < static_cast<double>(r)) {
    fail(ErrorCode::DegreesOfFreedomTooSmall, "wishart needs 2c >= r");
  }
  // Bartlett factor A (lower): A_ii² ~ χ²(2c - i), A_ij ~ N(0,1) for i > j.
  Matrix a = Matrix::Zero(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    a(i, i) = std::sqrt(2.0 * detail::standard_gamma(shape - 0.5 * static_cast<double>(i), rng));
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  // With C = M Mᵀ, F = M⁻ᵀ/√2 satisfies F Fᵀ = (2C)⁻¹, so Ω = ½ (M⁻ᵀA)(M⁻ᵀA)ᵀ.
  Matrix b = rate.factor().transpose().triangularView<Eigen::Upper>().solve(a);
  Matrix omega = 0.5 * (b * b.transpose());
  return cholesky(0.5 * (omega + omega.transpose()));
}

// ---------------------------------------------------------------------------
// Dirichlet
// ---------------------------------------------------------------------------

/// Log of a Dirichlet draw, computed from log-gamma variates so that
/// components with tiny parameters keep a finite log weight.
inline Vector dirichlet_sample_log(const Vector& e, RngStream& rng) {
  if (e.size() == 0) fail(ErrorCode::InvalidArgument, "dirichlet needs at least one parameter");
  if ((e.array() <= 0.0).any() || !e.allFinite()) {
    fail(ErrorCode::NonPositiveParameter, "dirichlet parameters must be positive");
  }
  Vector lg(e.size());
  for (Eigen::Index k = 0; k < e.size(); ++k) lg(k) = detail::log_standard_gamma(e(k), rng);
  const double mx = lg.maxCoeff();
  const double lse = mx + std::log((lg.array() - mx).exp().sum());
  return lg.array() - lse;
}

inline Vector dirichlet_sample(const Vector& e, RngStream& rng) {
  return dirichlet_sample_log(e, rng).array().exp();
}

// ---------------------------------------------------------------------------
// Generalized inverse Gaussian: density ∝ x^{p-1} exp(-(a x + b/x) / 2).
// Hörmann & Leydold ratio-of-uniforms family, applied to the standardized
// variate with ω = √(ab) and rescaled by √(b/a).
// ---------------------------------------------------------------------------

namespace detail {

inline double gig_mode(double lambda, double omega) {
  if (lambda >= 1.0) {
    return (std::sqrt((lambda - 1.0) * (lambda - 1.0) + omega * omega) + (lambda - 1.0)) / omega;
  }
  return omega / (std::sqrt((1.0 - lambda) * (1.0 - lambda) + omega * omega) + (1.0 - lambda));
}

// Ratio-of-uniforms without mode shift.
inline double gig_rou_noshift(double lambda, double omega, RngStream& rng) {
  const double lm1 = lambda - 1.0;
  const double xm = gig_mode(lambda, omega);
  const double nc = 0.5 * lm1 * std::log(xm) - 0.25 * omega * (xm + 1.0 / xm);
  const double ym = ((lambda + 1.0) + std::sqrt((lambda + 1.0) * (lambda + 1.0) + omega * omega)) / omega;
  const double um = std::exp(0.5 * (lambda + 1.0) * std::log(ym) - 0.25 * omega * (ym + 1.0 / ym) - nc);
  for (;;) {
    const double u = um * rng.uniform();
    const double v = rng.uniform();
    const double x = u / v;
    if (std::log(v) <= 0.5 * lm1 * std::log(x) - 0.25 * omega * (x + 1.0 / x) - nc) return x;
  }
}

// Ratio-of-uniforms with shift by the mode (Dagpunar / Lehner).
inline double gig_rou_shift(double lambda, double omega, RngStream& rng) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
  const double a = -(2.0 * (lambda + 1.0) / omega + xm);
  const double b = (2.0 * (lambda - 1.0) * xm / omega - 1.0);
  const double c = xm;
  const double p = b - a * a / 3.0;
  const double q = (2.0 * a * a * a) / 27.0 - (a * b) / 3.0 + c;
  const double fi = std::acos(-q / (2.0 * std::sqrt(-(p * p * p) / 27.0)));
  const double fak = 2.0 * std::sqrt(-p / 3.0);
  const double y1 = fak * std::cos(fi / 3.0) - a / 3.0;
  const double y2 = fak * std::cos(fi / 3.0 + 4.0 / 3.0 * std::numbers::pi) - a / 3.0;
  const double uplus = (y1 - xm) * std::exp(t * std::log(y1) - s * (y1 + 1.0 / y1) - nc);
  const double uminus = (y2 - xm) * std::exp(t * std::log(y2) - s * (y2 + 1.0 / y2) - nc);
  for (;;) {
    const double u = uminus + rng.uniform() * (uplus - uminus);
    const double v = rng.uniform();
    const double x = u / v + xm;
    if (x <= 0.0) continue;
    if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
  }
}

// Hörmann–Leydold rejection for 0 <= λ < 1 and small ω, where neither
// ratio-of-uniforms variant has a usable acceptance rate.
inline double gig_small_omega(double lambda, double omega, RngStream& rng) {
  const double xm = gig_mode(lambda, omega);
  const double x0 = omega / (1.0 - lambda);
  const double k0 = std::exp((lambda - 1.0) * std::log(xm) - 0.5 * omega * (xm + 1.0 / xm));
  std::array<double, 3> area{};
  area[0] = k0 * x0;
  double k1, k2;
  if (x0 >= 2.0 / omega) {
    k1 = 0.0;
    area[1] = 0.0;
    k2 = std::pow(x0, lambda - 1.0);
    area[2] = k2 * 2.0 * std::exp(-omega * x0 / 2.0) / omega;
  } else {
    k1 = std::exp(-omega);
    area[1] = lambda == 0.0 ? k1 * std::log(2.0 / (omega * omega))
                            : k1 / lambda * (std::pow(2.0 / omega, lambda) - std::pow(x0, lambda));
    k2 = std::pow(2.0 / omega, lambda - 1.0);
    area[2] = k2 * 2.0 * std::exp(-1.0) / omega;
  }
  const double total = area[0] + area[1] + area[2];
  for (;;) {
    double v = total * rng.uniform();
    double x, hx;
    if (v <= area[0]) {
      x = x0 * v / area[0];
      hx = k0;
    } else if ((v -= area[0]) <= area[1]) {
      if (lambda == 0.0) {
        x = omega * std::exp(std::exp(omega) * v);
        hx = k1 / x;
      } else {
        x = std::pow(std::pow(x0, lambda) + lambda / k1 * v, 1.0 / lambda);
        hx = k1 * std::pow(x, lambda - 1.0);
      }
    } else {
      v -= area[1];
      const double lo = std::max(x0, 2.0 / omega);
      x = -2.0 / omega * std::log(std::exp(-omega / 2.0 * lo) - omega / (2.0 * k2) * v);
      hx = k2 * std::exp(-omega / 2.0 * x);
    }
    const double u = rng.uniform() * hx;
    if (std::log(u) <= (lambda - 1.0) * std::log(x) - omega / 2.0 * (x + 1.0 / x)) return x;
  }
}

// Standardized GIG(λ, ω) with λ >= 0, density ∝ x^{λ-1} exp(-ω(x + 1/x)/2).
inline double gig_standard(double lambda, double omega, RngStream& rng) {
  if (omega < 1e-7 && lambda >= 1.0) {
    // The 1/x term is negligible where the mass sits: Gamma(λ, rate ω/2).
    return detail::standard_gamma(lambda, rng) * 2.0 / omega;
  }
  if (lambda > 2.0 || omega > 3.0) return gig_rou_shift(lambda, omega, rng);
  if (lambda >= 1.0 - 2.25 * omega * omega || omega > 0.2) return gig_rou_noshift(lambda, omega, rng);
  return gig_small_omega(lambda, omega, rng);
}

}  // namespace detail

inline double gig_sample(double p, double a, double b, RngStream& rng) {
  if (!(a > 0.0) || b < 0.0 || !std::isfinite(p)) {
    fail(ErrorCode::InvalidParameters, "gig needs a > 0 and b >= 0");
  }
  if (b == 0.0) {
    if (p <= 0.0) fail(ErrorCode::InvalidParameters, "gig with b = 0 needs p > 0");
    return detail::standard_gamma(p, rng) / (0.5 * a);
  }
  const double omega = std::sqrt(a * b);
  const double scale = std::sqrt(b / a);
  // 1/X ~ GIG(-p, b, a), i.e. the standardized variate maps λ -> -λ under inversion.
  if (p < 0.0) return scale / detail::gig_standard(-p, omega, rng);
  return scale * detail::gig_standard(p, omega, rng);
}

// ---------------------------------------------------------------------------
// Discrete draws
// ---------------------------------------------------------------------------

/// Index k (0-based) with probability exp(logw_k - logsumexp(logw)).
inline std::size_t categorical_from_logweights(std::span<const double> logw, RngStream& rng) {
  if (logw.empty()) fail(ErrorCode::InvalidArgument, "categorical needs at least one weight");
  double mx = -std::numeric_limits<double>::infinity();
  for (double w : logw) mx = std::max(mx, w);
  if (!(mx > -std::numeric_limits<double>::infinity())) {
    fail(ErrorCode::AllWeightsDegenerate, "every log weight is -inf");
  }
  double total = 0.0;
  for (double w : logw) total += std::exp(w - mx);
  double u = rng.uniform() * total;
  std::size_t last = 0;
  for (std::size_t k = 0; k < logw.size(); ++k) {
    const double p = std::exp(logw[k] - mx);
    if (p > 0.0) last = k;
    u -= p;
    if (u <= 0.0) return k;
  }
  return last;
}

/// Uniform permutation of 0..K-1 (Fisher–Yates).
inline std::vector<int> random_permutation(int k, RngStream& rng) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "permutation size must be >= 1");
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

}  // namespace sparsemix
