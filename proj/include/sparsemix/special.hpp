#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

#include "sparsemix/errors.hpp"

namespace sparsemix {

namespace detail {

// Taylor coefficients of 1/Γ(1+z) around z = 0.
inline constexpr std::array<double, 28> kRecipGammaTaylor = {
    1.00000000000000000000e+00,  5.77215664901532865549e-01,  -6.55878071520253902449e-01,
    -4.20026350340952370210e-02, 1.66538611382291479313e-01,  -4.21977345555443333902e-02,
    -9.62197152787697303211e-03, 7.21894324666309990246e-03,  -1.16516759185906516871e-03,
    -2.15241674114950975192e-04, 1.28050282388116195512e-04,  -2.01348547807882386862e-05,
    -1.25049348214267063072e-06, 1.13302723198169592860e-06,  -2.05633841697760707339e-07,
    6.11609510448141608721e-09,  5.00200764446922294544e-09,  -1.18127457048702004406e-09,
    1.04342671169110053979e-10,  7.78226343990507081432e-12,  -3.69680561864220597869e-12,
    5.10037028745447575372e-13,  -2.05832605356650663575e-14, -5.34812253942301782029e-15,
    1.22677862823826084089e-15,  -1.18125930169745883374e-16, 1.18669225475160037462e-18,
    1.41238065531803185733e-18,
};

struct TemmeGammas {
  double gam1;   // (1/Γ(1-μ) - 1/Γ(1+μ)) / (2μ)
  double gam2;   // (1/Γ(1-μ) + 1/Γ(1+μ)) / 2
  double gampl;  // 1/Γ(1+μ)
  double gammi;  // 1/Γ(1-μ)
};

// Valid for |mu| <= 1/2; the series form avoids the cancellation in gam1.
inline TemmeGammas temme_gammas(double mu) {
  double even = 0.0, odd = 0.0;
  double p = 1.0;
  const double mu2 = mu * mu;
  // 1/Γ(1+μ) = Σ c_k μ^k. Split into even and odd powers of μ.
  for (std::size_t k = 0; k < kRecipGammaTaylor.size(); k += 2) {
    even += kRecipGammaTaylor[k] * p;
    if (k + 1 < kRecipGammaTaylor.size()) odd += kRecipGammaTaylor[k + 1] * p;
    p *= mu2;
  }
  TemmeGammas g{};
  g.gampl = even + mu * odd;
  g.gammi = even - mu * odd;
  g.gam1 = -odd;
  g.gam2 = even;
  return g;
}

// K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2: Temme's series for x < 2,
// Steed's continued fraction CF2 otherwise.
inline void bessel_k_pair(double mu, double x, double& k_mu, double& k_mu1) {
  constexpr double eps = 1e-16;
  constexpr int max_iter = 100000;
  const double mu2 = mu * mu;
  if (x < 2.0) {
    const double x2 = 0.5 * x;
    const double pimu = std::numbers::pi * mu;
    const double fact = std::abs(pimu) < eps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < eps ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(mu);
    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    for (int i = 1; i <= max_iter; ++i) {
      ff = (i * ff + p + q) / (i * static_cast<double>(i) - mu2);
      c *= d / i;
      p /= i - mu;
      q /= i + mu;
      const double del = c * ff;
      sum += del;
      sum1 += c * (p - i * ff);
      if (std::abs(del) < std::abs(sum) * eps) break;
    }
    k_mu = sum;
    k_mu1 = sum1 * 2.0 / x;
  } else {
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1, c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= max_iter; ++i) {
      a -= 2 * (i - 1);
      c = -a * c / i;
      const double qnew = (q1 - b * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += c * qnew;
      b += 2.0;
      d = 1.0 / (b + a * d);
      delh = (b * d - 1.0) * delh;
      h += delh;
      const double dels = q * delh;
      s += dels;
      if (std::abs(dels / s) < eps) break;
    }
    h = a1 * h;
    k_mu = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
    k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
  }
}

}  // namespace detail

/// log K_ν(x), the modified Bessel function of the second kind. Works in log
/// space so large orders at small arguments do not overflow.
inline double log_bessel_k(double nu, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorCode::InvalidArgument, "bessel_k needs x > 0");
  nu = std::abs(nu);
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;
  double k0, k1;
  detail::bessel_k_pair(mu, x, k0, k1);
  double log_scale = 0.0;
  for (int i = 1; i <= nl; ++i) {
    const double next = (mu + i) * (2.0 / x) * k1 + k0;
    k0 = k1;
    k1 = next;
    if (k1 > 1e250) {
      k0 /= k1;
      log_scale += std::log(k1);
      k1 = 1.0;
    }
  }
  return log_scale + std::log(k0);
}

inline double bessel_k(double nu, double x) { return std::exp(log_bessel_k(nu, x)); }

/// Log of the joint marginal prior of one column (μ_1j, ..., μ_Kj) under the
/// normal-gamma prior, with the scale λ_j integrated out:
///
///   π = ν₂^ν₁ / ((2π)^{K/2} Γ(ν₁) R^K) · 2 K_p(√(ab)) (b/a)^{p/2},
///   p = ν₁ − K/2,  a = 2ν₂,  b = Σ_k (μ_kj − b_0j)² / R².
///
/// Used as an independent check of the λ Gibbs step.
inline double ng_marginal_logdensity(std::span<const double> mu_col, double b0j, double range,
                                     double nu1, double nu2) {
  if (mu_col.empty()) fail(ErrorCode::InvalidArgument, "need at least one component");
  if (!(range > 0.0) || !(nu1 > 0.0) || !(nu2 > 0.0)) {
    fail(ErrorCode::NonPositiveParameter, "range, nu1, nu2 must be positive");
  }
  const double k = static_cast<double>(mu_col.size());
  double b = 0.0;
  for (double m : mu_col) b += (m - b0j) * (m - b0j);
  b /= range * range;
  const double a = 2.0 * nu2;
  const double p = nu1 - 0.5 * k;
  const double head = nu1 * std::log(nu2) - 0.5 * k * std::log(2.0 * std::numbers::pi) -
                      std::lgamma(nu1) - k * std::log(range);
  if (b == 0.0) {
    // Limit b -> 0: 2 K_p(√(ab)) (b/a)^{p/2} -> Γ(p) (2/a)^p for p > 0, diverges otherwise.
    if (p <= 0.0) return std::numeric_limits<double>::infinity();
    return head + std::lgamma(p) + p * std::log(2.0 / a);
  }
  return head + std::log(2.0) + log_bessel_k(p, std::sqrt(a * b)) + 0.5 * p * (std::log(b) - std::log(a));
}

}  // namespace sparsemix
