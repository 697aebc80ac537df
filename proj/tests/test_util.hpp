#pragma once

// Statistical oracles shared by the test suites. Everything here is written
// independently of the library code it checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace testutil {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double se = 0.0;  // Monte Carlo standard error of the mean
};

inline Moments moments(const std::vector<double>& x) {
  Moments m;
  const double n = static_cast<double>(x.size());
  for (double v : x) m.mean += v;
  m.mean /= n;
  for (double v : x) m.var += (v - m.mean) * (v - m.mean);
  m.var /= n - 1.0;
  m.se = std::sqrt(m.var / n);
  return m;
}

/// Standard error of the sample variance, from the fourth central moment.
inline double variance_se(const std::vector<double>& x) {
  const Moments m = moments(x);
  double m4 = 0.0;
  for (double v : x) m4 += std::pow(v - m.mean, 4);
  m4 /= static_cast<double>(x.size());
  return std::sqrt((m4 - m.var * m.var) / static_cast<double>(x.size()));
}

/// Asymptotic Kolmogorov tail probability P(K > t).
inline double kolmogorov_tail(double t) {
  if (t < 0.2) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    s += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

/// One-sample Kolmogorov–Smirnov p-value (asymptotic, with the Stephens
/// small-sample correction).
inline double ks_pvalue(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  const double sn = std::sqrt(n);
  return kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d);
}

/// Upper 1% point of the chi-square distribution for small df.
inline double chi2_crit_001(int df) {
  static const double table[] = {0.0, 6.6349, 9.2103, 11.3449, 13.2767, 15.0863, 16.8119, 18.4753, 20.0902};
  return table[df];
}

/// ∫ f over (lo, hi) by the composite trapezoid rule on a log grid:
/// ∫ f(x) dx = ∫ f(eᵗ) eᵗ dt. Accurate for smooth positive integrands
/// that decay at both ends of the range.
inline double integrate_log(const std::function<double(double)>& f, double lo, double hi, int n = 20000) {
  const double a = std::log(lo), b = std::log(hi);
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = std::exp(a + i * h);
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    s += w * f(x) * x;
  }
  return s * h;
}

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Normalised moments of an unnormalised log-density on (lo, hi), by log-grid
/// quadrature. The log-density is shifted by its grid maximum for stability.
struct DensityOracle {
  std::function<double(double)> logf;
  double lo, hi;
  int n = 40000;
  double shift = 0.0;
  double z = 0.0;
  std::vector<double> cum;  // unnormalised CDF at the log-grid nodes

  DensityOracle(std::function<double(double)> lf, double l, double h, int grid = 40000)
      : logf(std::move(lf)), lo(l), hi(h), n(grid) {
    shift = -INFINITY;
    for (int i = 0; i <= n; ++i) shift = std::max(shift, logf(node(i)));
    z = integrate_log([this](double x) { return std::exp(logf(x) - shift); }, lo, hi, n);
    // Cumulative trapezoid in t = log x, matching integrate_log.
    const double step = std::log(hi / lo) / n;
    cum.assign(static_cast<std::size_t>(n) + 1, 0.0);
    double prev = std::exp(logf(lo) - shift) * lo;
    for (int i = 1; i <= n; ++i) {
      const double x = node(i);
      const double cur = std::exp(logf(x) - shift) * x;
      cum[static_cast<std::size_t>(i)] = cum[static_cast<std::size_t>(i) - 1] + 0.5 * step * (prev + cur);
      prev = cur;
    }
  }

  double node(int i) const { return std::exp(std::log(lo) + std::log(hi / lo) * i / n); }

  double expect(const std::function<double(double)>& g) const {
    return integrate_log([&](double x) { return g(x) * std::exp(logf(x) - shift); }, lo, hi, n) / z;
  }

  /// CDF at x, linear between grid nodes in log x.
  double cdf(double x) const {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    const double u = std::log(x / lo) / std::log(hi / lo) * n;
    const auto i = static_cast<std::size_t>(u);
    const double f = u - static_cast<double>(i);
    return ((1.0 - f) * cum[i] + f * cum[std::min(i + 1, cum.size() - 1)]) / cum.back();
  }
};

/// Unnormalised GIG log-density, x^{p-1} exp(-(a x + b/x)/2).
inline std::function<double(double)> gig_logf(double p, double a, double b) {
  return [=](double x) { return (p - 1.0) * std::log(x) - 0.5 * (a * x + b / x); };
}

/// Gamma(shape k, rate 1) CDF for integer k: 1 - e^{-y} Σ_{i<k} yⁱ/i!.
inline double gamma_cdf_integer(int k, double y) {
  if (y <= 0.0) return 0.0;
  double term = 1.0, s = 1.0;
  for (int i = 1; i < k; ++i) {
    term *= y / i;
    s += term;
  }
  return 1.0 - std::exp(-y) * s;
}

/// Adjusted Rand index of two labelings.
inline double adjusted_rand(const std::vector<int>& a, const std::vector<int>& b) {
  const int ka = *std::max_element(a.begin(), a.end()) + 1;
  const int kb = *std::max_element(b.begin(), b.end()) + 1;
  std::vector<double> t(static_cast<std::size_t>(ka * kb), 0.0), ra(ka, 0.0), rb(kb, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    t[static_cast<std::size_t>(a[i] * kb + b[i])] += 1;
    ra[a[i]] += 1;
    rb[b[i]] += 1;
  }
  auto c2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double sij = 0, sa = 0, sb = 0;
  for (double v : t) sij += c2(v);
  for (double v : ra) sa += c2(v);
  for (double v : rb) sb += c2(v);
  const double expected = sa * sb / c2(static_cast<double>(a.size()));
  return (sij - expected) / (0.5 * (sa + sb) - expected);
}

}  // namespace testutil
