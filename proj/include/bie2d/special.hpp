#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "bie2d/common.hpp"

namespace bie2d {

// ---------------------------------------------------------------------------
// Error function.
//
// Implemented internally so that curve geometry is bit-stable across
// platforms: a Maclaurin series on |x| <= 1.5 (alternating-series
// cancellation stays below ~1e-15 there) and the Laplace continued fraction
// for erfc beyond, evaluated by backward recurrence.  Absolute error is
// below 1e-14 everywhere.
// ---------------------------------------------------------------------------

inline double erf_internal(double x) {
  const double ax = std::fabs(x);
  const double two_over_sqrt_pi = 1.1283791670955125738961589031;

  if (ax <= 1.5) {
    // erf(x) = 2/sqrt(pi) * sum_{n>=0} (-1)^n x^(2n+1) / (n! (2n+1))
    double term = x;         // x^(2n+1) / n!
    double sum = x;
    for (int n = 1; n < 64; n++) {
      term *= -x * x / n;
      const double add = term / (2 * n + 1);
      sum += add;
      if (std::fabs(add) < 1e-18 * std::fabs(sum) + 1e-300) break;
    }
    return two_over_sqrt_pi * sum;
  }

  if (ax >= 6.5) return x > 0 ? 1.0 : -1.0; // erfc(6.5) ~ 3.8e-20

  // erfc(a) = exp(-a^2)/sqrt(pi) / (a + (1/2)/(a + 1/(a + (3/2)/(a + ...)))),
  // evaluated by backward recurrence at fixed depth (deterministic; depth 60
  // is far past convergence for a >= 1.5).
  const double a = ax;
  double cf = 0.0;
  for (int n = 60; n >= 1; n--) cf = (0.5 * n) / (a + cf);
  cf = 1.0 / (a + cf);
  const double erfc_ax = std::exp(-a * a) / std::sqrt(pi) * cf;
  const double r = 1.0 - erfc_ax;
  return x > 0 ? r : -r;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre rules on [-1, 1].
// ---------------------------------------------------------------------------

struct GaussRule {
  std::vector<double> x, w;     // nodes and weights
  std::vector<double> bary;     // barycentric interpolation weights
};

namespace detail {

inline GaussRule build_gauss_rule(int n) {
  if (n < 1 || n > 64) throw std::invalid_argument("gauss rule order out of range");
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; i++) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; it++) {
      // Legendre recurrence for P_n(x) and P_n'(x).
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; k++) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    // One clean-up Newton step at converged x for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; k++) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.x[i] = -x; // ascending order
    r.x[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;

  // Barycentric weights for interpolation from the Gauss nodes.
  r.bary.assign(n, 1.0);
  for (int j = 0; j < n; j++) {
    for (int k = 0; k < n; k++) {
      if (k != j) r.bary[j] /= (r.x[j] - r.x[k]);
    }
  }
  // Rescale to avoid overflow at high order (common factor cancels).
  double m = 0;
  for (double b : r.bary) m = std::max(m, std::fabs(b));
  for (double& b : r.bary) b /= m;
  return r;
}

} // namespace detail

// Cached Gauss-Legendre rule of order n (n-point).
inline const GaussRule& gauss_rule(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::build_gauss_rule(n)).first;
  return it->second;
}

// Barycentric Lagrange interpolation of samples f (at rule nodes) to xi.
inline double gauss_interp(const GaussRule& rule, const double* f, double xi) {
  const int n = (int)rule.x.size();
  double num = 0, den = 0;
  for (int j = 0; j < n; j++) {
    const double d = xi - rule.x[j];
    if (std::fabs(d) < 1e-14) return f[j];
    const double c = rule.bary[j] / d;
    num += c * f[j];
    den += c;
  }
  return num / den;
}

} // namespace bie2d
