#pragma once

// Shared helpers for the unit tests: small norms, reference geometries and
// reproducible band-limited test densities.

#include "bie2d/bie2d.hpp"

#include <random>
#include <vector>

namespace tu {

inline double maxabs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double maxdiff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); i++) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline bie2d::Discretization unit_circle(int n) {
  return bie2d::make_periodic(bie2d::make_disc(bie2d::Vec2{0.0, 0.0}, 1.0), n);
}

// One of the five star-shaped reference bodies (taken from the built-in
// five-body scenario data), discretized on its own.
inline bie2d::Discretization splash_body(int idx, int n) {
  const auto& c = bie2d::scen::splash_centers()[idx];
  const double beta = bie2d::scen::splash_beta()[idx];
  const auto& coeffs = bie2d::scen::splash_coeffs()[idx];
  return bie2d::make_periodic(bie2d::make_fourier_star(c, beta, coeffs), n);
}

// Reproducible band-limited periodic density sampled at the nodes of d.
inline std::vector<double> bandlimited(const bie2d::Discretization& d, int kmax, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> a(kmax + 1), b(kmax + 1);
  for (int k = 0; k <= kmax; k++) {
    a[k] = coef(rng);
    b[k] = coef(rng);
  }
  std::vector<double> f(d.n);
  for (int i = 0; i < d.n; i++) {
    double v = 0.5 * a[0];
    for (int k = 1; k <= kmax; k++)
      v += a[k] * std::cos(k * d.s[i]) + b[k] * std::sin(k * d.s[i]);
    f[i] = v;
  }
  return f;
}

// Interleaved two-component band-limited density.
inline std::vector<double> bandlimited2(const bie2d::Discretization& d, int kmax, unsigned seed) {
  const std::vector<double> fx = bandlimited(d, kmax, seed);
  const std::vector<double> fy = bandlimited(d, kmax, seed + 101u);
  std::vector<double> f(2 * d.n);
  for (int i = 0; i < d.n; i++) {
    f[2 * i] = fx[i];
    f[2 * i + 1] = fy[i];
  }
  return f;
}

}  // namespace tu
