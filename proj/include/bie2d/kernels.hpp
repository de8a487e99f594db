#pragma once

#include <cmath>

#include "bie2d/common.hpp"

namespace bie2d {

// ---------------------------------------------------------------------------
// Pointwise kernel values for the Laplace and Stokes (unit viscosity)
// layer potentials.  Callers are responsible for never passing coincident
// source/target pairs; self-interaction limits are provided separately as
// *_diag helpers in terms of the local curvature and tangent.
// ---------------------------------------------------------------------------

// Laplace fundamental solution G(x,y) = -(1/2pi) log|x-y|.
inline double laplace_G(Vec2 x, Vec2 y) {
  return -std::log(norm2(x - y)) / (4.0 * pi);
}

inline Vec2 laplace_G_gradx(Vec2 x, Vec2 y) {
  const Vec2 r = x - y;
  return (-1.0 / (2.0 * pi * norm2(r))) * r;
}

// Double layer: dG/dn_y.
inline double laplace_dlp(Vec2 x, Vec2 y, Vec2 ny) {
  const Vec2 r = y - x;
  return -dot(r, ny) / (2.0 * pi * norm2(r));
}

// Adjoint double layer: dG/dn_x (normal derivative of the single layer).
inline double laplace_dlp_adj(Vec2 x, Vec2 y, Vec2 nx) {
  const Vec2 r = x - y;
  return -dot(r, nx) / (2.0 * pi * norm2(r));
}

// Coincident limit shared by both double-layer kernels on a smooth curve.
inline double laplace_dlp_diag(double kappa) { return -kappa / (4.0 * pi); }

// Target gradient of the double-layer kernel.
inline Vec2 laplace_dlp_gradx(Vec2 x, Vec2 y, Vec2 ny) {
  const Vec2 r = y - x;
  const double r2 = norm2(r);
  return (1.0 / (2.0 * pi * r2 * r2)) * (r2 * ny - (2.0 * dot(r, ny)) * r);
}

// Stokeslet: velocity at x due to a point force at y.
inline Mat2 stokeslet(Vec2 x, Vec2 y) {
  const Vec2 r = x - y;
  const double r2 = norm2(r);
  const double logr = 0.5 * std::log(r2);
  const double c = 1.0 / (4.0 * pi);
  Mat2 G = c / r2 * outer(r, r);
  G.a11 -= c * logr;
  G.a22 -= c * logr;
  return G;
}

// Pressure associated with the stokeslet (force f gives p = P . f).
inline Vec2 stokeslet_pressure(Vec2 x, Vec2 y) {
  const Vec2 r = x - y;
  return (1.0 / (2.0 * pi * norm2(r))) * r;
}

// Stokes double layer: velocity at x due to a double-layer density at y
// with outward normal n_y.
inline Mat2 stokes_dlp(Vec2 x, Vec2 y, Vec2 ny) {
  const Vec2 r = x - y;
  const double r2 = norm2(r);
  return (dot(r, ny) / (pi * r2 * r2)) * outer(r, r);
}

// Traction of the single layer: surface force density at x (normal n_x)
// of the flow generated by a single-layer density at y.
inline Mat2 stokes_traction(Vec2 x, Vec2 y, Vec2 nx) {
  const Vec2 r = x - y;
  const double r2 = norm2(r);
  return (-dot(r, nx) / (pi * r2 * r2)) * outer(r, r);
}

// Coincident limit shared by the Stokes double layer and the single-layer
// traction on a smooth curve: -(kappa/2pi) t t^T.
inline Mat2 stokes_diag(double kappa, Vec2 tangent) {
  return (-kappa / (2.0 * pi)) * outer(tangent, tangent);
}

// Rotlet centered at c: u(x) = strength * (x-c)^perp / (4 pi |x-c|^2).
inline Vec2 rotlet(Vec2 x, Vec2 c) {
  const Vec2 r = x - c;
  return (1.0 / (4.0 * pi * norm2(r))) * perp(r);
}

} // namespace bie2d
