#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bie2d/common.hpp"
#include "bie2d/special.hpp"

namespace bie2d {

// ---------------------------------------------------------------------------
// Closed parametric curves on [0, 2pi), positively oriented (interior on the
// left), with analytic first and second derivatives so that tangents,
// outward normals and curvature are available without numerical
// differentiation.
// ---------------------------------------------------------------------------

enum class CurveKind { disc, ellipse, fourier_star, rounded_bar };

struct Curve {
  CurveKind kind = CurveKind::disc;
  Vec2 center{0, 0};
  double radius = 1.0;              // disc
  double semi_x = 1.0, semi_y = 1.0; // ellipse semi-axes
  double rotation = 0.0;            // ellipse (radians); fourier_star offset beta
  std::vector<double> star_coeffs;  // fourier_star: r = 1 + sum a_k sin(k theta)
  double bar_shift_y = 0.0;         // rounded_bar vertical offset
};

struct CurvePoint {
  Vec2 p;    // position
  Vec2 dp;   // d p / d s
  Vec2 ddp;  // d^2 p / d s^2
};

struct CurveSample {
  Vec2 p;
  Vec2 tangent;   // unit
  Vec2 normal;    // unit outward
  double speed;   // |dp/ds|
  double kappa;   // signed curvature (positive for a CCW circle)
};

inline Curve make_disc(Vec2 center, double radius) {
  if (radius <= 0) throw std::invalid_argument("disc radius must be positive");
  Curve c;
  c.kind = CurveKind::disc;
  c.center = center;
  c.radius = radius;
  return c;
}

inline Curve make_ellipse(Vec2 center, double semi_x, double semi_y, double rotation = 0.0) {
  if (semi_x <= 0 || semi_y <= 0) throw std::invalid_argument("ellipse semi-axes must be positive");
  Curve c;
  c.kind = CurveKind::ellipse;
  c.center = center;
  c.semi_x = semi_x;
  c.semi_y = semi_y;
  c.rotation = rotation;
  return c;
}

// Star-shaped body r(theta) = 1 + sum_k a_k sin(k theta), sampled at angle
// theta + beta around `center`.
inline Curve make_fourier_star(Vec2 center, double beta, std::vector<double> coeffs) {
  Curve c;
  c.kind = CurveKind::fourier_star;
  c.center = center;
  c.rotation = beta;
  c.star_coeffs = std::move(coeffs);
  return c;
}

inline Curve make_rounded_bar(double shift_y) {
  Curve c;
  c.kind = CurveKind::rounded_bar;
  c.bar_shift_y = shift_y;
  c.center = Vec2{0.0, shift_y};
  return c;
}

namespace detail {

// Right end-cap piece of the rounded bar on s in [-pi/2, pi/2]; the other
// half is this piece mirrored in x.  The exponential terms die off many
// orders below machine precision at the joins, so the assembled curve is
// smooth for all practical purposes.
inline void rounded_bar_base(double s, double& x, double& dx, double& ddx,
                             double& y, double& dy, double& ddy) {
  const double sqrt_pi = 1.7724538509055160273;
  const double e100 = std::exp(-100.0 * s * s);
  const double erf10 = erf_internal(10.0 * s);
  // g is the standard mollified |s| built from erf; its Gaussian and error
  // function pieces are paired so that g' = erf(10s) exactly.
  const double g = s * erf10 + e100 / (10.0 * sqrt_pi);
  const double dg = erf10;
  const double ddg = (20.0 / sqrt_pi) * e100;
  x = 1.1 * (1.0 - (2.0 / pi) * g);
  dx = -1.1 * (2.0 / pi) * dg;
  ddx = -1.1 * (2.0 / pi) * ddg;

  const double e49 = std::exp(-49.0 * s * s);
  y = 0.1 * erf_internal(7.0 * s);
  dy = (1.4 / sqrt_pi) * e49;
  ddy = (1.4 / sqrt_pi) * (-98.0 * s) * e49;
}

} // namespace detail

inline CurvePoint eval_curve_point(const Curve& c, double s) {
  CurvePoint out;
  switch (c.kind) {
    case CurveKind::disc: {
      const double cs = std::cos(s), sn = std::sin(s);
      out.p = c.center + Vec2{c.radius * cs, c.radius * sn};
      out.dp = {-c.radius * sn, c.radius * cs};
      out.ddp = {-c.radius * cs, -c.radius * sn};
      break;
    }
    case CurveKind::ellipse: {
      const double cs = std::cos(s), sn = std::sin(s);
      const Vec2 q{c.semi_x * cs, c.semi_y * sn};
      const Vec2 dq{-c.semi_x * sn, c.semi_y * cs};
      const Vec2 ddq{-c.semi_x * cs, -c.semi_y * sn};
      const double cr = std::cos(c.rotation), sr = std::sin(c.rotation);
      const Mat2 R{cr, -sr, sr, cr};
      out.p = c.center + R * q;
      out.dp = R * dq;
      out.ddp = R * ddq;
      break;
    }
    case CurveKind::fourier_star: {
      double r = 1.0, dr = 0.0, ddr = 0.0;
      for (std::size_t k = 1; k <= c.star_coeffs.size(); k++) {
        const double a = c.star_coeffs[k - 1];
        const double kd = (double)k;
        r += a * std::sin(kd * s);
        dr += a * kd * std::cos(kd * s);
        ddr -= a * kd * kd * std::sin(kd * s);
      }
      const double phi = s + c.rotation;
      const double cs = std::cos(phi), sn = std::sin(phi);
      const Vec2 e{cs, sn}, ep{-sn, cs};
      out.p = c.center + r * e;
      out.dp = dr * e + r * ep;
      out.ddp = ddr * e + 2.0 * dr * ep - r * e;
      break;
    }
    case CurveKind::rounded_bar: {
      // Wrap the parameter into [-pi/2, 3pi/2); the base formula covers
      // [-pi/2, pi/2] and the mirrored piece x -> -x covers the rest.
      double t = std::fmod(s + pi / 2.0, 2.0 * pi);
      if (t < 0) t += 2.0 * pi;
      t -= pi / 2.0;
      double x, dx, ddx, y, dy, ddy;
      if (t <= pi / 2.0) {
        detail::rounded_bar_base(t, x, dx, ddx, y, dy, ddy);
      } else {
        double xb, dxb, ddxb, yb, dyb, ddyb;
        detail::rounded_bar_base(pi - t, xb, dxb, ddxb, yb, dyb, ddyb);
        x = -xb;  dx = dxb;   ddx = -ddxb;
        y = yb;   dy = -dyb;  ddy = ddyb;
      }
      out.p = {x, y + c.bar_shift_y};
      out.dp = {dx, dy};
      out.ddp = {ddx, ddy};
      break;
    }
  }
  return out;
}

inline CurveSample eval_curve_sample(const Curve& c, double s) {
  const CurvePoint cp = eval_curve_point(c, s);
  CurveSample out;
  out.p = cp.p;
  out.speed = norm(cp.dp);
  if (out.speed <= 0) throw std::runtime_error("degenerate curve parametrization (zero speed)");
  out.tangent = cp.dp / out.speed;
  out.normal = {out.tangent.y, -out.tangent.x}; // outward for CCW orientation
  out.kappa = cross(cp.dp, cp.ddp) / (out.speed * out.speed * out.speed);
  return out;
}

// Batch evaluation at a list of parameter values.
inline std::vector<CurveSample> eval_curve(const Curve& c, const std::vector<double>& params) {
  std::vector<CurveSample> out;
  out.reserve(params.size());
  for (double s : params) out.push_back(eval_curve_sample(c, s));
  return out;
}

} // namespace bie2d
