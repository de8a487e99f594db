#include <catch2/catch_amalgamated.hpp>

#include "bie2d/bie2d.hpp"

#include <cmath>
#include <vector>

using namespace bie2d;

namespace {

std::vector<Curve> reference_curves() {
  return {
      make_disc(Vec2{0.4, -1.1}, 1.7),
      make_ellipse(Vec2{-0.2, 0.3}, 1.4, 0.6, 0.35),
      make_fourier_star(Vec2{0.1, 0.2}, 0.8, {0.12, -0.07, 0.0, 0.05, -0.02}),
      make_rounded_bar(1.1),
  };
}

// Sixth-order central finite differences of the position, used as an
// independent oracle for the analytic derivatives.
Vec2 fd_dp(const Curve& c, double s, double h) {
  auto p = [&](double t) { return eval_curve_point(c, t).p; };
  const Vec2 v = (45.0 * (p(s + h) - p(s - h)) - 9.0 * (p(s + 2 * h) - p(s - 2 * h)) +
                  (p(s + 3 * h) - p(s - 3 * h))) /
                 (60.0 * h);
  return v;
}

Vec2 fd_ddp(const Curve& c, double s, double h) {
  auto p = [&](double t) { return eval_curve_point(c, t).p; };
  const Vec2 v = (-490.0 * p(s) + 270.0 * (p(s + h) + p(s - h)) -
                  27.0 * (p(s + 2 * h) + p(s - 2 * h)) + 2.0 * (p(s + 3 * h) + p(s - 3 * h))) /
                 (180.0 * h * h);
  return v;
}

double shoelace_area(const Curve& c, int n) {
  double area = 0.0;
  for (int i = 0; i < n; i++) {
    const CurvePoint cp = eval_curve_point(c, 2.0 * pi * i / n);
    area += 0.5 * cross(cp.p, cp.dp) * (2.0 * pi / n);
  }
  return area;
}

}  // namespace

TEST_CASE("curves are 2pi-periodic and regular", "[curve]") {
  for (const Curve& c : reference_curves()) {
    for (double s : {0.0, 0.37, 1.9, 3.14159, 5.5}) {
      const CurvePoint a = eval_curve_point(c, s);
      const CurvePoint b = eval_curve_point(c, s + 2.0 * pi);
      REQUIRE(norm(a.p - b.p) < 1e-12);
      REQUIRE(norm(a.dp - b.dp) < 1e-11);
      REQUIRE(norm(a.dp) > 1e-3);  // regular parametrization
    }
  }
}

TEST_CASE("curves are positively oriented", "[curve]") {
  for (const Curve& c : reference_curves()) {
    REQUIRE(shoelace_area(c, 4096) > 0.0);
  }
}

TEST_CASE("analytic derivatives match finite differences", "[curve]") {
  for (const Curve& c : reference_curves()) {
    for (double s : {0.11, 0.93, 2.2, 3.7, 4.9, 6.1}) {
      const CurvePoint cp = eval_curve_point(c, s);
      REQUIRE(norm(cp.dp - fd_dp(c, s, 1e-3)) < 1e-7);
      REQUIRE(norm(cp.ddp - fd_ddp(c, s, 1e-3)) < 1e-5);
    }
  }
}

TEST_CASE("disc geometry: radius, curvature, orientation", "[curve]") {
  const Curve c = make_disc(Vec2{0.4, -1.1}, 1.7);
  for (double s : {0.0, 1.0, 2.5, 4.4}) {
    const CurveSample cs = eval_curve_sample(c, s);
    REQUIRE(std::abs(norm(cs.p - c.center) - 1.7) < 1e-14);
    REQUIRE(std::abs(cs.kappa - 1.0 / 1.7) < 1e-13);
    REQUIRE(std::abs(cs.speed - 1.7) < 1e-14);
    // Outward normal and tangent/normal handedness.
    REQUIRE(dot(cs.normal, cs.p - c.center) > 0.0);
    REQUIRE(std::abs(cross(cs.tangent, cs.normal) + 1.0) < 1e-14);
    REQUIRE(std::abs(norm(cs.tangent) - 1.0) < 1e-14);
    REQUIRE(std::abs(norm(cs.normal) - 1.0) < 1e-14);
  }
}

TEST_CASE("ellipse curvature at the axis points", "[curve]") {
  const double a = 1.4, b = 0.6;
  const Curve c = make_ellipse(Vec2{0, 0}, a, b, 0.0);
  // kappa = a b / (a^2 sin^2 t + b^2 cos^2 t)^{3/2}: a/b^2 and b/a^2 at the
  // major/minor vertices.
  REQUIRE(std::abs(eval_curve_sample(c, 0.0).kappa - a / (b * b)) < 1e-12);
  REQUIRE(std::abs(eval_curve_sample(c, 0.5 * pi).kappa - b / (a * a)) < 1e-12);
  // Rotation shifts the whole sample rigidly.
  const Curve cr = make_ellipse(Vec2{0, 0}, a, b, 0.7);
  const CurveSample s0 = eval_curve_sample(c, 1.3);
  const CurveSample s1 = eval_curve_sample(cr, 1.3);
  REQUIRE(std::abs(norm(s1.p) - norm(s0.p)) < 1e-13);
  REQUIRE(std::abs(s1.kappa - s0.kappa) < 1e-13);
}

TEST_CASE("fourier star matches its radial definition", "[curve]") {
  const Vec2 ctr{0.1, 0.2};
  const double beta = 0.8;
  const std::vector<double> a{0.12, -0.07, 0.0, 0.05, -0.02};
  const Curve c = make_fourier_star(ctr, beta, a);
  for (double t : {0.0, 0.5, 1.7, 3.0, 4.2, 5.9}) {
    double r = 1.0;
    for (std::size_t k = 0; k < a.size(); k++) r += a[k] * std::sin((k + 1) * t);
    const Vec2 p = eval_curve_point(c, t).p;
    REQUIRE(std::abs(norm(p - ctr) - r) < 1e-13);
    const Vec2 dir{std::cos(t + beta), std::sin(t + beta)};
    REQUIRE(norm(p - ctr - r * dir) < 1e-13);
  }
}

TEST_CASE("rounded bar: mirror symmetry, extents, seam smoothness", "[curve]") {
  const double shift = 1.1;
  const Curve c = make_rounded_bar(shift);
  // Mirror symmetry x(pi - s) = -x(s), y(pi - s) = y(s).
  for (double s : {0.05, 0.4, 1.1, 1.5, -0.7}) {
    const Vec2 p1 = eval_curve_point(c, s).p;
    const Vec2 p2 = eval_curve_point(c, pi - s).p;
    REQUIRE(std::abs(p1.x + p2.x) < 1e-13);
    REQUIRE(std::abs(p1.y - p2.y) < 1e-13);
  }
  // Extents: caps at |x| ~ 1.1 (1 - (2/pi) / (10 sqrt(pi))), |y - shift| <= 0.1.
  const double cap = 1.1 * (1.0 - (2.0 / pi) / (10.0 * std::sqrt(pi)));
  double xmax = 0.0, ymax = 0.0;
  for (int i = 0; i < 4096; i++) {
    const Vec2 p = eval_curve_point(c, 2.0 * pi * i / 4096).p;
    xmax = std::max(xmax, std::abs(p.x));
    ymax = std::max(ymax, std::abs(p.y - shift));
  }
  REQUIRE(std::abs(xmax - cap) < 1e-6);
  REQUIRE(ymax < 0.1 + 1e-9);
  REQUIRE(ymax > 0.0999);
  // The two parameter branches join smoothly at s = pi/2.
  const double eps = 1e-7;
  const CurvePoint l = eval_curve_point(c, 0.5 * pi - eps);
  const CurvePoint r = eval_curve_point(c, 0.5 * pi + eps);
  REQUIRE(norm(l.p - r.p) < 1e-6);
  REQUIRE(norm(l.dp - r.dp) < 1e-5);
  REQUIRE(c.center.x == 0.0);
  REQUIRE(c.center.y == shift);
}

TEST_CASE("rounded bar arclength is grid-converged", "[curve]") {
  const Curve c = make_rounded_bar(0.0);
  const double a1 = make_periodic(c, 1024).arclength;
  const double a2 = make_periodic(c, 2048).arclength;
  REQUIRE(std::abs(a1 - a2) < 1e-11);
  // Perimeter of a 2.1 x 0.2 rounded slab: between the inscribed rectangle
  // perimeter and the circumscribed stadium perimeter.
  REQUIRE(a1 > 4.0);
  REQUIRE(a1 < 5.2);
}

TEST_CASE("eval_curve batches match pointwise sampling", "[curve]") {
  const Curve c = make_fourier_star(Vec2{0, 0}, 0.3, {0.1, 0.05});
  const std::vector<double> params{0.0, 0.9, 2.8, 5.1};
  const std::vector<CurveSample> batch = eval_curve(c, params);
  for (std::size_t i = 0; i < params.size(); i++) {
    const CurveSample s = eval_curve_sample(c, params[i]);
    REQUIRE(norm(batch[i].p - s.p) == 0.0);
    REQUIRE(batch[i].kappa == s.kappa);
  }
}
