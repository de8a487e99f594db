#pragma once

// Built-in named scenarios: the two-disc gap study, the five-body "splash"
// configuration, and the plate-capacitor-with-inclusions study, with their
// reference input data embedded, plus the geometry builders they share.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bie2d/curve.hpp"
#include "bie2d/discretization.hpp"
#include "bie2d/problems.hpp"

namespace bie2d {
namespace scen {

// ---------------------------------------------------------------------------
// Two unit discs with surface gap d, centers (-(1+d/2), 0) and (+(1+d/2), 0).
// ---------------------------------------------------------------------------

inline const std::vector<double>& two_disc_phi() {
  static const std::vector<double> v{0.209, -0.123};
  return v;
}

inline const std::vector<Vec2>& two_disc_v() {
  static const std::vector<Vec2> v{Vec2{2.09, -1.034}, Vec2{1.00, 0.254}};
  return v;
}

inline const std::vector<double>& two_disc_omega() {
  static const std::vector<double> v{0.12, 0.33};
  return v;
}

struct TwoDiscOptions {
  int order = 16;
  int base_panels = 8;
  double dist_factor = 0.7;   // panel arclength cap as a fraction of the gap distance
  double resolve_tol = 1e-9;
  int uniform_splits = 0;     // extra global halvings after grading
};

namespace detail {

inline std::vector<double> split_all(const std::vector<double>& bp, int times) {
  std::vector<double> out(bp);
  for (int t = 0; t < times; t++) {
    std::vector<double> nxt;
    for (std::size_t i = 0; i < out.size(); i++) {
      const double a = out[i];
      const double b = (i + 1 < out.size()) ? out[i + 1] : out[0] + 2.0 * pi;
      nxt.push_back(a);
      nxt.push_back(0.5 * (a + b));
    }
    out.swap(nxt);
  }
  return out;
}

inline std::vector<double> shift_breakpoints(const std::vector<double>& bp, double shift) {
  std::vector<double> out;
  for (double b : bp) {
    double s = std::fmod(b + shift, 2.0 * pi);
    if (s < 0) s += 2.0 * pi;
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace detail

// Panels graded against the gap; the second disc reuses the first disc's
// panel layout rotated by pi so the node sets map onto each other under the
// half-turn symmetry of the configuration.
inline Assembly two_disc_assembly(double d, const TwoDiscOptions& opt = {}) {
  if (d <= 0) throw std::invalid_argument("two_disc_assembly: gap must be positive");
  const double xc = 1.0 + 0.5 * d;
  const Curve c1 = make_disc(Vec2{-xc, 0.0}, 1.0);
  const Curve c2 = make_disc(Vec2{+xc, 0.0}, 1.0);
  GradeOptions go;
  go.order = opt.order;
  go.base_panels = opt.base_panels;
  go.dist_factor = opt.dist_factor;
  go.resolve_tol = opt.resolve_tol;
  std::vector<double> bp1 = auto_grade_breakpoints(c1, sample_curve_points(c2, 2048), go);
  bp1 = detail::split_all(bp1, opt.uniform_splits);
  const std::vector<double> bp2 = detail::shift_breakpoints(bp1, pi);
  return assemble({make_panels(c1, bp1, opt.order), make_panels(c2, bp2, opt.order)});
}

inline ElastanceRoundTrip run_two_disc_elastance(double d, const SolveConfig& cfg = {},
                                                 const TwoDiscOptions& opt = {}) {
  return roundtrip_elastance(two_disc_assembly(d, opt), two_disc_phi(), cfg);
}

inline TwoDiscOptions two_disc_mobility_options() {
  TwoDiscOptions opt;
  opt.dist_factor = 0.35;  // the traction densities sharpen faster than the potential ones
  opt.uniform_splits = 1;
  return opt;
}

inline MobilityRoundTrip run_two_disc_mobility(double d, const SolveConfig& cfg = {},
                                               const TwoDiscOptions& opt = two_disc_mobility_options()) {
  return roundtrip_mobility(two_disc_assembly(d, opt), two_disc_v(), two_disc_omega(), cfg);
}

// ---------------------------------------------------------------------------
// Splash: five trigonometric star bodies r(t) = 1 + sum a_k sin(k t).
// ---------------------------------------------------------------------------

inline const std::vector<Vec2>& splash_centers() {
  static const std::vector<Vec2> c{Vec2{-1.2, 0.0}, Vec2{1.2, 0.0}, Vec2{0.0, -2.2},
                                   Vec2{-1.2, -4.4}, Vec2{1.2, -4.4}};
  return c;
}

inline const std::vector<double>& splash_beta() {
  static const std::vector<double> b{pi, 0.0, pi / 8.0, 3.0 * pi / 4.0, -pi / 4.0};
  return b;
}

// Column j holds the twelve sine coefficients of body j.
inline const std::vector<std::vector<double>>& splash_coeffs() {
  static const std::vector<std::vector<double>> a{
      {0.012065, 0.064385, 0.006234, 0.049028, 0.030608, 0.081641, 0.099718, 0.042460, 0.076748,
       0.084684, 0.016811, 0.040454},
      {0.017038, 0.041668, 0.011991, 0.022743, 0.035266, 0.10864, 0.087338, 0.096291, 0.053323,
       0.040564, 0.085034, 0.016044},
      {0.070082, 0.094629, 0.046520, 0.038905, 0.043884, 0.030143, 0.084480, 0.008018, 0.069852,
       0.047617, 0.015078, 0.050553},
      {0.029959, 0.069290, 0.005102, 0.067634, 0.089215, 0.097489, 0.004693, 0.055024, 0.085238,
       0.070539, 0.069771, 0.051137},
      {0.012613, 0.004017, 0.07413, 0.052361, 0.084973, 0.002916, 0.081962, 0.020443, 0.069016,
       0.056950, 0.051020, 0.092286}};
  return a;
}

inline const std::vector<double>& splash_phi() {
  static const std::vector<double> p{0.120625, 0.643859, 0.062342, 0.490279, 0.306079};
  return p;
}

inline const std::vector<Vec2>& splash_v() {
  static const std::vector<Vec2> v{Vec2{-0.379375, 0.143846}, Vec2{-0.009720, -0.193921},
                                   Vec2{0.497180, -0.075401}, Vec2{0.346837, -0.331891},
                                   Vec2{-0.197527, 0.273004}};
  return v;
}

inline const std::vector<double>& splash_omega() {
  static const std::vector<double> w{-0.437658, 0.316414, 0.267477, -0.095456, -0.184353};
  return w;
}

inline Assembly splash_assembly(int n_per_body = 512) {
  std::vector<Discretization> bodies;
  for (int j = 0; j < 5; j++) {
    const Curve c = make_fourier_star(splash_centers()[j], splash_beta()[j], splash_coeffs()[j]);
    bodies.push_back(make_periodic(c, n_per_body));
  }
  return assemble(std::move(bodies));
}

inline ElastanceRoundTrip run_splash_elastance(const SolveConfig& cfg = {}, int n_per_body = 512) {
  return roundtrip_elastance(splash_assembly(n_per_body), splash_phi(), cfg);
}

inline MobilityRoundTrip run_splash_mobility(const SolveConfig& cfg = {}, int n_per_body = 512) {
  return roundtrip_mobility(splash_assembly(n_per_body), splash_v(), splash_omega(), cfg);
}

// ---------------------------------------------------------------------------
// Plate capacitor with an m x 10 lattice of elliptic inclusions.  Plates are
// rounded bars shifted to y = +-1.1 (body 0 on top); inclusion (j,k) sits at
// (-0.9 + 1.8(k-1/2)/10, -0.9 + 1.8(j-1/2)/m) with area 0.002/m and aspect
// ratio A = semi_x/semi_y.
// ---------------------------------------------------------------------------

struct NanocompositeOptions {
  int plate_n = 800;
  int ellipse_n = 600;
};

inline Assembly nanocomposite_assembly(int m, double A, const NanocompositeOptions& opt = {}) {
  if (m < 0) throw std::invalid_argument("nanocomposite_assembly: m must be nonnegative");
  if (m > 0 && A <= 0) throw std::invalid_argument("nanocomposite_assembly: aspect must be positive");
  std::vector<Discretization> bodies;
  // Midpoint-offset sampling keeps nodes off the end-cap/mirror seams.
  const double s0 = -0.5 * pi + pi / opt.plate_n;
  bodies.push_back(make_periodic(make_rounded_bar(+1.1), opt.plate_n, s0));
  bodies.push_back(make_periodic(make_rounded_bar(-1.1), opt.plate_n, s0));
  if (m > 0) {
    const double ax = std::sqrt(0.002 * A / (m * pi));
    const double ay = std::sqrt(0.002 / (m * pi * A));
    std::vector<Vec2> centers;
    // Cell-centred lattice filling [-0.9, 0.9]^2 between the plates.
    for (int j = 1; j <= m; j++)
      for (int k = 1; k <= 10; k++)
        centers.push_back(Vec2{-0.9 + 1.8 * (k - 0.5) / 10.0, -0.9 + 1.8 * (j - 0.5) / m});
    // Identical axis-aligned ellipses overlap iff the center offset lies in
    // the doubled ellipse.
    for (std::size_t i = 0; i < centers.size(); i++) {
      for (std::size_t j = i + 1; j < centers.size(); j++) {
        const Vec2 dc = centers[j] - centers[i];
        const double t = (dc.x * dc.x) / (4.0 * ax * ax) + (dc.y * dc.y) / (4.0 * ay * ay);
        if (t < 1.0)
          throw std::invalid_argument("nanocomposite_assembly: inclusions " + std::to_string(i) +
                                      " and " + std::to_string(j) + " overlap (aspect too extreme)");
      }
      if (std::abs(centers[i].y) + ay >= 1.0)
        throw std::invalid_argument("nanocomposite_assembly: inclusion " + std::to_string(i) +
                                    " intersects a plate");
    }
    for (const Vec2& c : centers)
      bodies.push_back(make_periodic(make_ellipse(c, ax, ay), opt.ellipse_n));
  }
  return assemble(std::move(bodies));
}

struct EffectiveCapacitance {
  double C_tilde = 0.0;
  double V1 = 0.0, V2 = 0.0;
  SolveReport report;
  Assembly assembly;
};

// Unit charges +-1 on the plates, neutral inclusions; C = Q / (V1 - V2).
inline EffectiveCapacitance effective_capacitance(int m, double A, const SolveConfig& cfg = {},
                                                  const NanocompositeOptions& opt = {}) {
  Assembly a = nanocomposite_assembly(m, A, opt);
  std::vector<double> q(a.bodies.size(), 0.0);
  q[0] = +1.0;
  q[1] = -1.0;
  EffectiveCapacitance ec;
  ec.report = solve_elastance(a, q, 0.0, cfg);
  ec.V1 = ec.report.phi[0];
  ec.V2 = ec.report.phi[1];
  ec.C_tilde = 1.0 / (ec.V1 - ec.V2);
  ec.assembly = std::move(a);
  return ec;
}

} // namespace scen
} // namespace bie2d
