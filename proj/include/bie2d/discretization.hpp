#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bie2d/common.hpp"
#include "bie2d/curve.hpp"
#include "bie2d/special.hpp"

namespace bie2d {

// ---------------------------------------------------------------------------
// Quadrature-bearing discretizations of closed curves.  Two node layouts:
//
//  * periodic: a uniform grid with the trapezoid rule, spectrally accurate
//    for smooth closed curves;
//  * panels:   composite Gauss-Legendre panels over a breakpoint partition,
//    suited to adaptive grading toward close-to-touching regions.
// ---------------------------------------------------------------------------

enum class SchemeKind { periodic, panels };

struct PanelInfo {
  double a = 0, b = 0;  // parameter interval
  int first = 0;        // index of first node
  int order = 0;        // number of Gauss-Legendre nodes
  double arclen = 0;
};

struct Discretization {
  Curve curve;
  SchemeKind scheme = SchemeKind::periodic;
  int n = 0;
  std::vector<double> s;       // parameter values
  std::vector<Vec2> x;         // positions
  std::vector<Vec2> tangent;   // unit tangents
  std::vector<Vec2> normal;    // unit outward normals
  std::vector<double> speed;   // |dx/ds|
  std::vector<double> kappa;   // signed curvature
  std::vector<double> w;       // quadrature weights for ds integrals
  std::vector<PanelInfo> panels;   // empty for periodic
  std::vector<int> node_panel;     // node -> panel index (periodic: all -1)
  double grid_s0 = 0;          // periodic: first node parameter
  double grid_h = 0;           // periodic: parameter spacing
  double arclength = 0;
  Vec2 centroid{0, 0};         // arclength-weighted centroid
  double second_moment = 0;    // int |x - centroid|^2 ds
};

namespace detail {

inline void fill_geometry(Discretization& d) {
  const int n = d.n;
  d.x.resize(n);
  d.tangent.resize(n);
  d.normal.resize(n);
  d.speed.resize(n);
  d.kappa.resize(n);
  for (int i = 0; i < n; i++) {
    const CurveSample cs = eval_curve_sample(d.curve, d.s[i]);
    d.x[i] = cs.p;
    d.tangent[i] = cs.tangent;
    d.normal[i] = cs.normal;
    d.speed[i] = cs.speed;
    d.kappa[i] = cs.kappa;
  }
  d.arclength = 0;
  Vec2 cbar{0, 0};
  for (int i = 0; i < n; i++) {
    d.arclength += d.w[i];
    cbar += d.w[i] * d.x[i];
  }
  d.centroid = cbar / d.arclength;
  d.second_moment = 0;
  for (int i = 0; i < n; i++) {
    const Vec2 r = d.x[i] - d.centroid;
    d.second_moment += d.w[i] * dot(r, r);
  }
}

} // namespace detail

// Uniform periodic grid with n nodes s_k = s0 + k * (2pi/n).
inline Discretization make_periodic(const Curve& curve, int n, double s0 = 0.0) {
  if (n < 4) throw std::invalid_argument("periodic discretization needs at least 4 nodes");
  Discretization d;
  d.curve = curve;
  d.scheme = SchemeKind::periodic;
  d.n = n;
  d.grid_s0 = s0;
  d.grid_h = 2.0 * pi / n;
  d.s.resize(n);
  d.w.resize(n);
  for (int i = 0; i < n; i++) d.s[i] = s0 + i * d.grid_h;
  d.node_panel.assign(n, -1);
  detail::fill_geometry(d);
  for (int i = 0; i < n; i++) d.w[i] = d.grid_h * d.speed[i];
  // recompute the derived per-body integrals with the final weights
  d.arclength = 0;
  Vec2 cbar{0, 0};
  for (int i = 0; i < n; i++) { d.arclength += d.w[i]; cbar += d.w[i] * d.x[i]; }
  d.centroid = cbar / d.arclength;
  d.second_moment = 0;
  for (int i = 0; i < n; i++) {
    const Vec2 r = d.x[i] - d.centroid;
    d.second_moment += d.w[i] * dot(r, r);
  }
  return d;
}

// Composite Gauss-Legendre panels over the given breakpoints.  Breakpoints
// must be strictly increasing and span exactly one period (last - first =
// 2pi is implied: the final panel runs from breakpoints.back() to
// breakpoints.front() + 2pi).
inline Discretization make_panels(const Curve& curve, std::vector<double> breakpoints, int order) {
  if (breakpoints.size() < 2) throw std::invalid_argument("need at least 2 breakpoints");
  if (order < 2) throw std::invalid_argument("panel order must be at least 2");
  std::sort(breakpoints.begin(), breakpoints.end());
  const GaussRule& rule = gauss_rule(order);
  Discretization d;
  d.curve = curve;
  d.scheme = SchemeKind::panels;
  const int np = (int)breakpoints.size();
  d.panels.resize(np);
  d.n = np * order;
  d.s.resize(d.n);
  d.w.resize(d.n);
  d.node_panel.resize(d.n);
  for (int p = 0; p < np; p++) {
    const double a = breakpoints[p];
    const double b = (p + 1 < np) ? breakpoints[p + 1] : breakpoints[0] + 2.0 * pi;
    if (b - a <= 0) throw std::invalid_argument("degenerate panel interval");
    PanelInfo& info = d.panels[p];
    info.a = a;
    info.b = b;
    info.first = p * order;
    info.order = order;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int j = 0; j < order; j++) {
      const int i = info.first + j;
      d.s[i] = mid + half * rule.x[j];
      d.w[i] = half * rule.w[j];
      d.node_panel[i] = p;
    }
  }
  detail::fill_geometry(d);
  for (int i = 0; i < d.n; i++) d.w[i] *= d.speed[i];
  for (auto& info : d.panels) {
    info.arclen = 0;
    for (int j = 0; j < info.order; j++) info.arclen += d.w[info.first + j];
  }
  d.arclength = 0;
  Vec2 cbar{0, 0};
  for (int i = 0; i < d.n; i++) { d.arclength += d.w[i]; cbar += d.w[i] * d.x[i]; }
  d.centroid = cbar / d.arclength;
  d.second_moment = 0;
  for (int i = 0; i < d.n; i++) {
    const Vec2 r = d.x[i] - d.centroid;
    d.second_moment += d.w[i] * dot(r, r);
  }
  return d;
}

inline std::vector<double> uniform_breakpoints(int count, double s0 = 0.0) {
  std::vector<double> b(count);
  for (int i = 0; i < count; i++) b[i] = s0 + 2.0 * pi * i / count;
  return b;
}

// ---------------------------------------------------------------------------
// Adaptive panel grading.  Starting from a uniform partition, panels are
// split in half whenever their arclength is large compared to the distance
// to other bodies (so near-touching regions end up with panels shorter than
// the gap), whenever a Legendre tail test says the geometry is unresolved,
// and finally rebalanced so neighboring panels differ by at most a factor
// of two in parameter length.
// ---------------------------------------------------------------------------

struct GradeOptions {
  int order = 16;
  int base_panels = 8;
  double dist_factor = 0.7;   // split if panel arclength > dist_factor * distance
  double resolve_tol = 1e-9;  // Legendre tail tolerance for the geometry
  int max_panels = 4096;
};

namespace detail {

// Legendre polynomial values P_0..P_{kmax} at x via the three-term recurrence.
inline void legendre_values(double x, int kmax, std::vector<double>& out) {
  out.resize(kmax + 1);
  out[0] = 1.0;
  if (kmax >= 1) out[1] = x;
  for (int k = 1; k < kmax; k++)
    out[k + 1] = ((2.0 * k + 1.0) * x * out[k] - k * out[k - 1]) / (k + 1.0);
}

// Relative size of the last two Legendre coefficients of samples taken at
// the nodes of `rule`; a proxy for how well the panel resolves f.
inline double legendre_tail(const GaussRule& rule, const std::vector<double>& f) {
  const int p = (int)rule.x.size();
  std::vector<double> coef(p, 0.0), P;
  for (int i = 0; i < p; i++) {
    legendre_values(rule.x[i], p - 1, P);
    for (int k = 0; k < p; k++) coef[k] += (2.0 * k + 1.0) / 2.0 * rule.w[i] * P[k] * f[i];
  }
  double lead = 0, tail = 0;
  for (int k = 0; k < p; k++) {
    lead = std::max(lead, std::abs(coef[k]));
    if (k >= p - 2) tail = std::max(tail, std::abs(coef[k]));
  }
  return tail / std::max(lead, 1e-300);
}

struct GradeInterval {
  double a, b;
  double arclen;
  double tail;         // geometry resolution proxy
  double min_dist;     // distance to other bodies
  std::vector<Vec2> pts;
};

inline GradeInterval measure_interval(const Curve& curve, const GaussRule& rule,
                                      double a, double b,
                                      const std::vector<Vec2>& other_points) {
  GradeInterval gi;
  gi.a = a;
  gi.b = b;
  gi.arclen = 0;
  const int p = (int)rule.x.size();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::vector<double> xs(p), ys(p);
  gi.pts.resize(p);
  for (int j = 0; j < p; j++) {
    const CurveSample cs = eval_curve_sample(curve, mid + half * rule.x[j]);
    gi.arclen += half * rule.w[j] * cs.speed;
    gi.pts[j] = cs.p;
    xs[j] = cs.p.x;
    ys[j] = cs.p.y;
  }
  gi.tail = std::max(legendre_tail(rule, xs), legendre_tail(rule, ys));
  gi.min_dist = std::numeric_limits<double>::infinity();
  for (const Vec2& q : other_points)
    for (const Vec2& pnt : gi.pts)
      gi.min_dist = std::min(gi.min_dist, norm(pnt - q));
  return gi;
}

} // namespace detail

// Compute graded breakpoints for `curve` given coarse point clouds sampled
// from the other bodies in the scene (pass an empty vector for an isolated
// body; only the resolution criterion applies then).
inline std::vector<double> auto_grade_breakpoints(const Curve& curve,
                                                  const std::vector<Vec2>& other_points,
                                                  const GradeOptions& opt = {},
                                                  double s0 = 0.0) {
  const GaussRule& rule = gauss_rule(opt.order);
  std::vector<detail::GradeInterval> ivs;
  for (int i = 0; i < opt.base_panels; i++) {
    const double a = s0 + 2.0 * pi * i / opt.base_panels;
    const double b = s0 + 2.0 * pi * (i + 1) / opt.base_panels;
    ivs.push_back(detail::measure_interval(curve, rule, a, b, other_points));
  }
  auto needs_split = [&](const detail::GradeInterval& gi) {
    if (gi.tail > opt.resolve_tol) return true;
    if (!other_points.empty() && gi.arclen > opt.dist_factor * gi.min_dist) return true;
    return false;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<detail::GradeInterval> next;
    next.reserve(ivs.size());
    for (const auto& gi : ivs) {
      if (needs_split(gi)) {
        const double m = 0.5 * (gi.a + gi.b);
        next.push_back(detail::measure_interval(curve, rule, gi.a, m, other_points));
        next.push_back(detail::measure_interval(curve, rule, m, gi.b, other_points));
        changed = true;
      } else {
        next.push_back(gi);
      }
    }
    ivs = std::move(next);
    if ((int)ivs.size() > opt.max_panels)
      throw std::runtime_error("auto_grade_breakpoints: panel budget exceeded");
  }
  // 2:1 balance in parameter length between cyclic neighbors.
  bool balanced = false;
  while (!balanced) {
    balanced = true;
    std::vector<detail::GradeInterval> next;
    next.reserve(ivs.size());
    const int m = (int)ivs.size();
    for (int i = 0; i < m; i++) {
      const double len = ivs[i].b - ivs[i].a;
      const double ln = ivs[(i + 1) % m].b - ivs[(i + 1) % m].a;
      const double lp = ivs[(i + m - 1) % m].b - ivs[(i + m - 1) % m].a;
      if (len > 2.0 * std::min(ln, lp) + 1e-14) {
        const double mid = 0.5 * (ivs[i].a + ivs[i].b);
        next.push_back(detail::measure_interval(curve, rule, ivs[i].a, mid, other_points));
        next.push_back(detail::measure_interval(curve, rule, mid, ivs[i].b, other_points));
        balanced = false;
      } else {
        next.push_back(ivs[i]);
      }
    }
    ivs = std::move(next);
    if ((int)ivs.size() > opt.max_panels)
      throw std::runtime_error("auto_grade_breakpoints: panel budget exceeded");
  }
  std::vector<double> breaks;
  breaks.reserve(ivs.size());
  for (const auto& gi : ivs) breaks.push_back(gi.a);
  return breaks;
}

// Coarse point cloud on a curve, used as the "other body" geometry during
// grading.
inline std::vector<Vec2> sample_curve_points(const Curve& curve, int n = 256) {
  std::vector<Vec2> pts(n);
  for (int i = 0; i < n; i++) pts[i] = eval_curve_point(curve, 2.0 * pi * i / n).p;
  return pts;
}

// ---------------------------------------------------------------------------
// Refinement and interpolation between discretizations of the same curve.
// ---------------------------------------------------------------------------

// A copy with `factor` times the resolution: periodic grids get factor*n
// nodes, panel grids split every panel into `factor` equal parameter pieces.
inline Discretization refined_copy(const Discretization& d, int factor) {
  if (factor < 2) throw std::invalid_argument("refinement factor must be >= 2");
  if (d.scheme == SchemeKind::periodic)
    return make_periodic(d.curve, d.n * factor, d.grid_s0);
  std::vector<double> breaks;
  breaks.reserve(d.panels.size() * factor);
  for (const auto& pn : d.panels)
    for (int j = 0; j < factor; j++)
      breaks.push_back(pn.a + (pn.b - pn.a) * j / factor);
  return make_panels(d.curve, std::move(breaks), d.panels[0].order);
}

// Barycentric trigonometric interpolation on a uniform periodic grid
// t_j = s0 + j*h (n = f.size() even); exact for trigonometric polynomials
// resolved by the grid.
inline double trig_interp(double s0, double h, const std::vector<double>& f, double t) {
  const int n = (int)f.size();
  double num = 0, den = 0;
  for (int j = 0; j < n; j++) {
    double dt = 0.5 * (t - (s0 + j * h));
    const double sn = std::sin(dt);
    if (std::abs(sn) < 1e-14) return f[j];
    const double c = ((j & 1) ? -1.0 : 1.0) * std::cos(dt) / sn;
    num += c * f[j];
    den += c;
  }
  return num / den;
}

// Interpolate nodal values from `src` onto the nodes of `dst`, which must
// discretize the same curve.  Panel grids require dst panels to be nested
// inside src panels (as produced by refined_copy).
inline std::vector<double> interp_density(const Discretization& src,
                                          const Discretization& dst,
                                          const std::vector<double>& f) {
  if ((int)f.size() != src.n) throw std::invalid_argument("interp_density: size mismatch");
  std::vector<double> out(dst.n);
  if (src.scheme == SchemeKind::periodic) {
    for (int i = 0; i < dst.n; i++)
      out[i] = trig_interp(src.grid_s0, src.grid_h, f, dst.s[i]);
    return out;
  }
  const GaussRule& rule = gauss_rule(src.panels[0].order);
  std::vector<double> local(src.panels[0].order);
  for (int i = 0; i < dst.n; i++) {
    const double t = dst.s[i];
    // locate the src panel containing t (intervals cover [b0, b0 + 2pi))
    int hit = -1;
    for (int p = 0; p < (int)src.panels.size(); p++) {
      double a = src.panels[p].a, b = src.panels[p].b;
      double tt = t;
      while (tt < a - 1e-13) tt += 2.0 * pi;
      while (tt > a + 2.0 * pi - 1e-13) tt -= 2.0 * pi;
      if (tt >= a - 1e-13 && tt <= b + 1e-13) { hit = p; break; }
    }
    if (hit < 0) throw std::runtime_error("interp_density: target parameter not covered");
    const PanelInfo& pn = src.panels[hit];
    double tt = t;
    while (tt < pn.a - 1e-13) tt += 2.0 * pi;
    while (tt > pn.a + 2.0 * pi - 1e-13) tt -= 2.0 * pi;
    const double xi = (2.0 * tt - pn.a - pn.b) / (pn.b - pn.a);
    for (int j = 0; j < pn.order; j++) local[j] = f[pn.first + j];
    out[i] = gauss_interp(rule, local.data(), std::min(1.0, std::max(-1.0, xi)));
  }
  return out;
}

// Fraction of spectral energy in the top 20% of modes of the nodal samples
// of a scalar function; a cheap proxy for "is this discretization resolving
// its data".  Periodic grids use the DFT, panel grids the per-panel Legendre
// tail (maximum over panels).
inline double resolution_estimate(const Discretization& d, const std::vector<double>& f) {
  if ((int)f.size() != d.n) throw std::invalid_argument("resolution_estimate: size mismatch");
  if (d.scheme == SchemeKind::periodic) {
    const int n = d.n;
    double total = 0, tail = 0;
    const int kmax = n / 2;
    for (int k = 0; k <= kmax; k++) {
      double re = 0, im = 0;
      for (int j = 0; j < n; j++) {
        const double ph = 2.0 * pi * k * j / n;
        re += f[j] * std::cos(ph);
        im -= f[j] * std::sin(ph);
      }
      const double e = (re * re + im * im) * ((k == 0 || 2 * k == n) ? 1.0 : 2.0);
      total += e;
      if (k >= (int)(0.8 * kmax)) tail += e;
    }
    return tail / std::max(total, 1e-300);
  }
  const GaussRule& rule = gauss_rule(d.panels[0].order);
  double worst = 0;
  std::vector<double> local;
  for (const auto& pn : d.panels) {
    local.assign(f.begin() + pn.first, f.begin() + pn.first + pn.order);
    worst = std::max(worst, detail::legendre_tail(rule, local));
  }
  return worst;
}

// Geometry resolution: max of the position-coordinate estimates.
inline double resolution_estimate(const Discretization& d) {
  std::vector<double> xs(d.n), ys(d.n);
  for (int i = 0; i < d.n; i++) { xs[i] = d.x[i].x; ys[i] = d.x[i].y; }
  return std::max(resolution_estimate(d, xs), resolution_estimate(d, ys));
}

// ---------------------------------------------------------------------------
// Multi-body assembly: concatenated node sets and per-body offsets.
// ---------------------------------------------------------------------------

struct Assembly {
  std::vector<Discretization> bodies;
  std::vector<int> offset;  // offset[b] = first node of body b; size nb+1
  int total = 0;

  int body_of(int node) const {
    int b = 0;
    while (node >= offset[b + 1]) b++;
    return b;
  }
};

inline Assembly assemble(std::vector<Discretization> bodies) {
  Assembly a;
  a.bodies = std::move(bodies);
  a.offset.resize(a.bodies.size() + 1);
  a.offset[0] = 0;
  for (std::size_t b = 0; b < a.bodies.size(); b++)
    a.offset[b + 1] = a.offset[b] + a.bodies[b].n;
  a.total = a.offset.back();
  return a;
}

// Minimum node-to-node distance between two bodies (diagnostic for gap
// sizes; the true geometric gap is slightly smaller).
inline double min_body_distance(const Discretization& a, const Discretization& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& p : a.x)
    for (const Vec2& q : b.x) best = std::min(best, norm(p - q));
  return best;
}

} // namespace bie2d
