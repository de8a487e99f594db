#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "bie2d/common.hpp"
#include "bie2d/discretization.hpp"
#include "bie2d/kernels.hpp"

namespace bie2d {

// ---------------------------------------------------------------------------
// Layer-potential evaluation.
//
// All solve-time operators use smooth kernels (double layers, single-layer
// tractions) which plain Nystrom quadrature handles once the grading rules
// in discretization.hpp are obeyed.  This header supplies everything else:
//
//  * on-surface single layers (log-singular): a spectral product rule on
//    periodic grids, one-sided expansions on panel grids;
//  * near-surface targets: local expansions about off-surface centers
//    (QBX), backed by an upsampled source grid;
//  * moderately near targets: plain quadrature on the upsampled grid;
//  * far targets: plain quadrature.
// ---------------------------------------------------------------------------

struct NearEvalOptions {
  int qbx_order = 16;         // truncation order of the local expansions
  int upsample = 16;          // refinement factor of the fine source grid
  // Expansion radius relative to the local spacing.  The factors differ
  // because "spacing" is the node spacing on periodic grids but the panel
  // arclength on panel grids: the radius must clear the fine-grid spacing
  // by a wide margin (coefficient quadrature) yet stay small against the
  // local feature scale (expansion truncation).
  double radius_factor_periodic = 1.5;
  double radius_factor_panel = 0.5;
  double curvature_cap = 0.25; // radius also bounded by cap/|kappa|
  double qbx_cut = 0.5;       // dist < qbx_cut*h       -> expansion
  double direct_cut_periodic = 5.0; // dist >= cut*h    -> plain quadrature
  double direct_cut_panel = 1.5;    // panel grids resolve nearness sooner
};

// Local length scale at node i: node spacing for periodic grids, panel
// arclength for panel grids (the scale at which plain quadrature degrades).
inline double local_spacing(const Discretization& d, int i) {
  if (d.scheme == SchemeKind::periodic) return d.grid_h * d.speed[i];
  return d.panels[d.node_panel[i]].arclen;
}

inline double direct_cut(const Discretization& d, const NearEvalOptions& opt) {
  return d.scheme == SchemeKind::periodic ? opt.direct_cut_periodic : opt.direct_cut_panel;
}

// ---------------------------------------------------------------------------
// Spectral product quadrature for the periodic log kernel: weights R_m with
//   int_0^{2pi} log(4 sin^2((t_i - tau)/2)) f(tau) dtau ~ sum_j R_{|i-j|} f(t_j).
// ---------------------------------------------------------------------------

inline std::vector<double> kress_weights(int n) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("kress_weights: n must be even and >= 4");
  std::vector<double> R(n);
  for (int m = 0; m < n; m++) {
    double s = 0;
    for (int k = 1; k < n / 2; k++) s += std::cos(2.0 * pi * k * m / n) / k;
    R[m] = -(4.0 * pi / n) * s - (4.0 * pi / (n * n)) * std::cos(pi * m);
  }
  return R;
}

namespace detail {

// ---------------------------------------------------------------------------
// Local-expansion primitives.  Both integrals are computed as direct sums
// with the kernel replaced by its order-p local expansion about the center
// c, which is exactly the truncated-expansion value and is stable because
// |z - c| / |w - c| <= 1 for every admissible target.
// ---------------------------------------------------------------------------

using cplx = std::complex<double>;

// Truncated int log|z-w| mu(w) ds about c.
inline double qbx_log_sum(const Discretization& src, const std::vector<double>& mu,
                          Vec2 c, Vec2 z, int p) {
  const cplx zeta(z.x - c.x, z.y - c.y);
  double acc = 0;
  for (int j = 0; j < src.n; j++) {
    const cplx b(src.x[j].x - c.x, src.x[j].y - c.y);
    const cplx q = -zeta / b; // = (z-c)/(c-w)
    // log|z-w| ~ log|c-w| + Re sum_{k=1}^p (-1)^{k-1} q^k / k
    cplx qs = q;
    double series = 0;
    for (int k = 1; k <= p; k++) {
      series += ((k & 1) ? 1.0 : -1.0) * (qs.real()) / k;
      qs *= q;
    }
    acc += mu[j] * src.w[j] * (std::log(std::abs(b)) + series);
  }
  return acc;
}

// Truncated int nu(w) / (z-w) ds about c.
inline cplx qbx_cauchy_sum(const Discretization& src, const std::vector<cplx>& nu,
                           Vec2 c, Vec2 z, int p) {
  const cplx zeta(z.x - c.x, z.y - c.y);
  cplx acc = 0;
  for (int j = 0; j < src.n; j++) {
    const cplx b(src.x[j].x - c.x, src.x[j].y - c.y);
    const cplx t = zeta / b;
    // 1/(z-w) = -(1/b) sum_{k>=0} t^k
    cplx geo = 1.0, tp = 1.0;
    for (int k = 1; k <= p; k++) {
      tp *= t;
      geo += tp;
    }
    acc += nu[j] * src.w[j] * (-geo / b);
  }
  return acc;
}

// Closest point on the curve to z, starting Newton from parameter seed.
struct FootPoint {
  double param = 0;
  Vec2 x, normal, tangent;
  double dist = 0, kappa = 0, spacing = 0;
  int side = +1; // sign(dot(z - x, normal)); +1 also for on-surface targets
};

inline FootPoint closest_point(const Discretization& d, Vec2 z, int seed_node) {
  double tau = d.s[seed_node];
  const double step_cap = (d.scheme == SchemeKind::periodic)
                              ? 2.0 * d.grid_h
                              : 2.0 * (d.panels[d.node_panel[seed_node]].b -
                                       d.panels[d.node_panel[seed_node]].a);
  for (int it = 0; it < 12; it++) {
    const CurvePoint cp = eval_curve_point(d.curve, tau);
    const Vec2 r = cp.p - z;
    const double f1 = dot(r, cp.dp);
    const double f2 = dot(cp.dp, cp.dp) + dot(r, cp.ddp);
    if (f2 <= 0) break;
    double step = -f1 / f2;
    if (step > step_cap) step = step_cap;
    if (step < -step_cap) step = -step_cap;
    tau += step;
    if (std::abs(step) < 1e-14) break;
  }
  FootPoint fp;
  fp.param = tau;
  const CurveSample cs = eval_curve_sample(d.curve, tau);
  fp.x = cs.p;
  fp.normal = cs.normal;
  fp.tangent = cs.tangent;
  fp.kappa = cs.kappa;
  fp.dist = norm(z - fp.x);
  const double dp = dot(z - fp.x, fp.normal);
  fp.side = (dp >= 0) ? +1 : -1;
  fp.spacing = local_spacing(d, seed_node);
  return fp;
}

inline int nearest_node(const Discretization& d, Vec2 z) {
  int best = 0;
  double bd = norm2(z - d.x[0]);
  for (int j = 1; j < d.n; j++) {
    const double t = norm2(z - d.x[j]);
    if (t < bd) { bd = t; best = j; }
  }
  return best;
}

// Expansion center for a target near the surface.  `side` overrides the
// geometric side when the target sits on the curve itself.
inline Vec2 expansion_center(const FootPoint& fp, double radius_sign) {
  return fp.x + radius_sign * fp.normal;
}

inline double expansion_radius(const Discretization& d, const FootPoint& fp,
                               const NearEvalOptions& opt) {
  const double factor = d.scheme == SchemeKind::periodic ? opt.radius_factor_periodic
                                                         : opt.radius_factor_panel;
  double r = factor * fp.spacing;
  const double cap = opt.curvature_cap / std::max(std::abs(fp.kappa), 1e-12);
  return std::min(r, cap);
}

// Shared per-call scratch: the upsampled source and densities on it.
struct FineSource {
  Discretization fine;
  bool built = false;

  void ensure(const Discretization& d, int factor) {
    if (!built) {
      fine = refined_copy(d, factor);
      built = true;
    }
  }
};

} // namespace detail

// ---------------------------------------------------------------------------
// On-surface single layers.
// ---------------------------------------------------------------------------

// int_Gamma log|x_i - y| f(y) ds for every node i of d, where f is given at
// the nodes.  This is the common core of the Laplace and Stokes on-surface
// single layers.
inline std::vector<double> self_log_layer(const Discretization& d, const std::vector<double>& f,
                                          const NearEvalOptions& opt = {}) {
  if ((int)f.size() != d.n) throw std::invalid_argument("self_log_layer: size mismatch");
  std::vector<double> out(d.n, 0.0);
  if (d.scheme == SchemeKind::periodic) {
    // log|x_i - x_j| = (1/2) log(4 sin^2((t_i-t_j)/2)) + smooth remainder
    const std::vector<double> R = kress_weights(d.n);
    for (int i = 0; i < d.n; i++) {
      double acc = 0;
      for (int j = 0; j < d.n; j++) {
        const double g = f[j] * d.speed[j]; // integrand w.r.t. parameter
        const int m = (i - j + d.n) % d.n;
        double smooth;
        if (i == j) {
          smooth = std::log(d.speed[i]);
        } else {
          const double sn = 2.0 * std::abs(std::sin(0.5 * (d.s[i] - d.s[j])));
          smooth = std::log(norm(d.x[i] - d.x[j]) / sn);
        }
        acc += 0.5 * R[m] * g + d.grid_h * smooth * g;
      }
      out[i] = acc;
    }
    return out;
  }
  // Panel grids: one-sided expansion at every node (the single layer is
  // continuous across the curve, so either side gives the surface value).
  detail::FineSource fs;
  fs.ensure(d, opt.upsample);
  const std::vector<double> ffine = interp_density(d, fs.fine, f);
  for (int i = 0; i < d.n; i++) {
    detail::FootPoint fp;
    fp.param = d.s[i];
    fp.x = d.x[i];
    fp.normal = d.normal[i];
    fp.tangent = d.tangent[i];
    fp.kappa = d.kappa[i];
    fp.dist = 0;
    fp.side = +1;
    fp.spacing = local_spacing(d, i);
    const double r = detail::expansion_radius(d, fp, opt);
    const Vec2 c = detail::expansion_center(fp, r);
    out[i] = detail::qbx_log_sum(fs.fine, ffine, c, d.x[i], opt.qbx_order);
  }
  return out;
}

// Laplace single layer S mu on the surface nodes.
inline std::vector<double> self_laplace_slp(const Discretization& d, const std::vector<double>& mu,
                                            const NearEvalOptions& opt = {}) {
  std::vector<double> out = self_log_layer(d, mu, opt);
  for (double& v : out) v *= -1.0 / (2.0 * pi);
  return out;
}

// Laplace double layer on the surface: principal value plus side * mu/2
// (side +1 = exterior limit, -1 = interior limit, 0 = principal value).
inline std::vector<double> self_laplace_dlp(const Discretization& d, const std::vector<double>& mu,
                                            int side = 0) {
  std::vector<double> out(d.n, 0.0);
  for (int i = 0; i < d.n; i++) {
    double acc = 0;
    for (int j = 0; j < d.n; j++) {
      const double k = (i == j) ? laplace_dlp_diag(d.kappa[i])
                                : laplace_dlp(d.x[i], d.x[j], d.normal[j]);
      acc += k * mu[j] * d.w[j];
    }
    out[i] = acc + 0.5 * side * mu[i];
  }
  return out;
}

// Adjoint double layer (normal derivative of S): principal value plus
// -side * mu/2 (side +1 = exterior limit, -1 = interior limit).
inline std::vector<double> self_laplace_dlp_adj(const Discretization& d, const std::vector<double>& mu,
                                                int side = 0) {
  std::vector<double> out(d.n, 0.0);
  for (int i = 0; i < d.n; i++) {
    double acc = 0;
    for (int j = 0; j < d.n; j++) {
      const double k = (i == j) ? laplace_dlp_diag(d.kappa[i])
                                : laplace_dlp_adj(d.x[i], d.x[j], d.normal[i]);
      acc += k * mu[j] * d.w[j];
    }
    out[i] = acc - 0.5 * side * mu[i];
  }
  return out;
}

// Stokes single layer on the surface nodes (densities and results are
// interleaved pairs).
inline std::vector<double> self_stokes_slp(const Discretization& d, const std::vector<double>& mu,
                                           const NearEvalOptions& opt = {}) {
  if ((int)mu.size() != 2 * d.n) throw std::invalid_argument("self_stokes_slp: size mismatch");
  std::vector<double> m1(d.n), m2(d.n);
  for (int j = 0; j < d.n; j++) { m1[j] = mu[2 * j]; m2[j] = mu[2 * j + 1]; }
  const std::vector<double> A1 = self_log_layer(d, m1, opt);
  const std::vector<double> A2 = self_log_layer(d, m2, opt);
  std::vector<double> out(2 * d.n, 0.0);
  for (int i = 0; i < d.n; i++) {
    // smooth part: int (r r^T / |r|^2) mu ds, diagonal limit t t^T
    Vec2 acc{0, 0};
    for (int j = 0; j < d.n; j++) {
      Mat2 T;
      if (i == j) {
        T = outer(d.tangent[i], d.tangent[i]);
      } else {
        const Vec2 r = d.x[i] - d.x[j];
        T = (1.0 / norm2(r)) * outer(r, r);
      }
      acc += d.w[j] * (T * Vec2{m1[j], m2[j]});
    }
    out[2 * i] = (-A1[i] + acc.x) / (4.0 * pi);
    out[2 * i + 1] = (-A2[i] + acc.y) / (4.0 * pi);
  }
  return out;
}

// Stokes double layer on the surface: principal value plus side * mu/2.
inline std::vector<double> self_stokes_dlp(const Discretization& d, const std::vector<double>& mu,
                                           int side = 0) {
  std::vector<double> out(2 * d.n, 0.0);
  for (int i = 0; i < d.n; i++) {
    Vec2 acc{0, 0};
    for (int j = 0; j < d.n; j++) {
      const Mat2 K = (i == j) ? stokes_diag(d.kappa[i], d.tangent[i])
                              : stokes_dlp(d.x[i], d.x[j], d.normal[j]);
      acc += d.w[j] * (K * Vec2{mu[2 * j], mu[2 * j + 1]});
    }
    out[2 * i] = acc.x + 0.5 * side * mu[2 * i];
    out[2 * i + 1] = acc.y + 0.5 * side * mu[2 * i + 1];
  }
  return out;
}

// Traction of the Stokes single layer on the surface: principal value plus
// -side * mu/2 (side -1: value measured approaching from the fluid side of
// an exterior problem is (+1/2 I + K) mu).
inline std::vector<double> self_stokes_traction(const Discretization& d, const std::vector<double>& mu,
                                                int side = 0) {
  std::vector<double> out(2 * d.n, 0.0);
  for (int i = 0; i < d.n; i++) {
    Vec2 acc{0, 0};
    for (int j = 0; j < d.n; j++) {
      const Mat2 K = (i == j) ? stokes_diag(d.kappa[i], d.tangent[i])
                              : stokes_traction(d.x[i], d.x[j], d.normal[i]);
      acc += d.w[j] * (K * Vec2{mu[2 * j], mu[2 * j + 1]});
    }
    out[2 * i] = acc.x - 0.5 * side * mu[2 * i];
    out[2 * i + 1] = acc.y - 0.5 * side * mu[2 * i + 1];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Arbitrary-target evaluation with distance-based tiering.
// ---------------------------------------------------------------------------

namespace detail {

enum class Tier { direct, refined, qbx };

inline Tier pick_tier(const Discretization& d, const NearEvalOptions& opt,
                      double dist, double h) {
  if (dist >= direct_cut(d, opt) * h) return Tier::direct;
  if (dist >= opt.qbx_cut * h) return Tier::refined;
  return Tier::qbx;
}

} // namespace detail

// Laplace single layer at arbitrary targets.  `sides` (optional, one entry
// per target: +1 exterior / -1 interior) disambiguates targets lying on the
// curve; S is continuous so the value does not depend on it, but a target
// coinciding with a node needs *some* side to expand from.
inline std::vector<double> eval_laplace_slp(const Discretization& d, const std::vector<double>& mu,
                                            const std::vector<Vec2>& targets,
                                            const NearEvalOptions& opt = {},
                                            const std::vector<int>* sides = nullptr) {
  std::vector<double> out(targets.size(), 0.0);
  detail::FineSource fs;
  std::vector<double> mufine;
  for (std::size_t t = 0; t < targets.size(); t++) {
    const Vec2 z = targets[t];
    const int i0 = detail::nearest_node(d, z);
    const double dist = norm(z - d.x[i0]);
    const double h = local_spacing(d, i0);
    const detail::Tier tier = detail::pick_tier(d, opt, dist, h);
    if (tier == detail::Tier::direct) {
      double acc = 0;
      for (int j = 0; j < d.n; j++) acc += laplace_G(z, d.x[j]) * mu[j] * d.w[j];
      out[t] = acc;
      continue;
    }
    fs.ensure(d, opt.upsample);
    if (mufine.empty()) mufine = interp_density(d, fs.fine, mu);
    if (tier == detail::Tier::refined) {
      double acc = 0;
      for (int j = 0; j < fs.fine.n; j++) acc += laplace_G(z, fs.fine.x[j]) * mufine[j] * fs.fine.w[j];
      out[t] = acc;
      continue;
    }
    detail::FootPoint fp = detail::closest_point(d, z, i0);
    if (fp.dist < 1e-13 && sides == nullptr && dist < 1e-13)
      throw std::runtime_error("eval_laplace_slp: on-surface target needs a side hint");
    const int side = (sides != nullptr) ? (*sides)[t] : fp.side;
    const double r = detail::expansion_radius(d, fp, opt);
    const Vec2 c = fp.x + (side * r) * fp.normal;
    out[t] = -detail::qbx_log_sum(fs.fine, mufine, c, z, opt.qbx_order) / (2.0 * pi);
  }
  return out;
}

// Laplace double layer at arbitrary targets; on-curve targets give the limit
// from the side of the expansion center (auto side = geometric side).
inline std::vector<double> eval_laplace_dlp(const Discretization& d, const std::vector<double>& mu,
                                            const std::vector<Vec2>& targets,
                                            const NearEvalOptions& opt = {},
                                            const std::vector<int>* sides = nullptr) {
  std::vector<double> out(targets.size(), 0.0);
  detail::FineSource fs;
  std::vector<double> mufine;
  std::vector<detail::cplx> nmu; // n(w) mu(w) as complex, on the fine grid
  for (std::size_t t = 0; t < targets.size(); t++) {
    const Vec2 z = targets[t];
    const int i0 = detail::nearest_node(d, z);
    const double dist = norm(z - d.x[i0]);
    const double h = local_spacing(d, i0);
    const detail::Tier tier = detail::pick_tier(d, opt, dist, h);
    if (tier == detail::Tier::direct) {
      double acc = 0;
      for (int j = 0; j < d.n; j++) acc += laplace_dlp(z, d.x[j], d.normal[j]) * mu[j] * d.w[j];
      out[t] = acc;
      continue;
    }
    fs.ensure(d, opt.upsample);
    if (mufine.empty()) mufine = interp_density(d, fs.fine, mu);
    if (tier == detail::Tier::refined) {
      double acc = 0;
      for (int j = 0; j < fs.fine.n; j++)
        acc += laplace_dlp(z, fs.fine.x[j], fs.fine.normal[j]) * mufine[j] * fs.fine.w[j];
      out[t] = acc;
      continue;
    }
    if (nmu.empty()) {
      nmu.resize(fs.fine.n);
      for (int j = 0; j < fs.fine.n; j++)
        nmu[j] = detail::cplx(fs.fine.normal[j].x, fs.fine.normal[j].y) * mufine[j];
    }
    detail::FootPoint fp = detail::closest_point(d, z, i0);
    if (fp.dist < 1e-13 && sides == nullptr && dist < 1e-13)
      throw std::runtime_error("eval_laplace_dlp: on-surface target needs a side hint");
    const int side = (sides != nullptr) ? (*sides)[t] : fp.side;
    const double r = detail::expansion_radius(d, fp, opt);
    const Vec2 c = fp.x + (side * r) * fp.normal;
    // DLP = -(1/2pi) Re int n mu/(w-z) ds = (1/2pi) Re int n mu/(z-w) ds
    out[t] = detail::qbx_cauchy_sum(fs.fine, nmu, c, z, opt.qbx_order).real() / (2.0 * pi);
  }
  return out;
}

// Stokes single layer velocity at arbitrary targets (interleaved output).
// The near path expands the Goursat pieces: with m = mu1 + i mu2,
//   4pi u1 = -A1 + Re(M + X)/2,   4pi u2 = -A2 + Im(M - X)/2,
// where A_i = int log|z-w| mu_i ds, M = int m ds,
//       X = conj(z) Cau(m) - Cau(conj(w) m),  Cau(nu) = int nu/(z-w) ds.
inline std::vector<double> eval_stokes_slp(const Discretization& d, const std::vector<double>& mu,
                                           const std::vector<Vec2>& targets,
                                           const NearEvalOptions& opt = {},
                                           const std::vector<int>* sides = nullptr) {
  std::vector<double> out(2 * targets.size(), 0.0);
  detail::FineSource fs;
  std::vector<double> m1f, m2f;
  std::vector<detail::cplx> mf, wmf;
  detail::cplx M(0, 0); // total moment, accumulated on the fine grid
  for (std::size_t t = 0; t < targets.size(); t++) {
    const Vec2 z = targets[t];
    const int i0 = detail::nearest_node(d, z);
    const double dist = norm(z - d.x[i0]);
    const double h = local_spacing(d, i0);
    const detail::Tier tier = detail::pick_tier(d, opt, dist, h);
    if (tier == detail::Tier::direct) {
      Vec2 acc{0, 0};
      for (int j = 0; j < d.n; j++)
        acc += d.w[j] * (stokeslet(z, d.x[j]) * Vec2{mu[2 * j], mu[2 * j + 1]});
      out[2 * t] = acc.x;
      out[2 * t + 1] = acc.y;
      continue;
    }
    fs.ensure(d, opt.upsample);
    if (m1f.empty()) {
      std::vector<double> m1(d.n), m2(d.n);
      for (int j = 0; j < d.n; j++) { m1[j] = mu[2 * j]; m2[j] = mu[2 * j + 1]; }
      m1f = interp_density(d, fs.fine, m1);
      m2f = interp_density(d, fs.fine, m2);
    }
    if (tier == detail::Tier::refined) {
      Vec2 acc{0, 0};
      for (int j = 0; j < fs.fine.n; j++)
        acc += fs.fine.w[j] * (stokeslet(z, fs.fine.x[j]) * Vec2{m1f[j], m2f[j]});
      out[2 * t] = acc.x;
      out[2 * t + 1] = acc.y;
      continue;
    }
    if (mf.empty()) {
      mf.resize(fs.fine.n);
      wmf.resize(fs.fine.n);
      for (int j = 0; j < fs.fine.n; j++) {
        mf[j] = detail::cplx(m1f[j], m2f[j]);
        wmf[j] = std::conj(detail::cplx(fs.fine.x[j].x, fs.fine.x[j].y)) * mf[j];
        M += mf[j] * fs.fine.w[j];
      }
    }
    detail::FootPoint fp = detail::closest_point(d, z, i0);
    if (fp.dist < 1e-13 && sides == nullptr && dist < 1e-13)
      throw std::runtime_error("eval_stokes_slp: on-surface target needs a side hint");
    const int side = (sides != nullptr) ? (*sides)[t] : fp.side;
    const double r = detail::expansion_radius(d, fp, opt);
    const Vec2 c = fp.x + (side * r) * fp.normal;
    const int p = opt.qbx_order;
    const double A1 = detail::qbx_log_sum(fs.fine, m1f, c, z, p);
    const double A2 = detail::qbx_log_sum(fs.fine, m2f, c, z, p);
    const detail::cplx C1 = detail::qbx_cauchy_sum(fs.fine, mf, c, z, p);
    const detail::cplx C2 = detail::qbx_cauchy_sum(fs.fine, wmf, c, z, p);
    const detail::cplx X = std::conj(detail::cplx(z.x, z.y)) * C1 - C2;
    out[2 * t] = (-A1 + 0.5 * (M + X).real()) / (4.0 * pi);
    out[2 * t + 1] = (-A2 + 0.5 * (M - X).imag()) / (4.0 * pi);
  }
  return out;
}

// Stokes double layer velocity at arbitrary targets.  No expansion tier:
// targets inside the expansion zone fall back to the refined grid, which is
// adequate for the interior/exterior probes this is used for (keep probes a
// node spacing away from the curve).
inline std::vector<double> eval_stokes_dlp(const Discretization& d, const std::vector<double>& mu,
                                           const std::vector<Vec2>& targets,
                                           const NearEvalOptions& opt = {}) {
  std::vector<double> out(2 * targets.size(), 0.0);
  detail::FineSource fs;
  std::vector<double> m1f, m2f;
  for (std::size_t t = 0; t < targets.size(); t++) {
    const Vec2 z = targets[t];
    const int i0 = detail::nearest_node(d, z);
    const double dist = norm(z - d.x[i0]);
    const double h = local_spacing(d, i0);
    const detail::Tier tier = detail::pick_tier(d, opt, dist, h);
    if (tier == detail::Tier::direct) {
      Vec2 acc{0, 0};
      for (int j = 0; j < d.n; j++)
        acc += d.w[j] * (stokes_dlp(z, d.x[j], d.normal[j]) * Vec2{mu[2 * j], mu[2 * j + 1]});
      out[2 * t] = acc.x;
      out[2 * t + 1] = acc.y;
      continue;
    }
    fs.ensure(d, opt.upsample);
    if (m1f.empty()) {
      std::vector<double> m1(d.n), m2(d.n);
      for (int j = 0; j < d.n; j++) { m1[j] = mu[2 * j]; m2[j] = mu[2 * j + 1]; }
      m1f = interp_density(d, fs.fine, m1);
      m2f = interp_density(d, fs.fine, m2);
    }
    Vec2 acc{0, 0};
    for (int j = 0; j < fs.fine.n; j++)
      acc += fs.fine.w[j] * (stokes_dlp(z, fs.fine.x[j], fs.fine.normal[j]) * Vec2{m1f[j], m2f[j]});
    out[2 * t] = acc.x;
    out[2 * t + 1] = acc.y;
  }
  return out;
}

// Pressure of the Stokes single layer at arbitrary targets:
// p = (1/2pi) Re Cau(m).
inline std::vector<double> eval_stokes_slp_pressure(const Discretization& d, const std::vector<double>& mu,
                                                    const std::vector<Vec2>& targets,
                                                    const NearEvalOptions& opt = {},
                                                    const std::vector<int>* sides = nullptr) {
  std::vector<double> out(targets.size(), 0.0);
  detail::FineSource fs;
  std::vector<detail::cplx> mf;
  std::vector<double> m1f, m2f;
  for (std::size_t t = 0; t < targets.size(); t++) {
    const Vec2 z = targets[t];
    const int i0 = detail::nearest_node(d, z);
    const double dist = norm(z - d.x[i0]);
    const double h = local_spacing(d, i0);
    const detail::Tier tier = detail::pick_tier(d, opt, dist, h);
    if (tier == detail::Tier::direct) {
      double acc = 0;
      for (int j = 0; j < d.n; j++)
        acc += dot(stokeslet_pressure(z, d.x[j]), Vec2{mu[2 * j], mu[2 * j + 1]}) * d.w[j];
      out[t] = acc;
      continue;
    }
    fs.ensure(d, opt.upsample);
    if (m1f.empty()) {
      std::vector<double> m1(d.n), m2(d.n);
      for (int j = 0; j < d.n; j++) { m1[j] = mu[2 * j]; m2[j] = mu[2 * j + 1]; }
      m1f = interp_density(d, fs.fine, m1);
      m2f = interp_density(d, fs.fine, m2);
    }
    if (tier == detail::Tier::refined) {
      double acc = 0;
      for (int j = 0; j < fs.fine.n; j++)
        acc += dot(stokeslet_pressure(z, fs.fine.x[j]), Vec2{m1f[j], m2f[j]}) * fs.fine.w[j];
      out[t] = acc;
      continue;
    }
    if (mf.empty()) {
      mf.resize(fs.fine.n);
      for (int j = 0; j < fs.fine.n; j++) mf[j] = detail::cplx(m1f[j], m2f[j]);
    }
    detail::FootPoint fp = detail::closest_point(d, z, i0);
    const int side = (sides != nullptr) ? (*sides)[t] : fp.side;
    const double r = detail::expansion_radius(d, fp, opt);
    const Vec2 c = fp.x + (side * r) * fp.normal;
    out[t] = detail::qbx_cauchy_sum(fs.fine, mf, c, z, opt.qbx_order).real() / (2.0 * pi);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Explicit expansion evaluation (mostly for tests): expand the Laplace
// single layer about `center` and evaluate at `target`, which must satisfy
// |target - center| < radius <= dist(center, curve).
// ---------------------------------------------------------------------------

inline double qbx_expand_eval_laplace_slp(const Discretization& d, const std::vector<double>& mu,
                                          Vec2 center, double radius, int order, Vec2 target,
                                          int upsample = 8) {
  if (norm(target - center) >= radius)
    throw std::invalid_argument("qbx_expand_eval: target outside expansion disk");
  const Discretization fine = refined_copy(d, upsample);
  const std::vector<double> mufine = interp_density(d, fine, mu);
  return -detail::qbx_log_sum(fine, mufine, center, target, order) / (2.0 * pi);
}

} // namespace bie2d
