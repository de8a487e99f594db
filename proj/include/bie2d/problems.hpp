#pragma once

// High-level drivers for the four boundary-value problems (elastance,
// capacitance, mobility, resistance), round-trip validation harnesses,
// analytic references, and derived quantities (boundary errors, interior
// probes, field grids).
//
// Unit conventions.  Charges, forces and torques handled by the drivers are
// the physical ones: a body of charge q has outward flux -\oint du/dn = q,
// and a body with stokeslet strength F pushes the fluid with net force F.
// Published two-body reference tables quote charges as far-field log
// coefficients (u ~ q log|x| + O(1)); charge_log_coefficient converts.
// Reported torques follow the couple exerted by the fluid on the body,
// which is opposite the rotlet strength of the completed representation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bie2d/discretization.hpp"
#include "bie2d/kernels.hpp"
#include "bie2d/linsolve.hpp"
#include "bie2d/operators.hpp"
#include "bie2d/quadrature.hpp"

namespace bie2d {

enum class ProblemKind { elastance, capacitance, mobility, resistance };

inline const char* problem_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::elastance: return "elastance";
    case ProblemKind::capacitance: return "capacitance";
    case ProblemKind::mobility: return "mobility";
    case ProblemKind::resistance: return "resistance";
  }
  return "?";
}

// Reported force/torque equal the stokeslet/rotlet strengths of the total
// density, i.e. minus the net hydrodynamic traction moments on each body
// (the force applied to sustain the motion).  A disc spun at omega = +1
// therefore reports T = +4*pi*mu*a^2, while the traction integral of the
// resulting flow carries the opposite sign.
inline constexpr double force_report_sign = 1.0;
inline constexpr double torque_report_sign = 1.0;

// Far-field log coefficient of a physical charge: u ~ q_log * log|x|.
inline double charge_log_coefficient(double q_physical) {
  return -q_physical / (2.0 * pi);
}

struct SolveConfig {
  double gmres_tol = 1e-6;
  int max_iter = 500;
  int threads = 1;
  bool use_dense = false;              // direct dense factorization instead of GMRES
  std::size_t dense_cache_limit = 12000;  // assemble the operator once when dim fits
  NearEvalOptions near{};
};

struct SolveStats {
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
  int dim = 0;
  bool dense_cached = false;
};

struct SolveReport {
  ProblemKind kind = ProblemKind::elastance;
  std::vector<double> density;        // solved mu (n or 2n interleaved)
  std::vector<double> total_density;  // sigma+mu / rho+mu (empty for bordered kinds)
  double u_inf_scalar = 0.0;          // ambient potential (Laplace)
  Vec2 u_inf{0.0, 0.0};               // ambient velocity (Stokes)

  std::vector<double> phi;     // per-body potentials (elastance output / capacitance input)
  std::vector<double> q;       // per-body physical charges (capacitance output / elastance reconstruction)
  std::vector<Vec2> v;         // per-body velocities (mobility output / resistance input)
  std::vector<double> omega;   // per-body angular velocities
  std::vector<Vec2> F;         // per-body forces (resistance output / mobility reconstruction)
  std::vector<double> T;       // per-body torques
  std::vector<double> constancy;  // per-body deviation diagnostic (see drivers)
  std::vector<double> boundary_u; // reconstructed on-surface field (n or 2n)

  SolveStats stats;
};

namespace detail {

inline GmresResult run_system(const AssembledSystem& sys, const SolveConfig& cfg,
                              bool* dense_cached = nullptr) {
  if (dense_cached) *dense_cached = false;
  if (cfg.use_dense) {
    Eigen::MatrixXd A = sys.dense();
    GmresResult r;
    r.x = dense_solve(A, sys.rhs);
    r.iterations = 0;
    r.converged = true;
    if (dense_cached) *dense_cached = true;
    return r;
  }
  GmresOptions go;
  go.tol = cfg.gmres_tol;
  go.max_iter = cfg.max_iter;
  if ((std::size_t)sys.dim <= cfg.dense_cache_limit) {
    auto A = std::make_shared<Eigen::MatrixXd>(sys.dense());
    MatVec apply = [A](const std::vector<double>& x, std::vector<double>& y) {
      Eigen::Map<const Eigen::VectorXd> xm(x.data(), (Eigen::Index)x.size());
      Eigen::Map<Eigen::VectorXd> ym(y.data(), (Eigen::Index)y.size());
      ym.noalias() = (*A) * xm;
    };
    if (dense_cached) *dense_cached = true;
    return gmres(apply, sys.rhs, sys.scale, go);
  }
  return gmres(sys.matvec, sys.rhs, sys.scale, go);
}

} // namespace detail

struct SolveFailure : std::runtime_error {
  SolveFailure(const std::string& what, std::vector<double> history, int iterations)
      : std::runtime_error(what), residual_history(std::move(history)), iterations(iterations) {}
  std::vector<double> residual_history;
  int iterations = 0;
};

namespace detail {

inline void require_converged(const GmresResult& r, const char* what) {
  if (!r.converged) {
    const double res = r.residual_history.empty() ? 1.0 : r.residual_history.back();
    throw SolveFailure(std::string(what) + ": GMRES stalled at relative residual " +
                           std::to_string(res) + " after " + std::to_string(r.iterations) +
                           " iterations",
                       r.residual_history, r.iterations);
  }
}

// Sum of single-layer potentials of all bodies evaluated at every node
// (self terms by on-surface quadrature, cross terms by the tiered evaluator).
inline std::vector<double> surface_laplace_slp(const Assembly& a, const std::vector<double>& dens,
                                               const NearEvalOptions& opt) {
  std::vector<double> out((std::size_t)a.total, 0.0);
  const int nb = (int)a.bodies.size();
  for (int i = 0; i < nb; i++) {
    const Discretization& di = a.bodies[i];
    std::vector<Vec2> targets(di.x);
    for (int b = 0; b < nb; b++) {
      const Discretization& db = a.bodies[b];
      std::vector<double> slice(dens.begin() + a.offset[b], dens.begin() + a.offset[b] + db.n);
      std::vector<double> vals = (b == i) ? self_laplace_slp(di, slice, opt)
                                          : eval_laplace_slp(db, slice, targets, opt);
      for (int j = 0; j < di.n; j++) out[(std::size_t)a.offset[i] + j] += vals[j];
    }
  }
  return out;
}

inline std::vector<double> surface_stokes_slp(const Assembly& a, const std::vector<double>& dens,
                                              const NearEvalOptions& opt) {
  std::vector<double> out(2 * (std::size_t)a.total, 0.0);
  const int nb = (int)a.bodies.size();
  for (int i = 0; i < nb; i++) {
    const Discretization& di = a.bodies[i];
    std::vector<Vec2> targets(di.x);
    for (int b = 0; b < nb; b++) {
      const Discretization& db = a.bodies[b];
      std::vector<double> slice(dens.begin() + 2 * a.offset[b],
                                dens.begin() + 2 * (a.offset[b] + db.n));
      std::vector<double> vals = (b == i) ? self_stokes_slp(di, slice, opt)
                                          : eval_stokes_slp(db, slice, targets, opt);
      for (int j = 0; j < 2 * di.n; j++) out[2 * (std::size_t)a.offset[i] + j] += vals[j];
    }
  }
  return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Rigid-motion extraction and field helpers.
// ---------------------------------------------------------------------------

struct RigidMotion {
  Vec2 v{0.0, 0.0};
  double omega = 0.0;
  double deviation = 0.0;  // relative L2 residual of u minus the fitted rigid field
};

// Least-squares rigid-motion fit of a velocity field sampled at the nodes
// (u interleaved, size 2n).  Translation and rotation components are L2-
// orthogonal over the curve, so the fit is two independent projections.
inline RigidMotion extract_rigid_motion(const Discretization& d, const std::vector<double>& u) {
  if ((int)u.size() != 2 * d.n)
    throw std::invalid_argument("extract_rigid_motion: field size mismatch");
  RigidMotion rm;
  double nrm2 = 0.0;
  for (int j = 0; j < d.n; j++) {
    const Vec2 uj{u[2 * j], u[2 * j + 1]};
    rm.v += d.w[j] * uj;
    rm.omega += d.w[j] * dot(perp(d.x[j] - d.centroid), uj);
    nrm2 += d.w[j] * norm2(uj);
  }
  rm.v = rm.v / d.arclength;
  rm.omega /= d.second_moment;
  double res2 = 0.0;
  for (int j = 0; j < d.n; j++) {
    const Vec2 r = Vec2{u[2 * j], u[2 * j + 1]} - rm.v - rm.omega * perp(d.x[j] - d.centroid);
    res2 += d.w[j] * norm2(r);
  }
  rm.deviation = (nrm2 > 0.0) ? std::sqrt(res2 / nrm2) : 0.0;
  return rm;
}

// Per-body constant scalar field (one value per body, replicated at nodes).
inline std::vector<double> constant_field(const Assembly& a, const std::vector<double>& vals) {
  std::vector<double> u((std::size_t)a.total);
  for (int b = 0; b < (int)a.bodies.size(); b++)
    for (int j = 0; j < a.bodies[b].n; j++) u[(std::size_t)a.offset[b] + j] = vals[b];
  return u;
}

// Per-body rigid velocity field v_b + omega_b (x - c_b)^perp at the nodes.
inline std::vector<double> rigid_field(const Assembly& a, const std::vector<Vec2>& v,
                                       const std::vector<double>& omega) {
  std::vector<double> u(2 * (std::size_t)a.total);
  for (int b = 0; b < (int)a.bodies.size(); b++) {
    const Discretization& d = a.bodies[b];
    for (int j = 0; j < d.n; j++) {
      const Vec2 uj = v[b] + omega[b] * perp(d.x[j] - d.centroid);
      u[2 * ((std::size_t)a.offset[b] + j)] = uj.x;
      u[2 * ((std::size_t)a.offset[b] + j) + 1] = uj.y;
    }
  }
  return u;
}

// Quadrature-weighted relative L2 error per body; ncomp = 1 (scalar) or 2.
inline std::vector<double> boundary_errors(const Assembly& a, const std::vector<double>& u,
                                           const std::vector<double>& uref, int ncomp) {
  if (u.size() != uref.size() || (int)u.size() != ncomp * a.total)
    throw std::invalid_argument("boundary_errors: field size mismatch");
  std::vector<double> e;
  for (int b = 0; b < (int)a.bodies.size(); b++) {
    const Discretization& d = a.bodies[b];
    double num = 0.0, den = 0.0;
    for (int j = 0; j < d.n; j++) {
      for (int c = 0; c < ncomp; c++) {
        const std::size_t k = (std::size_t)ncomp * (a.offset[b] + j) + c;
        num += d.w[j] * (u[k] - uref[k]) * (u[k] - uref[k]);
        den += d.w[j] * uref[k] * uref[k];
      }
    }
    if (den < std::numeric_limits<double>::min())
      throw std::invalid_argument("boundary_errors: reference field vanishes on body " +
                                  std::to_string(b));
    e.push_back(std::sqrt(num / den));
  }
  return e;
}

// ---------------------------------------------------------------------------
// Problem drivers.
// ---------------------------------------------------------------------------

// Elastance: given physical charges q (summing to zero) and the ambient
// potential, find the surface potentials phi_i.
inline SolveReport solve_elastance(const Assembly& asmb, const std::vector<double>& q,
                                   double u_inf = 0.0, const SolveConfig& cfg = {}) {
  const FlatNodes f = flatten(asmb);
  AssembledSystem sys = elastance_system(f, q, cfg.threads);
  SolveReport rep;
  rep.kind = ProblemKind::elastance;
  rep.stats.dim = sys.dim;
  GmresResult res = detail::run_system(sys, cfg, &rep.stats.dense_cached);
  detail::require_converged(res, "solve_elastance");

  rep.density = res.x;
  rep.total_density.resize((std::size_t)f.n);
  for (int i = 0; i < f.n; i++) rep.total_density[i] = sys.source[i] + res.x[i];
  rep.u_inf_scalar = u_inf;
  rep.boundary_u = detail::surface_laplace_slp(asmb, rep.total_density, cfg.near);
  for (double& uv : rep.boundary_u) uv += u_inf;

  rep.q = body_integrals(f, rep.total_density);
  for (int b = 0; b < (int)asmb.bodies.size(); b++) {
    const Discretization& d = asmb.bodies[b];
    double mean = 0.0;
    for (int j = 0; j < d.n; j++) mean += d.w[j] * rep.boundary_u[(std::size_t)asmb.offset[b] + j];
    mean /= d.arclength;
    double dev = 0.0;
    for (int j = 0; j < d.n; j++)
      dev = std::max(dev, std::abs(rep.boundary_u[(std::size_t)asmb.offset[b] + j] - mean));
    rep.phi.push_back(mean);
    rep.constancy.push_back(dev);
  }
  rep.stats.iterations = res.iterations;
  rep.stats.converged = res.converged;
  rep.stats.residual_history = std::move(res.residual_history);
  return rep;
}

// Capacitance: given surface potentials phi_i, find the physical charges and
// the ambient potential (bordered system, charges neutral by construction).
inline SolveReport solve_capacitance(const Assembly& asmb, const std::vector<double>& phi,
                                     const SolveConfig& cfg = {}) {
  const FlatNodes f = flatten(asmb);
  AssembledSystem sys = capacitance_system(f, phi, cfg.threads);
  SolveReport rep;
  rep.kind = ProblemKind::capacitance;
  rep.stats.dim = sys.dim;
  GmresResult res = detail::run_system(sys, cfg, &rep.stats.dense_cached);
  detail::require_converged(res, "solve_capacitance");

  rep.density.assign(res.x.begin(), res.x.begin() + f.n);
  rep.u_inf_scalar = res.x[(std::size_t)f.n];
  rep.phi = phi;
  rep.q = body_integrals(f, rep.density);
  // The border row pins the total to zero up to solver tolerance; symmetrize.
  double qsum = 0.0;
  for (double v : rep.q) qsum += v;
  for (double& v : rep.q) v -= qsum / (double)rep.q.size();

  rep.stats.iterations = res.iterations;
  rep.stats.converged = res.converged;
  rep.stats.residual_history = std::move(res.residual_history);
  return rep;
}

// Mobility: given forces/torques (force sum zero) and the ambient velocity,
// find the rigid-body motions.
inline SolveReport solve_mobility(const Assembly& asmb, const std::vector<Vec2>& F,
                                  const std::vector<double>& T, Vec2 u_inf = Vec2{0.0, 0.0},
                                  const SolveConfig& cfg = {}) {
  const FlatNodes f = flatten(asmb);
  std::vector<Vec2> Fs(F);
  std::vector<double> Ts(T);
  for (Vec2& v : Fs) v = force_report_sign * v;
  for (double& t : Ts) t *= torque_report_sign;
  AssembledSystem sys = mobility_system(f, Fs, Ts, cfg.threads);
  SolveReport rep;
  rep.kind = ProblemKind::mobility;
  rep.stats.dim = sys.dim;
  GmresResult res = detail::run_system(sys, cfg, &rep.stats.dense_cached);
  detail::require_converged(res, "solve_mobility");

  rep.density = res.x;
  rep.total_density.resize(2 * (std::size_t)f.n);
  for (int i = 0; i < 2 * f.n; i++) rep.total_density[i] = sys.source[i] + res.x[i];
  rep.u_inf = u_inf;
  rep.boundary_u = detail::surface_stokes_slp(asmb, rep.total_density, cfg.near);
  for (int i = 0; i < f.n; i++) {
    rep.boundary_u[2 * (std::size_t)i] += u_inf.x;
    rep.boundary_u[2 * (std::size_t)i + 1] += u_inf.y;
  }

  std::vector<Vec2> Frec;
  std::vector<double> Trec;
  body_force_torque(f, rep.total_density, Frec, Trec);
  for (int b = 0; b < (int)asmb.bodies.size(); b++) {
    rep.F.push_back(force_report_sign * Frec[b]);
    rep.T.push_back(torque_report_sign * Trec[b]);
    const Discretization& d = asmb.bodies[b];
    std::vector<double> ub(rep.boundary_u.begin() + 2 * asmb.offset[b],
                           rep.boundary_u.begin() + 2 * (asmb.offset[b] + d.n));
    const RigidMotion rm = extract_rigid_motion(d, ub);
    rep.v.push_back(rm.v);
    rep.omega.push_back(rm.omega);
    rep.constancy.push_back(rm.deviation);
  }
  rep.stats.iterations = res.iterations;
  rep.stats.converged = res.converged;
  rep.stats.residual_history = std::move(res.residual_history);
  return rep;
}

// Resistance: given rigid-body motions, find forces, torques and the ambient
// velocity (bordered system, net force zero by construction).
inline SolveReport solve_resistance(const Assembly& asmb, const std::vector<Vec2>& v,
                                    const std::vector<double>& omega, const SolveConfig& cfg = {}) {
  const FlatNodes f = flatten(asmb);
  AssembledSystem sys = resistance_system(f, v, omega, cfg.threads);
  SolveReport rep;
  rep.kind = ProblemKind::resistance;
  rep.stats.dim = sys.dim;
  GmresResult res = detail::run_system(sys, cfg, &rep.stats.dense_cached);
  detail::require_converged(res, "solve_resistance");

  rep.density.assign(res.x.begin(), res.x.begin() + 2 * f.n);
  rep.u_inf = Vec2{res.x[2 * (std::size_t)f.n], res.x[2 * (std::size_t)f.n + 1]};
  rep.v = v;
  rep.omega = omega;
  std::vector<Vec2> Fs;
  std::vector<double> Ts;
  body_force_torque(f, rep.density, Fs, Ts);
  // Constraint rows pin the force sum up to solver tolerance; symmetrize.
  Vec2 fsum{0.0, 0.0};
  for (const Vec2& Fb : Fs) fsum += Fb;
  for (Vec2& Fb : Fs) Fb -= fsum / (double)Fs.size();
  for (int b = 0; b < (int)asmb.bodies.size(); b++) {
    rep.F.push_back(force_report_sign * Fs[b]);
    rep.T.push_back(torque_report_sign * Ts[b]);
  }
  rep.stats.iterations = res.iterations;
  rep.stats.converged = res.converged;
  rep.stats.residual_history = std::move(res.residual_history);
  return rep;
}

// ---------------------------------------------------------------------------
// Analytic reference: two unit discs with gap d, centers (+-(1+d/2), 0).
// The exterior potential with boundary values phi1 (left), phi2 (right) is
// generated by two image charges at (+-alpha, 0), alpha = sqrt(d + d^2/4).
// ---------------------------------------------------------------------------

struct TwoDiscExact {
  double alpha = 0.0;
  double v1 = 0.0;  // image strength (physical charge of the right disc)
  double v2 = 0.0;  // mean potential
  TwoDiscExact(double d, double phi1, double phi2) {
    alpha = std::sqrt(d + 0.25 * d * d);
    v2 = 0.5 * (phi1 + phi2);
    v1 = pi * (phi2 - phi1) / std::log((0.5 * d + alpha) / (alpha - 0.5 * d));
  }
  double operator()(Vec2 x) const {
    const double rp = norm(x - Vec2{alpha, 0.0});
    const double rm = norm(x + Vec2{alpha, 0.0});
    return -v1 / (2.0 * pi) * std::log(rp / rm) + v2;
  }
  // Charge of the left disc in far-field log-coefficient units.
  double exact_q1() const { return v1 / (2.0 * pi); }
  // Physical charge of the left disc.
  double exact_q1_physical() const { return -v1; }
};

inline double two_disc_exact(double d, double phi1, double phi2, Vec2 x) {
  return TwoDiscExact(d, phi1, phi2)(x);
}

// ---------------------------------------------------------------------------
// Round-trip harnesses.
// ---------------------------------------------------------------------------

struct ElastanceRoundTrip {
  SolveReport capacitance;
  SolveReport elastance;
  std::vector<double> q_log;   // capacitance charges in log-coefficient units
  std::vector<double> errors;  // per-body relative L2 error of the recovered potential
};

inline ElastanceRoundTrip roundtrip_elastance(const Assembly& asmb, const std::vector<double>& phi,
                                              const SolveConfig& cfg = {}) {
  ElastanceRoundTrip rt;
  rt.capacitance = solve_capacitance(asmb, phi, cfg);
  rt.elastance = solve_elastance(asmb, rt.capacitance.q, rt.capacitance.u_inf_scalar, cfg);
  for (double qb : rt.capacitance.q) rt.q_log.push_back(charge_log_coefficient(qb));
  const std::vector<double> uref = constant_field(asmb, phi);
  rt.errors = boundary_errors(asmb, rt.elastance.boundary_u, uref, 1);
  return rt;
}

struct MobilityRoundTrip {
  SolveReport resistance;
  SolveReport mobility;
  std::vector<double> errors;  // per-body relative L2 error of the recovered velocity
};

inline MobilityRoundTrip roundtrip_mobility(const Assembly& asmb, const std::vector<Vec2>& v,
                                            const std::vector<double>& omega,
                                            const SolveConfig& cfg = {}) {
  MobilityRoundTrip rt;
  rt.resistance = solve_resistance(asmb, v, omega, cfg);
  rt.mobility = solve_mobility(asmb, rt.resistance.F, rt.resistance.T, rt.resistance.u_inf, cfg);
  const std::vector<double> uref = rigid_field(asmb, v, omega);
  rt.errors = boundary_errors(asmb, rt.mobility.boundary_u, uref, 2);
  return rt;
}

// ---------------------------------------------------------------------------
// Interior probes: the representation is constant (Laplace) / rigid (Stokes)
// inside each body; the probe deviation measures how well the solve attained
// that.  Probe points sit on segments from the parametrization anchor to the
// nodes, which stays inside for the star-shaped curve families used here.
// ---------------------------------------------------------------------------

inline std::vector<Vec2> interior_probe_points(const Discretization& d, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> node(0, d.n - 1);
  std::uniform_real_distribution<double> depth(0.15, 0.45);
  std::vector<Vec2> pts;
  const Vec2 c = d.curve.center;
  for (int k = 0; k < count; k++) pts.push_back(c + depth(rng) * (d.x[node(rng)] - c));
  return pts;
}

// Max absolute interior deviation per body: |u - phi_b| for elastance
// reports, |u - v_b - omega_b (x-c_b)^perp| for mobility reports.
inline std::vector<double> interior_field_deviation(const Assembly& asmb, const SolveReport& rep,
                                                    const SolveConfig& cfg = {}, int per_body = 5,
                                                    unsigned seed = 12345u) {
  const int nb = (int)asmb.bodies.size();
  std::vector<double> dev(nb, 0.0);
  for (int b = 0; b < nb; b++) {
    const std::vector<Vec2> pts = interior_probe_points(asmb.bodies[b], per_body, seed + 7u * b);
    if (rep.kind == ProblemKind::elastance) {
      std::vector<double> u(pts.size(), rep.u_inf_scalar);
      for (int s = 0; s < nb; s++) {
        const Discretization& ds = asmb.bodies[s];
        std::vector<double> slice(rep.total_density.begin() + asmb.offset[s],
                                  rep.total_density.begin() + asmb.offset[s] + ds.n);
        const std::vector<double> vals = eval_laplace_slp(ds, slice, pts, cfg.near);
        for (std::size_t t = 0; t < pts.size(); t++) u[t] += vals[t];
      }
      for (double uv : u) dev[b] = std::max(dev[b], std::abs(uv - rep.phi[b]));
    } else if (rep.kind == ProblemKind::mobility) {
      std::vector<double> u(2 * pts.size(), 0.0);
      for (int s = 0; s < nb; s++) {
        const Discretization& ds = asmb.bodies[s];
        std::vector<double> slice(rep.total_density.begin() + 2 * asmb.offset[s],
                                  rep.total_density.begin() + 2 * (asmb.offset[s] + ds.n));
        const std::vector<double> vals = eval_stokes_slp(ds, slice, pts, cfg.near);
        for (std::size_t t = 0; t < u.size(); t++) u[t] += vals[t];
      }
      const Discretization& db = asmb.bodies[b];
      for (std::size_t t = 0; t < pts.size(); t++) {
        const Vec2 rigid = rep.v[b] + rep.omega[b] * perp(pts[t] - db.centroid);
        const Vec2 val = Vec2{u[2 * t], u[2 * t + 1]} + rep.u_inf - rigid;
        dev[b] = std::max(dev[b], norm(val));
      }
    } else {
      throw std::invalid_argument("interior_field_deviation: report kind has no interior law");
    }
  }
  return dev;
}

// ---------------------------------------------------------------------------
// Field evaluation on a rectangular grid with interior masking.
// ---------------------------------------------------------------------------

// Even-odd ray-cast against the node polygon (resolved discretizations make
// the polygon an adequate stand-in for the curve).
inline bool point_inside(const Discretization& d, Vec2 p) {
  bool in = false;
  for (int i = 0, j = d.n - 1; i < d.n; j = i++) {
    const Vec2& a = d.x[i];
    const Vec2& b = d.x[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < xint) in = !in;
    }
  }
  return in;
}

struct FieldGrid {
  int nx = 0, ny = 0, ncomp = 1;
  Vec2 lo{0.0, 0.0}, hi{0.0, 0.0};
  std::vector<int> region;     // nx*ny entries, -1 exterior else body index
  std::vector<double> values;  // ncomp per point, x fastest
  Vec2 point(int ix, int iy) const {
    return Vec2{lo.x + (hi.x - lo.x) * (nx > 1 ? (double)ix / (nx - 1) : 0.5),
                lo.y + (hi.y - lo.y) * (ny > 1 ? (double)iy / (ny - 1) : 0.5)};
  }
};

// Evaluates the solved field of an elastance (scalar) or mobility (vector)
// report on a grid; interior points carry the body's constant/rigid value
// when fill_interior is set and NaN otherwise.
inline FieldGrid evaluate_field_grid(const Assembly& asmb, const SolveReport& rep, Vec2 lo, Vec2 hi,
                                     int nx, int ny, bool fill_interior = true,
                                     const SolveConfig& cfg = {}) {
  if (rep.kind != ProblemKind::elastance && rep.kind != ProblemKind::mobility)
    throw std::invalid_argument("evaluate_field_grid: only single-layer representations");
  const bool stokes = rep.kind == ProblemKind::mobility;
  FieldGrid g;
  g.nx = nx;
  g.ny = ny;
  g.ncomp = stokes ? 2 : 1;
  g.lo = lo;
  g.hi = hi;
  g.region.assign((std::size_t)nx * ny, -1);
  g.values.assign((std::size_t)g.ncomp * nx * ny, std::numeric_limits<double>::quiet_NaN());

  std::vector<Vec2> ext;
  std::vector<std::size_t> ext_idx;
  for (int iy = 0; iy < ny; iy++) {
    for (int ix = 0; ix < nx; ix++) {
      const std::size_t k = (std::size_t)iy * nx + ix;
      const Vec2 p = g.point(ix, iy);
      for (int b = 0; b < (int)asmb.bodies.size(); b++) {
        if (point_inside(asmb.bodies[b], p)) {
          g.region[k] = b;
          break;
        }
      }
      if (g.region[k] < 0) {
        ext.push_back(p);
        ext_idx.push_back(k);
      } else if (fill_interior) {
        const int b = g.region[k];
        if (stokes) {
          const Vec2 uv = rep.v[b] + rep.omega[b] * perp(p - asmb.bodies[b].centroid);
          g.values[2 * k] = uv.x;
          g.values[2 * k + 1] = uv.y;
        } else {
          g.values[k] = rep.phi[b];
        }
      }
    }
  }

  const std::vector<int> sides(ext.size(), +1);  // grid exterior = exterior of every body
  std::vector<double> acc((std::size_t)g.ncomp * ext.size(), 0.0);
  for (int s = 0; s < (int)asmb.bodies.size(); s++) {
    const Discretization& ds = asmb.bodies[s];
    if (stokes) {
      std::vector<double> slice(rep.total_density.begin() + 2 * asmb.offset[s],
                                rep.total_density.begin() + 2 * (asmb.offset[s] + ds.n));
      const std::vector<double> vals = eval_stokes_slp(ds, slice, ext, cfg.near, &sides);
      for (std::size_t t = 0; t < acc.size(); t++) acc[t] += vals[t];
    } else {
      std::vector<double> slice(rep.total_density.begin() + asmb.offset[s],
                                rep.total_density.begin() + asmb.offset[s] + ds.n);
      const std::vector<double> vals = eval_laplace_slp(ds, slice, ext, cfg.near, &sides);
      for (std::size_t t = 0; t < acc.size(); t++) acc[t] += vals[t];
    }
  }
  for (std::size_t t = 0; t < ext.size(); t++) {
    if (stokes) {
      g.values[2 * ext_idx[t]] = acc[2 * t] + rep.u_inf.x;
      g.values[2 * ext_idx[t] + 1] = acc[2 * t + 1] + rep.u_inf.y;
    } else {
      g.values[ext_idx[t]] = acc[t] + rep.u_inf_scalar;
    }
  }
  return g;
}

} // namespace bie2d
