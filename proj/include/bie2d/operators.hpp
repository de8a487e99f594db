#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bie2d/common.hpp"
#include "bie2d/discretization.hpp"
#include "bie2d/kernels.hpp"
#include "bie2d/linsolve.hpp"

namespace bie2d {

// ---------------------------------------------------------------------------
// Assembled boundary systems for the four problems.
//
// All solve operators involve only smooth kernels (double layers and the
// single-layer traction), so plain Nystrom quadrature with diagonal limits
// is spectrally accurate on graded discretizations.  Capacitance and
// resistance are bordered square systems: the ambient constant(s) join the
// unknown vector and the neutrality constraints join the equations.
// ---------------------------------------------------------------------------

struct FlatNodes {
  int n = 0;
  std::vector<Vec2> x, nrm, tng;
  std::vector<double> w, kappa;
  std::vector<int> body;
  std::vector<Vec2> centroid;      // per body
  std::vector<double> arclen;      // per body
  std::vector<double> moment;      // per body: int |x - centroid|^2 ds
  int nbodies = 0;
};

inline FlatNodes flatten(const Assembly& a) {
  FlatNodes f;
  f.n = a.total;
  f.nbodies = (int)a.bodies.size();
  f.x.reserve(f.n);
  f.nrm.reserve(f.n);
  f.tng.reserve(f.n);
  f.w.reserve(f.n);
  f.kappa.reserve(f.n);
  f.body.reserve(f.n);
  for (int b = 0; b < f.nbodies; b++) {
    const Discretization& d = a.bodies[b];
    f.centroid.push_back(d.centroid);
    f.arclen.push_back(d.arclength);
    f.moment.push_back(d.second_moment);
    for (int i = 0; i < d.n; i++) {
      f.x.push_back(d.x[i]);
      f.nrm.push_back(d.normal[i]);
      f.tng.push_back(d.tangent[i]);
      f.w.push_back(d.w[i]);
      f.kappa.push_back(d.kappa[i]);
      f.body.push_back(b);
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Input validation and completion densities.
// ---------------------------------------------------------------------------

inline void require_charge_neutral(const std::vector<double>& q) {
  double s = 0, a = 0;
  for (double v : q) { s += v; a += std::abs(v); }
  if (std::abs(s) > 1e-10 * std::max(a, 1.0))
    throw std::invalid_argument("charges must sum to zero (sum = " + std::to_string(s) + ")");
}

inline void require_force_free(const std::vector<Vec2>& F) {
  Vec2 s{0, 0};
  double a = 0;
  for (const Vec2& v : F) { s += v; a += std::abs(v.x) + std::abs(v.y); }
  if (std::abs(s.x) + std::abs(s.y) > 1e-10 * std::max(a, 1.0))
    throw std::invalid_argument("net force must vanish (sum = (" + std::to_string(s.x) + ", " +
                                std::to_string(s.y) + "))");
}

// sigma_i = q_i / |Gamma_i| per body (charge allocation density).
inline std::vector<double> make_sigma(const FlatNodes& f, const std::vector<double>& q) {
  if ((int)q.size() != f.nbodies) throw std::invalid_argument("make_sigma: one charge per body");
  require_charge_neutral(q);
  std::vector<double> s(f.n);
  for (int i = 0; i < f.n; i++) s[i] = q[f.body[i]] / f.arclen[f.body[i]];
  return s;
}

// rho_j = F_j/|Gamma_j| + T_j (x - c_j)^perp / W_j (force/torque allocation).
inline std::vector<double> make_rho(const FlatNodes& f, const std::vector<Vec2>& F,
                                    const std::vector<double>& T) {
  if ((int)F.size() != f.nbodies || (int)T.size() != f.nbodies)
    throw std::invalid_argument("make_rho: one force and torque per body");
  require_force_free(F);
  std::vector<double> r(2 * f.n);
  for (int i = 0; i < f.n; i++) {
    const int b = f.body[i];
    const Vec2 v = F[b] / f.arclen[b] + (T[b] / f.moment[b]) * perp(f.x[i] - f.centroid[b]);
    r[2 * i] = v.x;
    r[2 * i + 1] = v.y;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Matrix-free kernel applications over the full multi-body node set.
// Row-parallel with a fixed per-row summation order.
// ---------------------------------------------------------------------------

// out = (K mu): K kernel dG/dn_x (normal derivative of S at the target).
inline void apply_laplace_normal_deriv(const FlatNodes& f, const std::vector<double>& mu,
                                       std::vector<double>& out, int threads = 0) {
  out.assign(f.n, 0.0);
  parallel_for(0, f.n, [&](std::int64_t i) {
    const Vec2 xi = f.x[i], ni = f.nrm[i];
    double acc = 0;
    for (int j = 0; j < f.n; j++) {
      double k;
      if (j == (int)i) {
        k = laplace_dlp_diag(f.kappa[i]);
      } else {
        const Vec2 r = xi - f.x[j];
        k = -dot(r, ni) / (2.0 * pi * norm2(r));
      }
      acc += k * mu[j] * f.w[j];
    }
    out[i] = acc;
  }, threads);
}

// out = (K* mu): double layer, kernel dG/dn_y.
inline void apply_laplace_dlp(const FlatNodes& f, const std::vector<double>& mu,
                              std::vector<double>& out, int threads = 0) {
  out.assign(f.n, 0.0);
  parallel_for(0, f.n, [&](std::int64_t i) {
    const Vec2 xi = f.x[i];
    double acc = 0;
    for (int j = 0; j < f.n; j++) {
      double k;
      if (j == (int)i) {
        k = laplace_dlp_diag(f.kappa[i]);
      } else {
        const Vec2 r = f.x[j] - xi;
        k = -dot(r, f.nrm[j]) / (2.0 * pi * norm2(r));
      }
      acc += k * mu[j] * f.w[j];
    }
    out[i] = acc;
  }, threads);
}

// out = (Kcal mu): traction of the single layer at the target (Stokes).
inline void apply_stokes_traction(const FlatNodes& f, const std::vector<double>& mu,
                                  std::vector<double>& out, int threads = 0) {
  out.assign(2 * f.n, 0.0);
  parallel_for(0, f.n, [&](std::int64_t i) {
    const Vec2 xi = f.x[i], ni = f.nrm[i];
    double a1 = 0, a2 = 0;
    for (int j = 0; j < f.n; j++) {
      const double m1 = mu[2 * j] * f.w[j], m2 = mu[2 * j + 1] * f.w[j];
      if (j == (int)i) {
        const Vec2 t = f.tng[i];
        const double c = -f.kappa[i] / (2.0 * pi);
        const double td = t.x * m1 + t.y * m2;
        a1 += c * t.x * td;
        a2 += c * t.y * td;
      } else {
        const Vec2 r = xi - f.x[j];
        const double r2 = norm2(r);
        const double c = -dot(r, ni) / (pi * r2 * r2);
        const double rd = r.x * m1 + r.y * m2;
        a1 += c * r.x * rd;
        a2 += c * r.y * rd;
      }
    }
    out[2 * i] = a1;
    out[2 * i + 1] = a2;
  }, threads);
}

// out = (D mu): Stokes double layer (kernel normal at the source).
inline void apply_stokes_dlp(const FlatNodes& f, const std::vector<double>& mu,
                             std::vector<double>& out, int threads = 0) {
  out.assign(2 * f.n, 0.0);
  parallel_for(0, f.n, [&](std::int64_t i) {
    const Vec2 xi = f.x[i];
    double a1 = 0, a2 = 0;
    for (int j = 0; j < f.n; j++) {
      const double m1 = mu[2 * j] * f.w[j], m2 = mu[2 * j + 1] * f.w[j];
      if (j == (int)i) {
        const Vec2 t = f.tng[i];
        const double c = -f.kappa[i] / (2.0 * pi);
        const double td = t.x * m1 + t.y * m2;
        a1 += c * t.x * td;
        a2 += c * t.y * td;
      } else {
        const Vec2 r = xi - f.x[j];
        const double r2 = norm2(r);
        const double c = dot(r, f.nrm[j]) / (pi * r2 * r2);
        const double rd = r.x * m1 + r.y * m2;
        a1 += c * r.x * rd;
        a2 += c * r.y * rd;
      }
    }
    out[2 * i] = a1;
    out[2 * i + 1] = a2;
  }, threads);
}

// Per-body moments of a density: a_k = int_{Gamma_k} mu ds (Laplace), or
// F'_k = int mu ds and T'_k = int ((x-c_k)^perp, mu) ds (Stokes).
inline std::vector<double> body_integrals(const FlatNodes& f, const std::vector<double>& mu) {
  std::vector<double> a(f.nbodies, 0.0);
  for (int i = 0; i < f.n; i++) a[f.body[i]] += mu[i] * f.w[i];
  return a;
}

inline void body_force_torque(const FlatNodes& f, const std::vector<double>& mu,
                              std::vector<Vec2>& F, std::vector<double>& T) {
  F.assign(f.nbodies, Vec2{0, 0});
  T.assign(f.nbodies, 0.0);
  for (int i = 0; i < f.n; i++) {
    const int b = f.body[i];
    const Vec2 m{mu[2 * i], mu[2 * i + 1]};
    F[b] += f.w[i] * m;
    T[b] += f.w[i] * dot(perp(f.x[i] - f.centroid[b]), m);
  }
}

// ---------------------------------------------------------------------------
// Assembled systems.
// ---------------------------------------------------------------------------

struct AssembledSystem {
  int dim = 0;        // unknowns including border scalars
  int arity = 1;      // dofs per node
  int n_border = 0;
  MatVec matvec;      // y = A x on the full unknown vector
  std::vector<double> rhs;
  std::vector<double> scale;   // sqrt(w) per node dof, 1 for border dofs
  std::vector<double> source;  // sigma or rho (empty for bordered problems)
  std::function<Eigen::MatrixXd()> dense; // dense assembly of the same operator
};

namespace detail {

inline std::vector<double> node_scale(const FlatNodes& f, int arity, int n_border) {
  std::vector<double> s;
  s.reserve(arity * f.n + n_border);
  for (int i = 0; i < f.n; i++)
    for (int c = 0; c < arity; c++) s.push_back(std::sqrt(f.w[i]));
  for (int b = 0; b < n_border; b++) s.push_back(1.0);
  return s;
}

} // namespace detail

// Elastance: (1/2 I + K + L) mu = -(1/2 I + K) sigma, K the normal-derivative
// kernel and L_i mu = int_{Gamma_i} mu ds added to every node of body i.
inline AssembledSystem elastance_system(const FlatNodes& f, const std::vector<double>& q,
                                        int threads = 0) {
  AssembledSystem sys;
  sys.dim = f.n;
  sys.arity = 1;
  sys.n_border = 0;
  sys.source = make_sigma(f, q);
  sys.scale = detail::node_scale(f, 1, 0);
  sys.matvec = [f, threads](const std::vector<double>& mu, std::vector<double>& y) {
    apply_laplace_normal_deriv(f, mu, y, threads);
    const std::vector<double> a = body_integrals(f, mu);
    for (int i = 0; i < f.n; i++) y[i] += 0.5 * mu[i] + a[f.body[i]];
  };
  std::vector<double> ks;
  apply_laplace_normal_deriv(f, sys.source, ks, threads);
  sys.rhs.resize(f.n);
  for (int i = 0; i < f.n; i++) sys.rhs[i] = -(0.5 * sys.source[i] + ks[i]);
  sys.dense = [f]() {
    Eigen::MatrixXd A(f.n, f.n);
    for (int i = 0; i < f.n; i++) {
      for (int j = 0; j < f.n; j++) {
        double k;
        if (i == j) {
          k = laplace_dlp_diag(f.kappa[i]);
        } else {
          const Vec2 r = f.x[i] - f.x[j];
          k = -dot(r, f.nrm[i]) / (2.0 * pi * norm2(r));
        }
        A(i, j) = k * f.w[j] + (f.body[i] == f.body[j] ? f.w[j] : 0.0);
      }
      A(i, i) += 0.5;
    }
    return A;
  };
  return sys;
}

// Capacitance (bordered): unknowns (mu, c_inf);
//   (1/2 I + K*) mu + sum_k a_k G(., c_k) + c_inf = phi,  sum_k a_k = 0,
// with a_k = int_{Gamma_k} mu ds.  Outputs: q_j = a_j, u_inf = c_inf.
inline AssembledSystem capacitance_system(const FlatNodes& f, const std::vector<double>& phi,
                                          int threads = 0) {
  if ((int)phi.size() != f.nbodies)
    throw std::invalid_argument("capacitance_system: one potential per body");
  AssembledSystem sys;
  sys.dim = f.n + 1;
  sys.arity = 1;
  sys.n_border = 1;
  sys.scale = detail::node_scale(f, 1, 1);
  sys.matvec = [f, threads](const std::vector<double>& x, std::vector<double>& y) {
    const std::vector<double> mu(x.begin(), x.begin() + f.n);
    const double cinf = x[f.n];
    apply_laplace_dlp(f, mu, y, threads);
    y.resize(f.n + 1);
    const std::vector<double> a = body_integrals(f, mu);
    for (int i = 0; i < f.n; i++) {
      double src = 0;
      for (int k = 0; k < f.nbodies; k++) src += a[k] * laplace_G(f.x[i], f.centroid[k]);
      y[i] += 0.5 * mu[i] + src + cinf;
    }
    double asum = 0;
    for (double v : a) asum += v;
    y[f.n] = asum;
  };
  sys.rhs.resize(f.n + 1);
  for (int i = 0; i < f.n; i++) sys.rhs[i] = phi[f.body[i]];
  sys.rhs[f.n] = 0.0;
  sys.dense = [f]() {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(f.n + 1, f.n + 1);
    for (int i = 0; i < f.n; i++) {
      for (int j = 0; j < f.n; j++) {
        double k;
        if (i == j) {
          k = laplace_dlp_diag(f.kappa[i]);
        } else {
          const Vec2 r = f.x[j] - f.x[i];
          k = -dot(r, f.nrm[j]) / (2.0 * pi * norm2(r));
        }
        A(i, j) = k * f.w[j] + laplace_G(f.x[i], f.centroid[f.body[j]]) * f.w[j];
      }
      A(i, i) += 0.5;
      A(i, f.n) = 1.0;
    }
    for (int j = 0; j < f.n; j++) A(f.n, j) = f.w[j];
    return A;
  };
  return sys;
}

// Mobility: (1/2 I + Kcal + Lbold) mu = -(1/2 I + Kcal) rho, where Lbold_i
// adds int mu_i ds plus (x-c_i)^perp int ((y-c_i)^perp, mu_i) ds.
inline AssembledSystem mobility_system(const FlatNodes& f, const std::vector<Vec2>& F,
                                       const std::vector<double>& T, int threads = 0) {
  AssembledSystem sys;
  sys.dim = 2 * f.n;
  sys.arity = 2;
  sys.n_border = 0;
  sys.source = make_rho(f, F, T);
  sys.scale = detail::node_scale(f, 2, 0);
  sys.matvec = [f, threads](const std::vector<double>& mu, std::vector<double>& y) {
    apply_stokes_traction(f, mu, y, threads);
    std::vector<Vec2> Fb;
    std::vector<double> Tb;
    body_force_torque(f, mu, Fb, Tb);
    for (int i = 0; i < f.n; i++) {
      const int b = f.body[i];
      const Vec2 add = Fb[b] + Tb[b] * perp(f.x[i] - f.centroid[b]);
      y[2 * i] += 0.5 * mu[2 * i] + add.x;
      y[2 * i + 1] += 0.5 * mu[2 * i + 1] + add.y;
    }
  };
  std::vector<double> kr;
  apply_stokes_traction(f, sys.source, kr, threads);
  sys.rhs.resize(2 * f.n);
  for (int i = 0; i < 2 * f.n; i++) sys.rhs[i] = -(0.5 * sys.source[i] + kr[i]);
  sys.dense = [f]() {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * f.n, 2 * f.n);
    for (int i = 0; i < f.n; i++) {
      const Vec2 xi = f.x[i], ni = f.nrm[i];
      for (int j = 0; j < f.n; j++) {
        Mat2 K;
        if (i == j) {
          K = stokes_diag(f.kappa[i], f.tng[i]);
        } else {
          K = stokes_traction(xi, f.x[j], ni);
        }
        const bool same = f.body[i] == f.body[j];
        const Vec2 pi_ = perp(f.x[i] - f.centroid[f.body[i]]);
        const Vec2 pj = perp(f.x[j] - f.centroid[f.body[j]]);
        A(2 * i, 2 * j) = (K.a11 + (same ? 1.0 + pi_.x * pj.x : 0.0)) * f.w[j];
        A(2 * i, 2 * j + 1) = (K.a12 + (same ? pi_.x * pj.y : 0.0)) * f.w[j];
        A(2 * i + 1, 2 * j) = (K.a21 + (same ? pi_.y * pj.x : 0.0)) * f.w[j];
        A(2 * i + 1, 2 * j + 1) = (K.a22 + (same ? 1.0 + pi_.y * pj.y : 0.0)) * f.w[j];
      }
      A(2 * i, 2 * i) += 0.5;
      A(2 * i + 1, 2 * i + 1) += 0.5;
    }
    return A;
  };
  return sys;
}

// Resistance (bordered): unknowns (mu, u_inf);
//   (1/2 I + D) mu + sum_k [stokeslet(., c_k) F'_k + rotlet(., c_k) T'_k]
//     + u_inf = v_i + w_i (x - c_i)^perp,
// two constraint rows sum_k F'_k = 0, with F'_k = int mu_k ds and
// T'_k = int ((y-c_k)^perp, mu_k) ds.
inline AssembledSystem resistance_system(const FlatNodes& f, const std::vector<Vec2>& v,
                                         const std::vector<double>& omega, int threads = 0) {
  if ((int)v.size() != f.nbodies || (int)omega.size() != f.nbodies)
    throw std::invalid_argument("resistance_system: one velocity and spin per body");
  AssembledSystem sys;
  sys.dim = 2 * f.n + 2;
  sys.arity = 2;
  sys.n_border = 2;
  sys.scale = detail::node_scale(f, 2, 2);
  sys.matvec = [f, threads](const std::vector<double>& x, std::vector<double>& y) {
    const std::vector<double> mu(x.begin(), x.begin() + 2 * f.n);
    const Vec2 uinf{x[2 * f.n], x[2 * f.n + 1]};
    apply_stokes_dlp(f, mu, y, threads);
    y.resize(2 * f.n + 2);
    std::vector<Vec2> Fb;
    std::vector<double> Tb;
    body_force_torque(f, mu, Fb, Tb);
    for (int i = 0; i < f.n; i++) {
      Vec2 add = uinf;
      for (int k = 0; k < f.nbodies; k++) {
        add += stokeslet(f.x[i], f.centroid[k]) * Fb[k];
        add += Tb[k] * rotlet(f.x[i], f.centroid[k]);
      }
      y[2 * i] += 0.5 * mu[2 * i] + add.x;
      y[2 * i + 1] += 0.5 * mu[2 * i + 1] + add.y;
    }
    Vec2 fs{0, 0};
    for (const Vec2& Fk : Fb) fs += Fk;
    y[2 * f.n] = fs.x;
    y[2 * f.n + 1] = fs.y;
  };
  sys.rhs.resize(2 * f.n + 2);
  for (int i = 0; i < f.n; i++) {
    const int b = f.body[i];
    const Vec2 rv = v[b] + omega[b] * perp(f.x[i] - f.centroid[b]);
    sys.rhs[2 * i] = rv.x;
    sys.rhs[2 * i + 1] = rv.y;
  }
  sys.rhs[2 * f.n] = 0.0;
  sys.rhs[2 * f.n + 1] = 0.0;
  sys.dense = [f]() {
    const int N = 2 * f.n + 2;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < f.n; i++) {
      const Vec2 xi = f.x[i];
      for (int j = 0; j < f.n; j++) {
        Mat2 K;
        if (i == j) {
          K = stokes_diag(f.kappa[i], f.tng[i]);
        } else {
          K = stokes_dlp(xi, f.x[j], f.nrm[j]);
        }
        // completion sources tied to the j-th node's moments
        const int bj = f.body[j];
        const Mat2 S = stokeslet(xi, f.centroid[bj]);
        const Vec2 R = rotlet(xi, f.centroid[bj]);
        const Vec2 pj = perp(f.x[j] - f.centroid[bj]);
        A(2 * i, 2 * j) = (K.a11 + S.a11 + R.x * pj.x) * f.w[j];
        A(2 * i, 2 * j + 1) = (K.a12 + S.a12 + R.x * pj.y) * f.w[j];
        A(2 * i + 1, 2 * j) = (K.a21 + S.a21 + R.y * pj.x) * f.w[j];
        A(2 * i + 1, 2 * j + 1) = (K.a22 + S.a22 + R.y * pj.y) * f.w[j];
      }
      A(2 * i, 2 * i) += 0.5;
      A(2 * i + 1, 2 * i + 1) += 0.5;
      A(2 * i, 2 * f.n) = 1.0;
      A(2 * i + 1, 2 * f.n + 1) = 1.0;
    }
    for (int j = 0; j < f.n; j++) {
      A(2 * f.n, 2 * j) = f.w[j];
      A(2 * f.n + 1, 2 * j + 1) = f.w[j];
    }
    return A;
  };
  return sys;
}

} // namespace bie2d
