#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "bie2d/common.hpp"

namespace bie2d {

// ---------------------------------------------------------------------------
// Unrestarted GMRES with modified Gram-Schmidt and Givens rotations.
//
// The iteration optionally runs in a rescaled inner product: with D =
// diag(scale) the system A x = b is solved as (D A D^-1) y = D b, y = D x,
// so that the Euclidean norm of the Krylov space approximates the L2(Gamma)
// norm when scale_i = sqrt(w_i).  The returned solution and the recorded
// residual history refer to the scaled system.
// ---------------------------------------------------------------------------

using MatVec = std::function<void(const std::vector<double>&, std::vector<double>&)>;

struct GmresOptions {
  double tol = 1e-6;   // relative residual target
  int max_iter = 500;
};

struct GmresResult {
  std::vector<double> x;
  std::vector<double> residual_history; // relative residuals, one per iteration
  int iterations = 0;
  bool converged = false;
};

inline GmresResult gmres(const MatVec& apply, const std::vector<double>& b,
                         const std::vector<double>& scale = {},
                         const GmresOptions& opt = {}) {
  const int n = (int)b.size();
  const bool scaled = !scale.empty();
  if (scaled && (int)scale.size() != n)
    throw std::invalid_argument("gmres: scale length mismatch");

  auto apply_scaled = [&](const std::vector<double>& y, std::vector<double>& out) {
    if (!scaled) {
      apply(y, out);
      return;
    }
    std::vector<double> tmp(n);
    for (int i = 0; i < n; i++) tmp[i] = y[i] / scale[i];
    apply(tmp, out);
    for (int i = 0; i < n; i++) out[i] *= scale[i];
  };

  std::vector<double> rhs(n);
  for (int i = 0; i < n; i++) rhs[i] = scaled ? b[i] * scale[i] : b[i];

  GmresResult res;
  res.x.assign(n, 0.0);

  double beta = 0;
  for (double v : rhs) beta += v * v;
  beta = std::sqrt(beta);
  if (beta == 0) {
    res.converged = true;
    return res;
  }

  const int m = std::min(opt.max_iter, n);
  std::vector<std::vector<double>> V;
  V.reserve(m + 1);
  V.push_back(rhs);
  for (double& v : V[0]) v /= beta;

  std::vector<std::vector<double>> H; // H[j] = column j, length j+2
  std::vector<double> cs(m), sn(m);
  std::vector<double> g(m + 1, 0.0);
  g[0] = beta;

  int k = 0;
  for (; k < m; k++) {
    std::vector<double> w(n);
    apply_scaled(V[k], w);
    std::vector<double> h(k + 2, 0.0);
    for (int i = 0; i <= k; i++) {
      double dotp = 0;
      for (int q = 0; q < n; q++) dotp += w[q] * V[i][q];
      h[i] = dotp;
      for (int q = 0; q < n; q++) w[q] -= dotp * V[i][q];
    }
    double wn = 0;
    for (double v : w) wn += v * v;
    wn = std::sqrt(wn);
    h[k + 1] = wn;

    // previously computed Givens rotations
    for (int i = 0; i < k; i++) {
      const double t = cs[i] * h[i] + sn[i] * h[i + 1];
      h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
      h[i] = t;
    }
    // new rotation to zero h[k+1]
    const double denom = std::hypot(h[k], h[k + 1]);
    cs[k] = (denom == 0) ? 1.0 : h[k] / denom;
    sn[k] = (denom == 0) ? 0.0 : h[k + 1] / denom;
    h[k] = denom;
    h[k + 1] = 0.0;
    g[k + 1] = -sn[k] * g[k];
    g[k] = cs[k] * g[k];
    H.push_back(std::move(h));

    const double rel = std::abs(g[k + 1]) / beta;
    res.residual_history.push_back(rel);
    if (rel < opt.tol || wn == 0) {
      k++;
      res.converged = true;
      break;
    }
    V.push_back(std::move(w));
    for (double& v : V.back()) v /= wn;
  }
  res.iterations = k;

  // back substitution: H (k x k upper triangular) y = g
  std::vector<double> y(k, 0.0);
  for (int i = k - 1; i >= 0; i--) {
    double s = g[i];
    for (int j = i + 1; j < k; j++) s -= H[j][i] * y[j];
    y[i] = s / H[i][i];
  }
  for (int i = 0; i < k; i++)
    for (int q = 0; q < n; q++) res.x[q] += y[i] * V[i][q];
  if (scaled)
    for (int q = 0; q < n; q++) res.x[q] /= scale[q];
  return res;
}

// ---------------------------------------------------------------------------
// Dense direct solve (LU with partial pivoting), the small-system oracle
// for the iterative path.
// ---------------------------------------------------------------------------

inline std::vector<double> dense_solve(const Eigen::MatrixXd& A, const std::vector<double>& b) {
  if (A.rows() != A.cols() || A.rows() != (Eigen::Index)b.size())
    throw std::invalid_argument("dense_solve: shape mismatch");
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
  Eigen::VectorXd x = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(rhs);
  return std::vector<double>(x.data(), x.data() + x.size());
}

// Weighted norm ||v||_D with D = diag(scale); used to compare solver paths.
inline double scaled_norm(const std::vector<double>& v, const std::vector<double>& scale) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); i++) {
    const double t = scale.empty() ? v[i] : v[i] * scale[i];
    s += t * t;
  }
  return std::sqrt(s);
}

} // namespace bie2d
