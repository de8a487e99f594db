#include <catch2/catch_amalgamated.hpp>

#include "bie2d/bie2d.hpp"
#include "test_util.hpp"

#include <array>
#include <cmath>
#include <random>

using namespace bie2d;

// Criterion: one-sided finite-difference limits taken from off-surface field
// samples must reproduce the analytic jump relations
//   d/dn S[mu]|_± = (∓ 1/2) mu + K' mu          (Laplace)
//   t(S[mu])|_±   = (∓ 1/2) mu + Kcal mu        (Stokes traction)
// to 1e-6.  All FD sample points are kept at distances where the tiered
// evaluator is spectrally accurate, so the FD error itself dominates.

namespace {

// Random band-limited density with modes 1..kmax (no mean component).
std::vector<double> random_modes(const Discretization& d, int kmax, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> a(kmax + 1), b(kmax + 1);
  for (int k = 1; k <= kmax; k++) {
    a[k] = coef(rng);
    b[k] = coef(rng);
  }
  std::vector<double> f(d.n, 0.0);
  for (int i = 0; i < d.n; i++)
    for (int k = 1; k <= kmax; k++)
      f[i] += a[k] * std::cos(k * d.s[i]) + b[k] * std::sin(k * d.s[i]);
  return f;
}

// One-sided 7-point derivative at the anchored end of v[0..6] sampled at
// distances 0, e, 2e, ..., 6e (6th order).
double one_sided_deriv(const std::array<double, 7>& v, double e) {
  static const double c[7] = {-49.0 / 20.0, 6.0, -15.0 / 2.0, 20.0 / 3.0,
                              -15.0 / 4.0,  6.0 / 5.0, -1.0 / 6.0};
  double acc = 0.0;
  for (int j = 0; j < 7; j++) acc += c[j] * v[j];
  return acc / e;
}

// Lagrange extrapolation to 0 from samples at (3..8) * delta.
double extrapolate_to_zero(const std::array<double, 6>& v) {
  static const double w[6] = {56.0, -210.0, 336.0, -280.0, 120.0, -21.0};
  double acc = 0.0;
  for (int j = 0; j < 6; j++) acc += w[j] * v[j];
  return acc;
}

}  // namespace

TEST_CASE("normal-derivative jump of the Laplace single layer", "[jump]") {
  struct Case {
    const char* name;
    Discretization d;
  };
  for (Case cs : {Case{"circle", tu::unit_circle(512)}, Case{"star", tu::splash_body(3, 1024)}}) {
    INFO(cs.name);
    const Discretization& d = cs.d;
    const std::vector<double> mu = random_modes(d, 3, 99u);
    const std::vector<double> kmu = self_laplace_dlp_adj(d, mu);

    for (int j : {5, 120, 260, 401}) {
      const double h = local_spacing(d, j);
      const double e = 0.8 * h;
      // Field samples along the outward normal on both sides; the on-curve
      // sample is legitimate because S is continuous.
      std::vector<Vec2> pts;
      std::vector<int> sides;
      for (int m = 0; m <= 6; m++) {
        pts.push_back(d.x[j] + (m * e) * d.normal[j]);
        sides.push_back(+1);
      }
      for (int m = 0; m <= 6; m++) {
        pts.push_back(d.x[j] - (m * e) * d.normal[j]);
        sides.push_back(-1);
      }
      const std::vector<double> u = eval_laplace_slp(d, mu, pts, {}, &sides);
      std::array<double, 7> vo{}, vi{};
      for (int m = 0; m <= 6; m++) {
        vo[m] = u[m];
        vi[m] = u[7 + m];
      }
      const double dn_out = one_sided_deriv(vo, e);
      const double dn_in = -one_sided_deriv(vi, e);  // chain rule: inward samples
      REQUIRE(std::abs(dn_out - (-0.5 * mu[j] + kmu[j])) < 1e-6);
      REQUIRE(std::abs(dn_in - (+0.5 * mu[j] + kmu[j])) < 1e-6);
      // And the jump itself: [d/dn S] = -mu.
      REQUIRE(std::abs((dn_out - dn_in) + mu[j]) < 2e-6);
    }
  }
}

TEST_CASE("traction jump of the Stokes single layer", "[jump]") {
  struct Case {
    const char* name;
    Discretization d;
  };
  for (Case cs : {Case{"circle", tu::unit_circle(512)}, Case{"star", tu::splash_body(4, 1024)}}) {
    INFO(cs.name);
    const Discretization& d = cs.d;
    std::vector<double> mu(2 * d.n);
    {
      const std::vector<double> fx = random_modes(d, 3, 1234u);
      const std::vector<double> fy = random_modes(d, 3, 4321u);
      for (int i = 0; i < d.n; i++) {
        mu[2 * i] = fx[i];
        mu[2 * i + 1] = fy[i];
      }
    }
    const std::vector<double> kmu = self_stokes_traction(d, mu);

    auto traction_at = [&](Vec2 x, Vec2 nrm, double eg) {
      // velocity gradient by 4-point central differences, pressure directly
      std::vector<Vec2> pts{Vec2{x.x + eg, x.y},     Vec2{x.x - eg, x.y},
                            Vec2{x.x + 2 * eg, x.y}, Vec2{x.x - 2 * eg, x.y},
                            Vec2{x.x, x.y + eg},     Vec2{x.x, x.y - eg},
                            Vec2{x.x, x.y + 2 * eg}, Vec2{x.x, x.y - 2 * eg},
                            x};
      const std::vector<double> u = eval_stokes_slp(d, mu, pts);
      const std::vector<double> p = eval_stokes_slp_pressure(d, mu, {x});
      auto U = [&](int i) { return Vec2{u[2 * i], u[2 * i + 1]}; };
      const Vec2 dux = (8.0 * (U(0) - U(1)) - (U(2) - U(3))) / (12.0 * eg);
      const Vec2 duy = (8.0 * (U(4) - U(5)) - (U(6) - U(7))) / (12.0 * eg);
      // t = (grad u + grad u^T) n - p n with unit viscosity.
      return Vec2{2.0 * dux.x * nrm.x + (duy.x + dux.y) * nrm.y - p[0] * nrm.x,
                  (dux.y + duy.x) * nrm.x + 2.0 * duy.y * nrm.y - p[0] * nrm.y};
    };

    for (int j : {33, 190, 350}) {
      const double h = local_spacing(d, j);
      const double eg = 0.3 * h;
      for (double side : {+1.0, -1.0}) {
        std::array<double, 6> tx{}, ty{};
        for (int m = 0; m < 6; m++) {
          const double delta = (1.2 + 0.4 * m) * h;
          const Vec2 x = d.x[j] + (side * delta) * d.normal[j];
          const Vec2 t = traction_at(x, d.normal[j], eg);
          tx[m] = t.x;
          ty[m] = t.y;
        }
        const Vec2 lim{extrapolate_to_zero(tx), extrapolate_to_zero(ty)};
        const Vec2 expect{-side * 0.5 * mu[2 * j] + kmu[2 * j],
                          -side * 0.5 * mu[2 * j + 1] + kmu[2 * j + 1]};
        REQUIRE(norm(lim - expect) < 1e-6);
      }
    }
  }
}
