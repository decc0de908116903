#pragma once

// Test-only oracles, independent of the library's solver paths: an adaptive
// RK4 integrator of the barycentric flow, numeric differentials, and simple
// reference quadratures.

#include "debary/barycenter.hpp"
#include "debary/measure.hpp"

#include <cmath>

namespace debary::testing {

/// Follows dw/dt = V(w) from the origin until |V| <= tol. Step doubling keeps
/// it adaptive enough for desk-scale measures.
inline Vec flow_to_zero(const SphereMeasure& mu, double tol = 1e-13) {
  const int k = mu.ambient_dim();
  Vec w = Vec::Zero(k);
  auto V = [&](const Vec& at) { return field(mu, BallPoint(at)).vector; };
  double h = 0.05;
  for (int it = 0; it < 2000000; ++it) {
    const Vec k1 = V(w);
    if (k1.norm() <= tol) break;
    const Vec k2 = V(w + 0.5 * h * k1);
    const Vec k3 = V(w + 0.5 * h * k2);
    const Vec k4 = V(w + h * k3);
    const Vec full = w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const Vec h1 = V(w + 0.25 * h * k1);
    const Vec half = w + h / 2.0 / 6.0 *
                         (k1 + 2.0 * h1 + 2.0 * V(w + 0.25 * h * h1) +
                          V(w + 0.5 * h * V(w + 0.25 * h * h1)));
    if ((full - half).norm() > 1e-12 && h > 1e-4) {
      h *= 0.5;
      continue;
    }
    w = full;
    if (h < 0.2) h *= 1.5;
  }
  return w;
}

/// Central-difference differential of a ball map restricted to R^{k}.
template <class Fn>
Mat numeric_jacobian(const Fn& f, const Vec& at, double h = 1e-6) {
  const int k = static_cast<int>(at.size());
  Vec base = f(at);
  Mat jac(base.size(), k);
  for (int j = 0; j < k; ++j) {
    Vec p = at, m = at;
    p[j] += h;
    m[j] -= h;
    jac.col(j) = (f(p) - f(m)) / (2.0 * h);
  }
  return jac;
}

/// Differential of the boundary restriction of a sphere self-map at zeta,
/// expressed in orthonormal tangent frames; singular values of the result
/// test conformality.
template <class Fn>
Mat boundary_differential(const Fn& f, const Vec& zeta, double h = 1e-5) {
  const int k = static_cast<int>(zeta.size());
  // tangent frame at zeta
  Mat frame(k, k - 1);
  int skip = 0;
  zeta.cwiseAbs().maxCoeff(&skip);
  int c = 0;
  for (int j = 0; j < k; ++j) {
    if (j == skip) continue;
    Vec v = Vec::Unit(k, j) - zeta * zeta[j];
    for (int p = 0; p < c; ++p) v -= frame.col(p).dot(v) * frame.col(p);
    frame.col(c++) = v / v.norm();
  }
  const Vec img = f(zeta);
  Mat iframe(k, k - 1);
  img.cwiseAbs().maxCoeff(&skip);
  c = 0;
  for (int j = 0; j < k; ++j) {
    if (j == skip) continue;
    Vec v = Vec::Unit(k, j) - img * img[j];
    for (int p = 0; p < c; ++p) v -= iframe.col(p).dot(v) * iframe.col(p);
    iframe.col(c++) = v / v.norm();
  }
  Mat d(k - 1, k - 1);
  for (int j = 0; j < k - 1; ++j) {
    Vec p = (zeta + h * frame.col(j)).normalized();
    Vec m = (zeta - h * frame.col(j)).normalized();
    d.col(j) = iframe.transpose() * (f(p) - f(m)) / (2.0 * h);
  }
  return d;
}

}  // namespace debary::testing
