#pragma once

#include "debary/core.hpp"

namespace debary {

/// The canonical Mobius translation of the closed unit ball that moves the
/// origin to w, evaluated at x (|w| < 1, |x| <= 1). Maps sphere to sphere and
/// ball to ball; its inverse is the translation by -w.
template <class DW, class DX>
typename DX::PlainObject mobius_translate(const Eigen::MatrixBase<DW>& w,
                                          const Eigen::MatrixBase<DX>& x) {
  const double w2 = w.squaredNorm();
  const double x2 = x.squaredNorm();
  const double wx = w.dot(x);
  const double den = 1.0 + w2 * x2 + 2.0 * wx;
  typename DX::PlainObject out =
      (x.derived() * (1.0 - w2) + w.derived() * (1.0 + x2 + 2.0 * wx)) / den;
  return out;
}

/// Columnwise mobius_translate: out.col(i) = translation-by-w applied to
/// points.col(i). out may not alias points.
void mobius_translate_columns(const Vec& w, const Mat& points, Mat& out);

/// Checked wrapper around mobius_translate for |x| <= 1; rejects |w| >= 1.
Vec mobius_translate_checked(const Vec& w, const Vec& x);

/// Element of the Mobius group of the ball in factored form: x -> t_w(rho x)
/// where t_w is the canonical translation and rho is orthogonal. The identity
/// is (w = 0, rho = I). det(rho) = +1 for the orientation preserving subgroup.
class MobiusMap {
 public:
  MobiusMap(BallPoint w, Mat rho);

  static MobiusMap identity(int ambient_dim);
  static MobiusMap translation(const BallPoint& w);
  static MobiusMap rotation(Mat rho);
  /// Reflection in the last coordinate hyperplane, rho = diag(1,...,1,-1).
  static MobiusMap reflection(int ambient_dim);

  const BallPoint& translation_part() const { return w_; }
  const Mat& rotation_part() const { return rho_; }
  int det_sign() const { return det_sign_; }
  int ambient_dim() const { return w_.ambient_dim(); }

  /// Apply to any point of the closed ball.
  Vec apply(const Vec& x) const;
  SpherePoint operator()(const SpherePoint& zeta) const { return SpherePoint(apply(zeta.coords())); }
  BallPoint operator()(const BallPoint& x) const { return BallPoint(apply(x.coords())); }

  MobiusMap inverse() const;

  /// Magnitude of the Jacobian determinant of the boundary restriction at
  /// zeta on S^n: ((1 - |w|^2) / |rho zeta + w|^2)^n. Rotations contribute 1.
  double boundary_jacobian_norm(const SpherePoint& zeta) const;

 private:
  BallPoint w_;
  Mat rho_;
  int det_sign_;
};

/// Composition g after h, renormalized to factored form. The translation part
/// is (g o h)(0); the orthogonal part is recovered by applying the residual
/// origin-fixing map to the standard basis and re-orthonormalizing.
MobiusMap compose(const MobiusMap& g, const MobiusMap& h);

/// Distance in the Poincare ball metric 2|dx| / (1 - |x|^2).
double hyperbolic_distance(const BallPoint& a, const BallPoint& b);

/// Coordinate on the Riemann sphere: a finite complex value or infinity.
struct ChartValue {
  Cplx value{0.0, 0.0};
  bool infinite = false;

  ChartValue() = default;
  ChartValue(Cplx v) : value(v) {}  // NOLINT: implicit by design
  ChartValue(double v) : value(v, 0.0) {}

  static ChartValue inf() {
    ChartValue c;
    c.infinite = true;
    return c;
  }
};

/// Identification of the extended plane with S^2:
///   z -> ( 2 Re z, 2 Im z, 1 - |z|^2 ) / (1 + |z|^2),
/// so 0 maps to (0,0,1), the unit circle to the equator, and infinity to
/// (0,0,-1). stereo_project is the inverse.
SpherePoint stereo_lift(const ChartValue& z);
ChartValue stereo_project(const SpherePoint& p);

}  // namespace debary
