#include "debary/mobius.hpp"

#include <cmath>

namespace debary {

void mobius_translate_columns(const Vec& w, const Mat& points, Mat& out) {
  const double w2 = w.squaredNorm();
  out.resize(points.rows(), points.cols());
  for (Index i = 0; i < points.cols(); ++i) {
    const auto x = points.col(i);
    const double x2 = x.squaredNorm();
    const double wx = w.dot(x);
    out.col(i) = (x * (1.0 - w2) + w * (1.0 + x2 + 2.0 * wx)) / (1.0 + w2 * x2 + 2.0 * wx);
  }
}

Vec mobius_translate_checked(const Vec& w, const Vec& x) {
  if (w.norm() >= 1.0) {
    throw Error(ErrorCode::PointOutsideBall, "translation center must satisfy |w| < 1");
  }
  if (x.norm() > 1.0 + kSphereTol) {
    throw Error(ErrorCode::InvalidArgument, "argument must lie in the closed unit ball");
  }
  return mobius_translate(w, x);
}

namespace {

void check_orthogonal(const Mat& rho) {
  if (rho.rows() != rho.cols()) {
    throw Error(ErrorCode::InvalidArgument, "rotation part must be square");
  }
  const double defect = (rho.transpose() * rho - Mat::Identity(rho.rows(), rho.cols()))
                            .cwiseAbs()
                            .maxCoeff();
  if (defect > 1e-12) {
    throw Error(ErrorCode::InvalidArgument,
                "rotation part is not orthogonal (defect " + std::to_string(defect) + ")");
  }
}

}  // namespace

MobiusMap::MobiusMap(BallPoint w, Mat rho) : w_(std::move(w)), rho_(std::move(rho)) {
  check_orthogonal(rho_);
  if (rho_.rows() != w_.ambient_dim()) {
    throw Error(ErrorCode::InvalidArgument, "translation and rotation dimensions disagree");
  }
  det_sign_ = rho_.determinant() > 0.0 ? 1 : -1;
}

MobiusMap MobiusMap::identity(int ambient_dim) {
  return MobiusMap(BallPoint::origin(ambient_dim), Mat::Identity(ambient_dim, ambient_dim));
}

MobiusMap MobiusMap::translation(const BallPoint& w) {
  const int k = w.ambient_dim();
  return MobiusMap(w, Mat::Identity(k, k));
}

MobiusMap MobiusMap::rotation(Mat rho) {
  const int k = static_cast<int>(rho.rows());
  return MobiusMap(BallPoint::origin(k), std::move(rho));
}

MobiusMap MobiusMap::reflection(int ambient_dim) {
  Mat rho = Mat::Identity(ambient_dim, ambient_dim);
  rho(ambient_dim - 1, ambient_dim - 1) = -1.0;
  return MobiusMap(BallPoint::origin(ambient_dim), std::move(rho));
}

Vec MobiusMap::apply(const Vec& x) const {
  Vec rotated = rho_ * x;
  return mobius_translate(w_.coords(), rotated);
}

MobiusMap MobiusMap::inverse() const {
  // (t_w o rho)^{-1} = rho^T o t_{-w} = t_{-rho^T w} o rho^T, exactly.
  Vec wi = -(rho_.transpose() * w_.coords());
  return MobiusMap(BallPoint(std::move(wi)), rho_.transpose());
}

double MobiusMap::boundary_jacobian_norm(const SpherePoint& zeta) const {
  const int n = zeta.sphere_dim();
  const Vec rz = rho_ * zeta.coords();
  const double w2 = w_.coords().squaredNorm();
  const double d2 = (rz + w_.coords()).squaredNorm();
  return std::pow((1.0 - w2) / d2, n);
}

MobiusMap compose(const MobiusMap& g, const MobiusMap& h) {
  const int k = g.ambient_dim();
  if (h.ambient_dim() != k) {
    throw Error(ErrorCode::InvalidArgument, "cannot compose maps of different dimensions");
  }
  const Vec w = g.apply(h.translation_part().coords());

  // Residual map t_{-w} o g o h fixes the origin, hence acts linearly on the
  // sphere; its matrix is read off the standard basis and cleaned up by
  // Gram-Schmidt against accumulated roundoff.
  Mat rho(k, k);
  Vec basis = Vec::Zero(k);
  for (int j = 0; j < k; ++j) {
    basis.setZero();
    basis[j] = 1.0;
    rho.col(j) = mobius_translate(Vec(-w), Vec(g.apply(h.apply(basis))));
  }
  for (int j = 0; j < k; ++j) {
    for (int p = 0; p < j; ++p) rho.col(j) -= rho.col(p).dot(rho.col(j)) * rho.col(p);
    const double nj = rho.col(j).norm();
    if (nj < 1e-12) {
      throw Error(ErrorCode::InvalidArgument, "degenerate composition: orthonormalization failed");
    }
    rho.col(j) /= nj;
  }
  return MobiusMap(BallPoint(w), std::move(rho));
}

double hyperbolic_distance(const BallPoint& a, const BallPoint& b) {
  const double num = (a.coords() - b.coords()).squaredNorm();
  const double den = (1.0 - a.coords().squaredNorm()) * (1.0 - b.coords().squaredNorm());
  return std::acosh(1.0 + 2.0 * num / den);
}

SpherePoint stereo_lift(const ChartValue& z) {
  Vec p(3);
  if (z.infinite) {
    p << 0.0, 0.0, -1.0;
    return SpherePoint(std::move(p));
  }
  const double a = std::norm(z.value);
  p << 2.0 * z.value.real(), 2.0 * z.value.imag(), 1.0 - a;
  p /= 1.0 + a;
  return SpherePoint(std::move(p));
}

ChartValue stereo_project(const SpherePoint& p) {
  if (p.ambient_dim() != 3) {
    throw Error(ErrorCode::InvalidArgument, "stereographic chart is defined on S^2 only");
  }
  const double den = 1.0 + p[2];
  if (den <= kSphereTol) return ChartValue::inf();
  return ChartValue(Cplx(p[0] / den, p[1] / den));
}

}  // namespace debary
