#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace debary {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Cplx = std::complex<double>;
using Index = Eigen::Index;

constexpr double kSphereTol = 1e-12;       // |1 - |x|| allowed on sphere points
constexpr double kBallBoundaryGap = 1e-15; // ball points must satisfy |x| < 1 - gap
constexpr double kAtomMergeTol = 1e-12;    // atoms closer than this are one atom

enum class ErrorCode {
  Inadmissible,
  InadmissibleSample,
  NoConvergence,
  RadiusExceeded,
  MapEvalError,
  UnsupportedLevel,
  Indeterminate,
  SingularJw,
  PointOutsideBall,
  PointOffSphere,
  ParseError,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Point on the unit sphere S^n embedded in R^{n+1}. Renormalized on
/// construction so that ||coords| - 1| <= 1e-12 always holds.
class SpherePoint {
 public:
  explicit SpherePoint(Vec coords);

  static SpherePoint axis(int ambient_dim, int j);

  const Vec& coords() const { return coords_; }
  int ambient_dim() const { return static_cast<int>(coords_.size()); }
  int sphere_dim() const { return ambient_dim() - 1; }
  double operator[](int i) const { return coords_[i]; }

 private:
  Vec coords_;
};

/// Point of the open unit ball B^{n+1}. Construction rejects |x| >= 1 - 1e-15
/// instead of clamping; near-boundary inputs are an error, not a hint.
class BallPoint {
 public:
  explicit BallPoint(Vec coords);

  static BallPoint origin(int ambient_dim) { return BallPoint(Vec::Zero(ambient_dim)); }

  const Vec& coords() const { return coords_; }
  int ambient_dim() const { return static_cast<int>(coords_.size()); }
  double norm() const { return coords_.norm(); }
  double operator[](int i) const { return coords_[i]; }

 private:
  Vec coords_;
};

/// Weighted sum of matrix columns, accumulated pairwise over the column range
/// so results are reproducible and stable for large node counts.
Vec weighted_colsum(const Mat& points, const Vec& weights);

/// Pairwise sum of weights[i] * values[i].
double weighted_sum(const Vec& values, const Vec& weights);

}  // namespace debary
