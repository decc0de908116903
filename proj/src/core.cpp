#include "debary/core.hpp"

namespace debary {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Inadmissible: return "INADMISSIBLE";
    case ErrorCode::InadmissibleSample: return "INADMISSIBLE_SAMPLE";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::RadiusExceeded: return "RADIUS_EXCEEDED";
    case ErrorCode::MapEvalError: return "MAP_EVAL_ERROR";
    case ErrorCode::UnsupportedLevel: return "UNSUPPORTED_LEVEL";
    case ErrorCode::Indeterminate: return "INDETERMINATE";
    case ErrorCode::SingularJw: return "SINGULAR_JW";
    case ErrorCode::PointOutsideBall: return "POINT_OUTSIDE_BALL";
    case ErrorCode::PointOffSphere: return "POINT_OFF_SPHERE";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

SpherePoint::SpherePoint(Vec coords) : coords_(std::move(coords)) {
  const double n = coords_.norm();
  if (!(n > 0.0) || std::abs(n - 1.0) > 1e-6) {
    throw Error(ErrorCode::PointOffSphere,
                "cannot normalize vector of length " + std::to_string(n) + " onto the sphere");
  }
  coords_ /= n;
}

SpherePoint SpherePoint::axis(int ambient_dim, int j) {
  Vec v = Vec::Zero(ambient_dim);
  v[j] = 1.0;
  return SpherePoint(std::move(v));
}

BallPoint::BallPoint(Vec coords) : coords_(std::move(coords)) {
  const double n = coords_.norm();
  if (n >= 1.0 - kBallBoundaryGap) {
    throw Error(ErrorCode::PointOutsideBall,
                "|x| = " + std::to_string(n) + " is not strictly inside the unit ball");
  }
}

namespace {

Vec colsum_range(const Mat& points, const Vec& weights, Index begin, Index end) {
  if (end - begin <= 32) {
    Vec acc = Vec::Zero(points.rows());
    for (Index i = begin; i < end; ++i) acc += weights[i] * points.col(i);
    return acc;
  }
  const Index mid = begin + (end - begin) / 2;
  return colsum_range(points, weights, begin, mid) + colsum_range(points, weights, mid, end);
}

double sum_range(const Vec& values, const Vec& weights, Index begin, Index end) {
  if (end - begin <= 32) {
    double acc = 0.0;
    for (Index i = begin; i < end; ++i) acc += weights[i] * values[i];
    return acc;
  }
  const Index mid = begin + (end - begin) / 2;
  return sum_range(values, weights, begin, mid) + sum_range(values, weights, mid, end);
}

}  // namespace

Vec weighted_colsum(const Mat& points, const Vec& weights) {
  return colsum_range(points, weights, 0, points.cols());
}

double weighted_sum(const Vec& values, const Vec& weights) {
  return sum_range(values, weights, 0, values.size());
}

}  // namespace debary
