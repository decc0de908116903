#pragma once

#include "debary/expr.hpp"
#include "debary/extension.hpp"

#include <array>
#include <string>
#include <variant>
#include <vector>

namespace debary {

/// Rational map of the Riemann sphere given by coefficient lists in ascending
/// order. Numerator and denominator may share no roots (within 1e-10) and the
/// denominator may not vanish identically. Desk-scale degrees (<= 32).
class RationalMap {
 public:
  RationalMap(Eigen::VectorXcd num, Eigen::VectorXcd den);

  /// Pole-aware evaluation on the extended plane. Returns infinity when the
  /// denominator is negligible against the numerator; infinity itself is
  /// resolved by degree comparison.
  ChartValue eval(const ChartValue& z) const;

  int numerator_degree() const { return static_cast<int>(num_.size()) - 1; }
  int denominator_degree() const { return static_cast<int>(den_.size()) - 1; }
  int degree() const { return std::max(numerator_degree(), denominator_degree()); }
  const Eigen::VectorXcd& numerator() const { return num_; }
  const Eigen::VectorXcd& denominator() const { return den_; }

 private:
  Eigen::VectorXcd num_, den_;
};

/// Roots of a complex polynomial (ascending coefficients) via the companion
/// matrix.
std::vector<Cplx> poly_roots(const Eigen::VectorXcd& coeffs);

/// Ascending coefficient vector from a braced list.
inline Eigen::VectorXcd coeffs(std::initializer_list<Cplx> values) {
  Eigen::VectorXcd c(static_cast<Index>(values.size()));
  Index i = 0;
  for (const Cplx& v : values) c[i++] = v;
  return c;
}

/// Finite Blaschke product sigma * prod (z + a_j) / (1 + conj(a_j) z) with
/// |sigma| = 1 and |a_j| < 1. Unimodular on the unit circle by construction.
class BlaschkeProduct {
 public:
  BlaschkeProduct(Cplx sigma, std::vector<Cplx> zeros);

  ChartValue eval(const ChartValue& z) const;
  Cplx eval_disc(const Cplx& z) const;  // finite z off the poles

  int degree() const { return static_cast<int>(zeros_.size()); }
  Cplx sigma() const { return sigma_; }
  const std::vector<Cplx>& zeros() const { return zeros_; }
  Cplx value_at_zero() const;

 private:
  Cplx sigma_;
  std::vector<Cplx> zeros_;
};

/// Map of the plane defined by an expression in z (entire transcendental maps
/// enter here). Infinity is an essential singularity: evaluation there fails
/// and lifted quadrature keeps its nodes away.
class ExprPlaneMap {
 public:
  explicit ExprPlaneMap(Expression expression) : expr_(std::move(expression)) {}
  ChartValue eval(const ChartValue& z) const;
  const Expression& expression() const { return expr_; }

 private:
  Expression expr_;
};

using PlaneMap = std::variant<RationalMap, BlaschkeProduct, ExprPlaneMap>;

ChartValue eval_plane(const PlaneMap& f, const ChartValue& z);
std::string plane_map_descriptor(const PlaneMap& f);

/// Conjugate of a plane map by the stereographic identification, acting on
/// S^2. Expression maps carry the south-pole chart point as a singular point.
SphereMap lift(const PlaneMap& f);

/// Boundary-value map on S^1 (n = 1): the plane map evaluated on the unit
/// circle under the identification (x, y) = x + i y.
SphereMap circle_map(const PlaneMap& f);

/// Chart coordinate of an equatorial ball point (x3 dropped).
inline Cplx equatorial_chart(const Vec& x) { return Cplx(x[0], x[1]); }
inline Vec equatorial_point(const Cplx& z) {
  Vec x(3);
  x << z.real(), z.imag(), 0.0;
  return x;
}

/// Hyperbolic transport carrying the equatorial disc onto the geodesic disc
/// bounded by the lifted circle of chart radius t: the translation by
/// ((1 - t)/(1 + t)) e_3.
MobiusMap geodesic_disc_transport(double t);

struct ExperimentConfig {
  int level = 32;
  SolverConfig solver{};
  std::uint64_t seed = 1;
  int workers = 1;
};

/// One measured quantity; `pass` is meaningful only for asserted items.
struct CheckItem {
  std::string id;
  double value = 0.0;
  double threshold = 0.0;
  bool asserted = false;
  bool pass = true;
};

bool all_asserted_pass(const std::vector<CheckItem>& items);

struct AxisRow {
  double s;            // sample position on the vertical axis
  double height;       // third component of the image
  double axis_offset;  // distance of the image from the axis
};

/// Structure report for the extension of a Blaschke product: hemisphere
/// preservation (direct and through the field), equatorial disc invariance,
/// vertical-derivative structure, and the open-conjecture residuals, which
/// are recorded but never asserted.
struct BlaschkeStructureReport {
  std::string map_descriptor;
  std::vector<CheckItem> checks;
  double identity_conjecture_sup = 0.0;  // sup |chart(Phi(z)) - f(z)| on the disc grid
  bool has_fixed_origin = false;         // f(0) = 0, axis probe applies
  double origin_conjecture_residual = 0.0;  // |Phi(0)| when f(0) = 0
  std::vector<AxisRow> axis_rows;        // vertical-axis probe (recorded only)
  bool axis_heights_monotone = false;
};

BlaschkeStructureReport blaschke_experiment_suite(const BlaschkeProduct& f,
                                                  const ExperimentConfig& cfg);

/// Structure checks special to the power maps: fixed origin, the radial form
/// of the extension, preservation of the real interval and of rotational
/// equivariance, the radial profile, and the geodesic-disc correspondence
/// t -> t^d on boundary circles (with interior-ring residuals recorded).
struct ZdStructureReport {
  int degree = 1;
  std::vector<CheckItem> checks;
  std::vector<std::array<double, 2>> radial_profile;   // (r, h(r))
  std::vector<std::array<double, 3>> interior_rings;   // (t, ring radius, membership residual)
};

ZdStructureReport zd_structure_check(int degree, const ExperimentConfig& cfg,
                                     const std::vector<double>& disc_params = {0.5, 0.7, 0.9});

/// Boundary-value recovery on the disc (n = 1): the extension of the boundary
/// map must reproduce the map at interior probes, and the Cauchy integral of
/// the boundary samples provides an independent check of the boundary data.
struct InnerRecoveryReport {
  std::string map_descriptor;
  std::vector<CheckItem> checks;
  double sup_recovery_error = 0.0;
  double cauchy_oracle_error = 0.0;
};

InnerRecoveryReport inner_recovery_check(const PlaneMap& f, const ExperimentConfig& cfg);

}  // namespace debary
