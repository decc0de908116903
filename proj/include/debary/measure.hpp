#pragma once

#include "debary/mobius.hpp"
#include "debary/quadrature.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace debary {

/// Measurable endomorphism of S^n as a black box. Evaluation renormalizes the
/// output onto the sphere and must be deterministic and thread-safe.
class SphereMap {
 public:
  using EvalFn = std::function<void(Eigen::Ref<const Vec>, Eigen::Ref<Vec>)>;

  SphereMap(int sphere_dim, EvalFn fn, std::string descriptor, bool continuous = true);

  static SphereMap identity(int sphere_dim);
  /// Boundary restriction of a Mobius map.
  static SphereMap mobius_boundary(const MobiusMap& g);

  void eval(Eigen::Ref<const Vec> in, Eigen::Ref<Vec> out) const;
  SpherePoint operator()(const SpherePoint& zeta) const;
  /// Applies the map to every column of `points` into `out` (may not alias).
  void eval_columns(const Mat& points, Mat& out) const;

  int sphere_dim() const { return sphere_dim_; }
  int ambient_dim() const { return sphere_dim_ + 1; }
  bool continuous() const { return continuous_; }
  const std::string& descriptor() const { return descriptor_; }

  /// Chart points near which the map cannot be evaluated (essential
  /// singularities of lifted transcendental maps). Quadrature consumers keep
  /// their nodes away from these.
  const std::vector<Vec>& singular_points() const { return singular_points_; }
  void set_singular_points(std::vector<Vec> pts) { singular_points_ = std::move(pts); }

 private:
  int sphere_dim_;
  EvalFn fn_;
  std::string descriptor_;
  bool continuous_;
  std::vector<Vec> singular_points_;
};

/// Admissible probability measure on S^n: an atomic part plus an optional
/// density part sampled on quadrature nodes (values of d mu / d eta_0).
/// Total mass is 1 within 1e-10; a measure is admissible when every atom
/// (after merging coincident ones) has mass strictly below 1/2.
class SphereMeasure {
 public:
  struct QuadPart {
    Mat nodes;    // (n+1) x M
    Vec weights;  // rule weights
    Vec density;  // nonnegative density values at the nodes
  };

  SphereMeasure(Mat atom_points, Vec atom_masses, std::optional<QuadPart> quad);

  static SphereMeasure from_atoms(Mat points, Vec masses);
  static SphereMeasure from_atoms(const std::vector<std::pair<Vec, double>>& atoms);

  int ambient_dim() const;
  int sphere_dim() const { return ambient_dim() - 1; }
  Index atom_count() const { return atom_masses_.size(); }
  const Mat& atom_points() const { return atom_points_; }
  const Vec& atom_masses() const { return atom_masses_; }
  const std::optional<QuadPart>& quad() const { return quad_; }

  double total_mass() const;
  /// Euclidean mean, exact finite sum over atoms and nodes.
  Vec mean() const;
  /// Second moment matrix, exact finite sum.
  Mat second_moment() const;

  /// Image measure under a Mobius map: atoms and quadrature nodes are
  /// transported exactly, masses and weights unchanged. Pushforwards are
  /// never rematerialized as densities.
  SphereMeasure pushforward(const MobiusMap& g) const;

 private:
  Mat atom_points_;
  Vec atom_masses_;
  std::optional<QuadPart> quad_;
};

/// Uniform probability measure sampled on the rule (density identically 1).
SphereMeasure uniform_measure(const QuadratureRule& rule);

/// Density of the harmonic measure with center w relative to the uniform
/// measure: ((1 - |w|^2) / |zeta - w|^2)^n.
double harmonic_density(const Vec& w, const Vec& zeta);

/// Harmonic measure with center w sampled on the rule. The sampled density is
/// renormalized to total mass one; the raw kernel mass is available through
/// harmonic_kernel_mass. Rejects |w| > r_max, where the kernel outruns the
/// rule's resolution.
SphereMeasure harmonic_measure(const BallPoint& w, const QuadratureRule& rule,
                               double r_max = 0.999);

/// Raw quadrature mass of the harmonic density (its defect from 1 measures
/// the rule's resolution of the kernel).
double harmonic_kernel_mass(const BallPoint& w, const QuadratureRule& rule);

/// The uniform rule measure pushed through a sphere map: atoms at
/// phi(node_i) with the rule weights as masses.
SphereMeasure sampled_pushforward(const SphereMap& phi, const QuadratureRule& rule);

struct AdmissibilityReport {
  bool admissible = true;
  double max_merged_mass = 0.0;
  Vec offending_point;  // empty when admissible
};

/// Merges atoms closer than 1e-12 and checks that no merged atom reaches
/// mass 1/2.
AdmissibilityReport check_admissible(const SphereMeasure& mu);

/// Largest point mass of an arbitrary weighted point cloud after merging
/// points closer than 1e-12. Used both for measures and for sampled
/// pushforwards inside the extension operator.
double max_merged_mass(const Mat& points, const Vec& weights, Vec* offender = nullptr);

/// Integral of a vector-valued test function against the pushforward measure
/// phi_*(eta_base), computed in pullback form:
///   sum_i w_i test(phi(t_base(node_i))),
/// which keeps the integrand bounded uniformly in |base|.
Vec pushforward_functional(const SphereMap& phi, const BallPoint& base,
                           const std::function<Vec(const Vec&)>& test,
                           const QuadratureRule& rule);

}  // namespace debary
