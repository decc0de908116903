#pragma once

#include "debary/barycenter.hpp"

#include <mutex>
#include <unordered_map>
#include <vector>

namespace debary {

/// Value of the implicit system behind the extension: the normalized field F
/// of the pushforward measure and its two partial-derivative matrices, all in
/// recentered coordinates (transported so that the evaluation point and the
/// candidate value sit at the origin).
struct ImplicitSystemValue {
  Vec F;
  Mat Jw;
  Mat Jz;
};

/// Barycentric extension of a sphere map to the closed ball: on the sphere it
/// is the map itself; at an interior z it is the conformal barycenter of the
/// sampled pushforward measure with atoms phi(t_z(node_i)) and the rule
/// weights as masses. Deterministic for a fixed rule; evaluations are
/// memoized on quantized coordinates when caching is enabled.
class ExtensionEvaluator {
 public:
  ExtensionEvaluator(SphereMap phi, QuadratureRule rule, SolverConfig solver = {},
                     bool enable_cache = true);

  const SphereMap& map() const { return phi_; }
  const QuadratureRule& rule() const { return rule_; }
  const SolverConfig& solver() const { return solver_; }
  int ambient_dim() const { return rule_.ambient_dim(); }

  /// Extension value at an interior point.
  BallPoint extend(const BallPoint& z) const;
  /// Full solver record (never cached).
  BarycenterResult extend_detail(const BallPoint& z) const;
  /// Boundary values are the map itself.
  SpherePoint boundary(const SpherePoint& zeta) const;
  /// Dispatches on |x|: sphere points within 1e-12 of the unit sphere use the
  /// boundary map, interior points the extension; the ring between
  /// 1 - 1e-15 and the sphere tolerance is rejected rather than extrapolated.
  Vec evaluate_closed(const Vec& x) const;

  ImplicitSystemValue implicit_system(const BallPoint& z, const BallPoint& w) const;

  /// Jacobian of the extension at z via the implicit function theorem in
  /// recentered coordinates, conjugated back through the transport
  /// differentials (which are conformal scalings).
  Mat jacobian(const BallPoint& z) const;

 private:
  void sample(const Vec& z, Mat& nodes_used, Mat& atoms) const;

  SphereMap phi_;
  QuadratureRule rule_;
  SolverConfig solver_;
  bool cache_enabled_;

  struct KeyHash {
    std::size_t operator()(const std::vector<long long>& k) const;
  };
  mutable std::unordered_map<std::vector<long long>, Vec, KeyHash> cache_;
  mutable std::mutex cache_mutex_;
};

struct ContinuityRow {
  double radius;
  double sup_distance;
};

/// Empirical modulus of continuity of the extension at a boundary point:
/// for each radius, the sup of |Phi(z) - phi(zeta0)| over interior points at
/// that distance from zeta0. Diagnostic only; the caller asserts continuity
/// of the underlying map.
std::vector<ContinuityRow> continuity_probe(const ExtensionEvaluator& ev,
                                            const SpherePoint& zeta0,
                                            const std::vector<double>& radii);

}  // namespace debary
