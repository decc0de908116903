#pragma once

#include "debary/measure.hpp"

#include <vector>

namespace debary {

struct SolverConfig {
  double tol = 1e-12;
  int max_iters = 200;
  double step_clamp = 0.5;
};

/// Value of the barycentric vector field at a ball point. `vector` carries the
/// Euclidean components; `normalized` is the same divided by (1 - |w|^2)/2 and
/// is an average of unit vectors, so |normalized| <= 1.
struct FieldValue {
  BallPoint at;
  Vec vector;
  Vec normalized;
};

struct BarycenterResult {
  BallPoint point;
  double residual = 0.0;  // |normalized field| at the returned point
  int iterations = 0;
  bool converged = false;
  // diagnostics for non-convergence triage
  double largest_atom_mass = 0.0;
  std::vector<double> residual_history;
};

/// The conformally natural vector field attached to an admissible measure,
///   V(w) = (1 - |w|^2)/2 * integral of (zeta (1-|w|^2) - 2 w (1 - <zeta,w>))
///          / (1 + |w|^2 - 2 <zeta,w>) d mu(zeta),
/// summed exactly over atoms and density nodes. At the origin this reduces to
/// half the Euclidean mean. Throws INADMISSIBLE when the measure fails the
/// atom check.
FieldValue field(const SphereMeasure& mu, const BallPoint& w);

/// Jacobian of the field at the origin: the matrix sending e to
/// -integral of (e - zeta <e, zeta>) d mu. Symmetric and negative definite
/// for admissible measures.
Mat field_jacobian_at_zero(const SphereMeasure& mu);

/// Conformal barycenter: the unique interior zero of the field. The solver
/// recenters the measure through the translation by the current iterate, takes
/// a Newton step at the origin (clamped to |step| <= step_clamp, halved while
/// the residual does not decrease), and transports back. Throws INADMISSIBLE;
/// returns converged = false after max_iters.
BarycenterResult barycenter(const SphereMeasure& mu, const SolverConfig& cfg = {});

/// Same solver on a bare weighted point cloud (masses need not sum to one);
/// the residual is |sum w_i t_{-b}(p_i)| / mass. Optional initial iterate
/// overrides the mean-based default.
BarycenterResult solve_barycenter_points(const Mat& points, const Vec& weights,
                                         const SolverConfig& cfg, const Vec* initial = nullptr);

enum class CapMetric { Chordal, Geodesic };

/// Mass of the closed cap around `center` of the given radius: chordal caps
/// are {zeta : |zeta - center| <= radius}, geodesic caps use the angle.
double cap_mass(const SphereMeasure& mu, const SpherePoint& center, double radius,
                CapMetric metric);

struct DirectionBoundResult {
  bool hypothesis_held = false;
  double cap_mass = 0.0;
  double threshold = 0.0;
  double inner_product = 0.0;  // <V(0), e_1>
};

/// Checks the concentration criterion with chordal radius delta in (0, sqrt 2):
/// if mu(cap(e_1, delta)) >= (1 + delta^2/2)/2 then the field at the origin
/// has positive first component. Reports the cap mass and the inner product.
DirectionBoundResult direction_bound_check(const SphereMeasure& mu, double delta,
                                           CapMetric metric = CapMetric::Chordal);

struct InwardProbeResult {
  double radius = 0.999;
  bool all_inward = false;  // false flags a probe failure near the boundary
};

/// Empirical radius r < 1 past which <V(w), w> < 0 at all sampled directions
/// and radii up to 0.999. Existence is guaranteed for admissible measures, so
/// a failure (all_inward = false) indicates insufficient quadrature.
InwardProbeResult inward_radius_probe(const SphereMeasure& mu, int samples,
                                      std::uint64_t seed = 0);

}  // namespace debary
