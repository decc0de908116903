#include "debary/extension.hpp"

#include "debary/rng.hpp"

#include <cmath>

namespace debary {

ExtensionEvaluator::ExtensionEvaluator(SphereMap phi, QuadratureRule rule, SolverConfig solver,
                                       bool enable_cache)
    : phi_(std::move(phi)),
      rule_(std::move(rule)),
      solver_(solver),
      cache_enabled_(enable_cache) {
  if (phi_.ambient_dim() != rule_.ambient_dim()) {
    throw Error(ErrorCode::InvalidArgument, "map and rule dimensions disagree");
  }
}

std::size_t ExtensionEvaluator::KeyHash::operator()(const std::vector<long long>& k) const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (long long v : k) {
    h ^= static_cast<std::size_t>(v);
    h *= 0x100000001b3ULL;
  }
  return h;
}

void ExtensionEvaluator::sample(const Vec& z, Mat& nodes_used, Mat& atoms) const {
  const auto& singular = phi_.singular_points();
  nodes_used = rule_.nodes;

  if (!singular.empty()) {
    // Nudge the node set by small seeded rotations until no translated node
    // sits within 1e-6 of a singular point of the map.
    for (int attempt = 0; attempt < 16; ++attempt) {
      Mat moved;
      mobius_translate_columns(z, nodes_used, moved);
      double closest = 2.0;
      for (const Vec& s : singular) {
        for (Index i = 0; i < moved.cols(); ++i) {
          closest = std::min(closest, (moved.col(i) - s).norm());
        }
      }
      if (closest > 1e-6) break;
      CounterRng rng(0xDE5EEDULL + attempt, 3);
      const Mat rot = rng.rotation(rule_.ambient_dim());
      nodes_used = rot * rule_.nodes;
    }
  }

  Mat moved;
  mobius_translate_columns(z, nodes_used, moved);
  phi_.eval_columns(moved, atoms);

  Vec offender;
  const double peak = max_merged_mass(atoms, rule_.weights, &offender);
  if (peak >= 0.5) {
    throw Error(ErrorCode::InadmissibleSample,
                "sampled pushforward concentrates mass " + std::to_string(peak) +
                    " at one point; the map is too close to constant at this resolution");
  }
}

BarycenterResult ExtensionEvaluator::extend_detail(const BallPoint& z) const {
  Mat nodes, atoms;
  sample(z.coords(), nodes, atoms);
  BarycenterResult res = solve_barycenter_points(atoms, rule_.weights, solver_);
  if (!res.converged) {
    throw Error(ErrorCode::NoConvergence,
                "extension solve stalled at residual " + std::to_string(res.residual));
  }
  return res;
}

BallPoint ExtensionEvaluator::extend(const BallPoint& z) const {
  if (!cache_enabled_) return extend_detail(z).point;

  std::vector<long long> key(static_cast<std::size_t>(z.ambient_dim()));
  for (int i = 0; i < z.ambient_dim(); ++i) {
    key[static_cast<std::size_t>(i)] = std::llround(z[i] * 1e13);
  }
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return BallPoint(it->second);
  }
  BallPoint value = extend_detail(z).point;
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.emplace(std::move(key), value.coords());
  }
  return value;
}

SpherePoint ExtensionEvaluator::boundary(const SpherePoint& zeta) const { return phi_(zeta); }

Vec ExtensionEvaluator::evaluate_closed(const Vec& x) const {
  const double n = x.norm();
  if (std::abs(n - 1.0) <= kSphereTol) return boundary(SpherePoint(x)).coords();
  if (n < 1.0 - kBallBoundaryGap) return extend(BallPoint(x)).coords();
  throw Error(ErrorCode::PointOutsideBall,
              "|x| = " + std::to_string(n) + " is neither interior nor on the sphere");
}

ImplicitSystemValue ExtensionEvaluator::implicit_system(const BallPoint& z,
                                                        const BallPoint& w) const {
  const int k = rule_.ambient_dim();
  const int n = k - 1;
  Mat nodes, atoms;
  sample(z.coords(), nodes, atoms);
  Mat recentered;
  mobius_translate_columns(-w.coords(), atoms, recentered);

  ImplicitSystemValue sys;
  sys.F = weighted_colsum(recentered, rule_.weights);
  const Mat second = recentered * rule_.weights.asDiagonal() * recentered.transpose();
  sys.Jw = -2.0 * (Mat::Identity(k, k) * rule_.weights.sum() - second);
  // d/dz of the harmonic kernel at the origin contributes the factor 2n.
  sys.Jz = 2.0 * n * (recentered * rule_.weights.asDiagonal() * nodes.transpose());
  return sys;
}

Mat ExtensionEvaluator::jacobian(const BallPoint& z) const {
  const BallPoint w0 = extend(z);
  const ImplicitSystemValue sys = implicit_system(z, w0);

  Eigen::LLT<Mat> llt(Mat(-sys.Jw));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularJw,
                "implicit system matrix is not negative definite; quadrature breakdown");
  }
  const Mat at_origin = llt.solve(sys.Jz);
  // Transport differentials are the conformal scalings (1 - |.|^2).
  const double scale =
      (1.0 - w0.coords().squaredNorm()) / (1.0 - z.coords().squaredNorm());
  return scale * at_origin;
}

std::vector<ContinuityRow> continuity_probe(const ExtensionEvaluator& ev,
                                            const SpherePoint& zeta0,
                                            const std::vector<double>& radii) {
  const int k = ev.ambient_dim();
  const Vec target = ev.boundary(zeta0).coords();

  // Tangent frame at zeta0.
  Mat frame(k, k - 1);
  {
    Mat basis = Mat::Identity(k, k);
    int skip = 0;
    zeta0.coords().cwiseAbs().maxCoeff(&skip);
    int c = 0;
    for (int j = 0; j < k; ++j) {
      if (j == skip) continue;
      Vec v = basis.col(j) - zeta0.coords() * zeta0.coords().dot(basis.col(j));
      for (int p = 0; p < c; ++p) v -= frame.col(p).dot(v) * frame.col(p);
      frame.col(c++) = v / v.norm();
    }
  }

  std::vector<ContinuityRow> rows;
  for (double r : radii) {
    double sup = 0.0;
    // the radial approach point plus a small ring of tilted approaches
    std::vector<Vec> probes;
    probes.push_back(Vec(zeta0.coords() * (1.0 - r)));
    for (int j = 0; j < k - 1; ++j) {
      for (double s : {-0.5, 0.5}) {
        Vec p = zeta0.coords() * (1.0 - r) + frame.col(j) * (s * r);
        if (p.norm() < 1.0 - 1e-12) probes.push_back(std::move(p));
      }
    }
    for (const Vec& p : probes) {
      sup = std::max(sup, (ev.extend(BallPoint(p)).coords() - target).norm());
    }
    rows.push_back({r, sup});
  }
  return rows;
}

}  // namespace debary
