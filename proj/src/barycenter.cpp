#include "debary/barycenter.hpp"

#include "debary/rng.hpp"

#include <cmath>

namespace debary {

namespace {

void require_admissible(const SphereMeasure& mu) {
  const AdmissibilityReport rep = check_admissible(mu);
  if (!rep.admissible) {
    throw Error(ErrorCode::Inadmissible,
                "atom of mass " + std::to_string(rep.max_merged_mass) + " reaches 1/2");
  }
}

// Atoms and density nodes flattened to one weighted point cloud; all solver
// arithmetic happens on this view.
struct WeightedPoints {
  Mat pts;
  Vec wts;
};

WeightedPoints flatten(const SphereMeasure& mu) {
  const Index a = mu.atom_count();
  const Index q = mu.quad() ? mu.quad()->nodes.cols() : 0;
  WeightedPoints wp;
  wp.pts.resize(mu.ambient_dim(), a + q);
  wp.wts.resize(a + q);
  if (a > 0) {
    wp.pts.leftCols(a) = mu.atom_points();
    wp.wts.head(a) = mu.atom_masses();
  }
  if (q > 0) {
    wp.pts.rightCols(q) = mu.quad()->nodes;
    wp.wts.tail(q) = mu.quad()->weights.cwiseProduct(mu.quad()->density);
  }
  return wp;
}

}  // namespace

FieldValue field(const SphereMeasure& mu, const BallPoint& w) {
  require_admissible(mu);
  const WeightedPoints wp = flatten(mu);
  const Vec& wv = w.coords();
  const double w2 = wv.squaredNorm();

  Mat terms(wp.pts.rows(), wp.pts.cols());
  for (Index i = 0; i < wp.pts.cols(); ++i) {
    const auto zeta = wp.pts.col(i);
    const double zw = zeta.dot(wv);
    terms.col(i) = (zeta * (1.0 - w2) - 2.0 * wv * (1.0 - zw)) / (1.0 + w2 - 2.0 * zw);
  }
  FieldValue out{w, Vec(), Vec()};
  out.normalized = weighted_colsum(terms, wp.wts);
  out.vector = 0.5 * (1.0 - w2) * out.normalized;
  return out;
}

Mat field_jacobian_at_zero(const SphereMeasure& mu) {
  require_admissible(mu);
  const int k = mu.ambient_dim();
  return -(Mat::Identity(k, k) * mu.total_mass() - mu.second_moment());
}

BarycenterResult solve_barycenter_points(const Mat& points, const Vec& weights,
                                         const SolverConfig& cfg, const Vec* initial) {
  const int k = static_cast<int>(points.rows());
  const double mass = weights.sum();

  Vec w(k);
  if (initial) {
    w = *initial;
  } else {
    const Vec m = weighted_colsum(points, weights) / mass;
    const double mn = m.norm();
    w = (mn > 1e-300) ? Vec(m * (std::min(mn, 0.9) / mn)) : Vec::Zero(k);
  }

  Mat recentered(k, points.cols());
  auto residual_at = [&](const Vec& c, Mat& out) {
    mobius_translate_columns(-c, points, out);
    return weighted_colsum(out, weights).norm() / mass;
  };

  BarycenterResult res{BallPoint::origin(k)};
  double r = residual_at(w, recentered);
  res.residual_history.push_back(r);

  Mat trial(k, points.cols());
  while (r > cfg.tol && res.iterations < cfg.max_iters) {
    ++res.iterations;
    const Vec mean = weighted_colsum(recentered, weights);
    const Mat second = recentered * weights.asDiagonal() * recentered.transpose();
    // Newton step of the field at the origin of the recentered cloud.
    Vec step = (Mat::Identity(k, k) * mass - second).ldlt().solve(0.5 * mean);
    const double sn = step.norm();
    if (sn > cfg.step_clamp) step *= cfg.step_clamp / sn;

    Vec w_next = w;
    double r_next = r;
    while (true) {
      const Vec cand = mobius_translate(w, step);
      const double rc = residual_at(cand, trial);
      if (rc < r || step.norm() < 1e-17) {
        w_next = cand;
        r_next = rc;
        recentered.swap(trial);
        break;
      }
      step *= 0.5;
    }
    w = w_next;
    r = r_next;
    res.residual_history.push_back(r);
  }

  res.point = BallPoint(w);
  res.residual = r;
  res.converged = r <= cfg.tol;
  return res;
}

BarycenterResult barycenter(const SphereMeasure& mu, const SolverConfig& cfg) {
  const AdmissibilityReport rep = check_admissible(mu);
  if (!rep.admissible) {
    throw Error(ErrorCode::Inadmissible,
                "atom of mass " + std::to_string(rep.max_merged_mass) + " reaches 1/2");
  }
  const WeightedPoints wp = flatten(mu);
  BarycenterResult res = solve_barycenter_points(wp.pts, wp.wts, cfg);
  res.largest_atom_mass = rep.max_merged_mass;
  return res;
}

double cap_mass(const SphereMeasure& mu, const SpherePoint& center, double radius,
                CapMetric metric) {
  const Vec& c = center.coords();
  auto inside = [&](const auto& zeta) {
    if (metric == CapMetric::Chordal) return (zeta - c).norm() <= radius;
    const double dot = std::clamp(zeta.dot(c), -1.0, 1.0);
    return std::acos(dot) <= radius;
  };
  double mass = 0.0;
  for (Index i = 0; i < mu.atom_count(); ++i) {
    if (inside(mu.atom_points().col(i))) mass += mu.atom_masses()[i];
  }
  if (mu.quad()) {
    const auto& q = *mu.quad();
    for (Index i = 0; i < q.nodes.cols(); ++i) {
      if (inside(q.nodes.col(i))) mass += q.weights[i] * q.density[i];
    }
  }
  return mass;
}

DirectionBoundResult direction_bound_check(const SphereMeasure& mu, double delta,
                                           CapMetric metric) {
  if (!(delta > 0.0) || !(delta < std::sqrt(2.0))) {
    throw Error(ErrorCode::InvalidArgument, "delta must lie in (0, sqrt 2)");
  }
  DirectionBoundResult out;
  out.cap_mass = cap_mass(mu, SpherePoint::axis(mu.ambient_dim(), 0), delta, metric);
  out.threshold = (1.0 + delta * delta / 2.0) / 2.0;
  out.hypothesis_held = out.cap_mass >= out.threshold;
  out.inner_product = field(mu, BallPoint::origin(mu.ambient_dim())).vector[0];
  return out;
}

InwardProbeResult inward_radius_probe(const SphereMeasure& mu, int samples, std::uint64_t seed) {
  require_admissible(mu);
  const int k = mu.ambient_dim();
  CounterRng rng(seed, /*stream=*/17);
  Mat dirs(k, samples);
  for (int i = 0; i < samples; ++i) dirs.col(i) = rng.sphere_point(k);

  const std::vector<double> ladder = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8,
                                      0.85, 0.9, 0.95, 0.98, 0.99, 0.999};
  auto ring_inward = [&](double r) {
    for (int i = 0; i < samples; ++i) {
      const BallPoint w{Vec(r * dirs.col(i))};
      if (field(mu, w).vector.dot(w.coords()) >= 0.0) return false;
    }
    return true;
  };

  InwardProbeResult out;
  for (std::size_t j = ladder.size(); j-- > 0;) {
    if (!ring_inward(ladder[j])) {
      if (j + 1 < ladder.size()) {
        out.radius = ladder[j + 1];
        out.all_inward = true;
      }
      return out;
    }
  }
  out.radius = ladder.front();
  out.all_inward = true;
  return out;
}

}  // namespace debary
