#include "debary/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace debary {

SphereMap::SphereMap(int sphere_dim, EvalFn fn, std::string descriptor, bool continuous)
    : sphere_dim_(sphere_dim),
      fn_(std::move(fn)),
      descriptor_(std::move(descriptor)),
      continuous_(continuous) {
  if (!fn_) throw Error(ErrorCode::InvalidArgument, "sphere map needs an evaluation function");
}

SphereMap SphereMap::identity(int sphere_dim) {
  return SphereMap(
      sphere_dim, [](Eigen::Ref<const Vec> in, Eigen::Ref<Vec> out) { out = in; }, "identity");
}

SphereMap SphereMap::mobius_boundary(const MobiusMap& g) {
  return SphereMap(
      g.ambient_dim() - 1,
      [g](Eigen::Ref<const Vec> in, Eigen::Ref<Vec> out) { out = g.apply(in); },
      "mobius boundary map");
}

void SphereMap::eval(Eigen::Ref<const Vec> in, Eigen::Ref<Vec> out) const {
  fn_(in, out);
  const double n = out.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::MapEvalError,
                "sphere map '" + descriptor_ + "' produced a non-normalizable value");
  }
  out /= n;
}

SpherePoint SphereMap::operator()(const SpherePoint& zeta) const {
  Vec out(zeta.ambient_dim());
  eval(zeta.coords(), out);
  return SpherePoint(std::move(out));
}

void SphereMap::eval_columns(const Mat& points, Mat& out) const {
  out.resize(points.rows(), points.cols());
  for (Index i = 0; i < points.cols(); ++i) {
    Eigen::Ref<Vec> col = out.col(i);
    eval(points.col(i), col);
  }
}

SphereMeasure::SphereMeasure(Mat atom_points, Vec atom_masses, std::optional<QuadPart> quad)
    : atom_points_(std::move(atom_points)),
      atom_masses_(std::move(atom_masses)),
      quad_(std::move(quad)) {
  if (atom_points_.cols() != atom_masses_.size()) {
    throw Error(ErrorCode::InvalidArgument, "atom point/mass count mismatch");
  }
  for (Index i = 0; i < atom_masses_.size(); ++i) {
    if (!(atom_masses_[i] > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "atom masses must be positive");
    }
    const double n = atom_points_.col(i).norm();
    if (!(n > 0.0)) throw Error(ErrorCode::PointOffSphere, "atom at the origin");
    atom_points_.col(i) /= n;
  }
  if (quad_) {
    if (quad_->nodes.cols() != quad_->weights.size() ||
        quad_->nodes.cols() != quad_->density.size()) {
      throw Error(ErrorCode::InvalidArgument, "quadrature part size mismatch");
    }
    if (atom_points_.cols() > 0 && quad_->nodes.rows() != atom_points_.rows()) {
      throw Error(ErrorCode::InvalidArgument, "atom and node dimensions disagree");
    }
    if ((quad_->density.array() < 0.0).any()) {
      throw Error(ErrorCode::InvalidArgument, "density values must be nonnegative");
    }
  }
  if (atom_points_.cols() == 0 && !quad_) {
    throw Error(ErrorCode::InvalidArgument, "measure needs atoms or a density part");
  }
  const double mass = total_mass();
  if (std::abs(mass - 1.0) > 1e-10) {
    throw Error(ErrorCode::InvalidArgument,
                "total mass " + std::to_string(mass) + " is not 1 within 1e-10");
  }
}

SphereMeasure SphereMeasure::from_atoms(Mat points, Vec masses) {
  return SphereMeasure(std::move(points), std::move(masses), std::nullopt);
}

SphereMeasure SphereMeasure::from_atoms(const std::vector<std::pair<Vec, double>>& atoms) {
  if (atoms.empty()) throw Error(ErrorCode::InvalidArgument, "no atoms given");
  Mat pts(atoms.front().first.size(), atoms.size());
  Vec ms(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    pts.col(Index(i)) = atoms[i].first;
    ms[Index(i)] = atoms[i].second;
  }
  return from_atoms(std::move(pts), std::move(ms));
}

int SphereMeasure::ambient_dim() const {
  return static_cast<int>(quad_ ? quad_->nodes.rows() : atom_points_.rows());
}

double SphereMeasure::total_mass() const {
  double mass = atom_masses_.sum();
  if (quad_) mass += weighted_sum(quad_->density, quad_->weights);
  return mass;
}

Vec SphereMeasure::mean() const {
  Vec m = Vec::Zero(ambient_dim());
  if (atom_masses_.size() > 0) m += weighted_colsum(atom_points_, atom_masses_);
  if (quad_) {
    Vec w = quad_->weights.cwiseProduct(quad_->density);
    m += weighted_colsum(quad_->nodes, w);
  }
  return m;
}

Mat SphereMeasure::second_moment() const {
  const int k = ambient_dim();
  Mat s = Mat::Zero(k, k);
  if (atom_masses_.size() > 0) {
    s += atom_points_ * atom_masses_.asDiagonal() * atom_points_.transpose();
  }
  if (quad_) {
    Vec w = quad_->weights.cwiseProduct(quad_->density);
    s += quad_->nodes * w.asDiagonal() * quad_->nodes.transpose();
  }
  return s;
}

SphereMeasure SphereMeasure::pushforward(const MobiusMap& g) const {
  Mat pts(atom_points_.rows(), atom_points_.cols());
  for (Index i = 0; i < atom_points_.cols(); ++i) {
    pts.col(i) = g.apply(atom_points_.col(i));
    pts.col(i) /= pts.col(i).norm();
  }
  std::optional<QuadPart> q;
  if (quad_) {
    QuadPart nq;
    nq.weights = quad_->weights;
    nq.density = quad_->density;
    nq.nodes.resize(quad_->nodes.rows(), quad_->nodes.cols());
    for (Index i = 0; i < quad_->nodes.cols(); ++i) {
      nq.nodes.col(i) = g.apply(quad_->nodes.col(i));
      nq.nodes.col(i) /= nq.nodes.col(i).norm();
    }
    q = std::move(nq);
  }
  return SphereMeasure(std::move(pts), atom_masses_, std::move(q));
}

SphereMeasure uniform_measure(const QuadratureRule& rule) {
  SphereMeasure::QuadPart q{rule.nodes, rule.weights, Vec::Ones(rule.size())};
  return SphereMeasure(Mat(rule.ambient_dim(), 0), Vec(0), std::move(q));
}

double harmonic_density(const Vec& w, const Vec& zeta) {
  const int n = static_cast<int>(zeta.size()) - 1;
  const double w2 = w.squaredNorm();
  const double d2 = (zeta - w).squaredNorm();
  return std::pow((1.0 - w2) / d2, n);
}

double harmonic_kernel_mass(const BallPoint& w, const QuadratureRule& rule) {
  Vec dens(rule.size());
  for (Index i = 0; i < rule.size(); ++i) dens[i] = harmonic_density(w.coords(), rule.nodes.col(i));
  return weighted_sum(dens, rule.weights);
}

SphereMeasure harmonic_measure(const BallPoint& w, const QuadratureRule& rule, double r_max) {
  if (w.norm() > r_max) {
    throw Error(ErrorCode::RadiusExceeded,
                "|w| = " + std::to_string(w.norm()) + " exceeds the kernel radius cap " +
                    std::to_string(r_max));
  }
  Vec dens(rule.size());
  for (Index i = 0; i < rule.size(); ++i) dens[i] = harmonic_density(w.coords(), rule.nodes.col(i));
  dens /= weighted_sum(dens, rule.weights);
  SphereMeasure::QuadPart q{rule.nodes, rule.weights, std::move(dens)};
  return SphereMeasure(Mat(rule.ambient_dim(), 0), Vec(0), std::move(q));
}

SphereMeasure sampled_pushforward(const SphereMap& phi, const QuadratureRule& rule) {
  Mat pts;
  phi.eval_columns(rule.nodes, pts);
  return SphereMeasure::from_atoms(std::move(pts), rule.weights);
}

double max_merged_mass(const Mat& points, const Vec& weights, Vec* offender) {
  const Index m = points.cols();
  if (m == 0) return 0.0;
  std::vector<Index> idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), Index(0));
  std::sort(idx.begin(), idx.end(),
            [&](Index a, Index b) { return points(0, a) < points(0, b); });

  // Sweep along the first coordinate; points within the merge tolerance of
  // each other necessarily fall in the same sweep window.
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  double best = 0.0;
  Index best_i = idx[0];
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (used[a]) continue;
    const Index i = idx[a];
    double mass = weights[i];
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      if (points(0, idx[b]) - points(0, i) > kAtomMergeTol) break;
      if (used[b]) continue;
      if ((points.col(idx[b]) - points.col(i)).norm() <= kAtomMergeTol) {
        mass += weights[idx[b]];
        used[b] = 1;
      }
    }
    if (mass > best) {
      best = mass;
      best_i = i;
    }
  }
  if (offender) *offender = points.col(best_i);
  return best;
}

AdmissibilityReport check_admissible(const SphereMeasure& mu) {
  AdmissibilityReport rep;
  if (mu.atom_count() == 0) return rep;
  Vec offender;
  rep.max_merged_mass = max_merged_mass(mu.atom_points(), mu.atom_masses(), &offender);
  if (rep.max_merged_mass >= 0.5) {
    rep.admissible = false;
    rep.offending_point = offender;
  }
  return rep;
}

Vec pushforward_functional(const SphereMap& phi, const BallPoint& base,
                           const std::function<Vec(const Vec&)>& test,
                           const QuadratureRule& rule) {
  Mat moved;
  mobius_translate_columns(base.coords(), rule.nodes, moved);
  Mat mapped;
  phi.eval_columns(moved, mapped);
  Mat values(0, 0);
  for (Index i = 0; i < rule.size(); ++i) {
    Vec v = test(mapped.col(i));
    if (values.rows() == 0) values.resize(v.size(), rule.size());
    values.col(i) = v;
  }
  return weighted_colsum(values, rule.weights);
}

}  // namespace debary
