#include "debary/complex_maps.hpp"

#include "debary/parallel.hpp"
#include "debary/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace debary {

namespace {

Eigen::VectorXcd trim(Eigen::VectorXcd c) {
  Index last = c.size() - 1;
  while (last > 0 && std::abs(c[last]) == 0.0) --last;
  return c.head(last + 1).eval();
}

Cplx horner(const Eigen::VectorXcd& c, const Cplx& z) {
  Cplx acc = c[c.size() - 1];
  for (Index i = c.size() - 2; i >= 0; --i) acc = acc * z + c[i];
  return acc;
}

}  // namespace

std::vector<Cplx> poly_roots(const Eigen::VectorXcd& coeffs) {
  const Eigen::VectorXcd c = trim(coeffs);
  const Index d = c.size() - 1;
  if (d == 0) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
  for (Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (Index i = 0; i < d; ++i) companion(i, d - 1) = -c[i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
  std::vector<Cplx> roots(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()[i];
  return roots;
}

RationalMap::RationalMap(Eigen::VectorXcd num, Eigen::VectorXcd den)
    : num_(trim(std::move(num))), den_(trim(std::move(den))) {
  if (num_.size() == 0 || den_.size() == 0) {
    throw Error(ErrorCode::InvalidArgument, "empty coefficient list");
  }
  if (den_.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "denominator is identically zero");
  }
  if (degree() > 32) {
    throw Error(ErrorCode::InvalidArgument, "degree exceeds the desk-scale cap of 32");
  }
  if (numerator_degree() >= 1 && denominator_degree() >= 1) {
    for (const Cplx& a : poly_roots(num_)) {
      for (const Cplx& b : poly_roots(den_)) {
        if (std::abs(a - b) < 1e-10) {
          throw Error(ErrorCode::InvalidArgument,
                      "numerator and denominator share a root near (" +
                          std::to_string(a.real()) + ", " + std::to_string(a.imag()) + ")");
        }
      }
    }
  }
}

ChartValue RationalMap::eval(const ChartValue& z) const {
  if (z.infinite) {
    const int dn = numerator_degree(), dd = denominator_degree();
    if (dn > dd) return ChartValue::inf();
    if (dn < dd) return ChartValue(Cplx(0.0, 0.0));
    return ChartValue(num_[dn] / den_[dd]);
  }
  const Cplx nv = horner(num_, z.value);
  const Cplx dv = horner(den_, z.value);
  const double na = std::abs(nv), da = std::abs(dv);
  if (da <= 1e-14 * na) return ChartValue::inf();
  if (na == 0.0 && da == 0.0) {
    throw Error(ErrorCode::Indeterminate, "0/0 after common-root removal");
  }
  return ChartValue(nv / dv);
}

BlaschkeProduct::BlaschkeProduct(Cplx sigma, std::vector<Cplx> zeros)
    : sigma_(sigma), zeros_(std::move(zeros)) {
  if (std::abs(std::abs(sigma_) - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "sigma must be unimodular");
  }
  if (zeros_.size() > 32) {
    throw Error(ErrorCode::InvalidArgument, "degree exceeds the desk-scale cap of 32");
  }
  for (const Cplx& a : zeros_) {
    if (!(std::abs(a) < 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "Blaschke parameters must lie in the open disc");
    }
  }
}

Cplx BlaschkeProduct::value_at_zero() const {
  Cplx v = sigma_;
  for (const Cplx& a : zeros_) v *= a;
  return v;
}

ChartValue BlaschkeProduct::eval(const ChartValue& z) const {
  if (z.infinite) {
    Cplx v = sigma_;
    for (const Cplx& a : zeros_) {
      if (std::abs(a) == 0.0) return ChartValue::inf();
      v /= std::conj(a);
    }
    return ChartValue(v);
  }
  Cplx v = sigma_;
  for (const Cplx& a : zeros_) {
    const Cplx den = 1.0 + std::conj(a) * z.value;
    const Cplx num = z.value + a;
    if (std::abs(den) <= 1e-14 * std::abs(num)) return ChartValue::inf();
    v *= num / den;
  }
  return ChartValue(v);
}

Cplx BlaschkeProduct::eval_disc(const Cplx& z) const {
  const ChartValue v = eval(ChartValue(z));
  if (v.infinite) throw Error(ErrorCode::MapEvalError, "evaluated at a pole");
  return v.value;
}

ChartValue ExprPlaneMap::eval(const ChartValue& z) const {
  if (z.infinite) {
    throw Error(ErrorCode::MapEvalError,
                "expression map cannot be evaluated at infinity ('" + expr_.text() + "')");
  }
  const Cplx v = expr_.eval({{"z", z.value}});
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return ChartValue::inf();
  return ChartValue(v);
}

ChartValue eval_plane(const PlaneMap& f, const ChartValue& z) {
  return std::visit([&](const auto& m) { return m.eval(z); }, f);
}

std::string plane_map_descriptor(const PlaneMap& f) {
  std::ostringstream out;
  if (const auto* r = std::get_if<RationalMap>(&f)) {
    out << "rational degree " << r->degree();
  } else if (const auto* b = std::get_if<BlaschkeProduct>(&f)) {
    out << "blaschke degree " << b->degree() << " zeros [";
    for (std::size_t i = 0; i < b->zeros().size(); ++i) {
      if (i) out << ", ";
      out << b->zeros()[i].real() << (b->zeros()[i].imag() < 0 ? "-" : "+")
          << std::abs(b->zeros()[i].imag()) << "i";
    }
    out << "]";
  } else if (const auto* e = std::get_if<ExprPlaneMap>(&f)) {
    out << "expr " << e->expression().text();
  }
  return out.str();
}

SphereMap lift(const PlaneMap& f) {
  SphereMap map(
      2,
      [f](Eigen::Ref<const Vec> in, Eigen::Ref<Vec> out) {
        const ChartValue z = stereo_project(SpherePoint(in));
        out = stereo_lift(eval_plane(f, z)).coords();
      },
      plane_map_descriptor(f) + " (lifted)");
  if (std::holds_alternative<ExprPlaneMap>(f)) {
    Vec south(3);
    south << 0.0, 0.0, -1.0;
    map.set_singular_points({south});
  }
  return map;
}

SphereMap circle_map(const PlaneMap& f) {
  return SphereMap(
      1,
      [f](Eigen::Ref<const Vec> in, Eigen::Ref<Vec> out) {
        const ChartValue v = eval_plane(f, ChartValue(Cplx(in[0], in[1])));
        if (v.infinite) {
          throw Error(ErrorCode::MapEvalError, "boundary value is infinite on the circle");
        }
        out[0] = v.value.real();
        out[1] = v.value.imag();
      },
      plane_map_descriptor(f) + " (boundary values)");
}

MobiusMap geodesic_disc_transport(double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "disc parameter must be positive");
  Vec w(3);
  w << 0.0, 0.0, (1.0 - t) / (1.0 + t);
  return MobiusMap::translation(BallPoint(std::move(w)));
}

bool all_asserted_pass(const std::vector<CheckItem>& items) {
  return std::all_of(items.begin(), items.end(),
                     [](const CheckItem& c) { return !c.asserted || c.pass; });
}

namespace {

CheckItem bounded(const std::string& id, double value, double threshold) {
  return CheckItem{id, value, threshold, true, value <= threshold};
}

CheckItem positive(const std::string& id, double value) {
  return CheckItem{id, value, 0.0, true, value > 0.0};
}

std::vector<Cplx> disc_grid(int per_side, double radius) {
  std::vector<Cplx> pts;
  for (int i = 0; i < per_side; ++i) {
    for (int j = 0; j < per_side; ++j) {
      const double x = -radius + 2.0 * radius * i / (per_side - 1);
      const double y = -radius + 2.0 * radius * j / (per_side - 1);
      if (x * x + y * y <= radius * radius + 1e-12) pts.emplace_back(x, y);
    }
  }
  return pts;
}

}  // namespace

BlaschkeStructureReport blaschke_experiment_suite(const BlaschkeProduct& f,
                                                  const ExperimentConfig& cfg) {
  BlaschkeStructureReport rep;
  rep.map_descriptor = plane_map_descriptor(PlaneMap(f));
  const SphereMap F = lift(PlaneMap(f));
  const QuadratureRule rule = make_rule(2, cfg.level);
  const ExtensionEvaluator ev(F, rule, cfg.solver);
  CounterRng rng(cfg.seed, 21);

  // hemisphere preservation, direct route
  {
    double min_third = 1e300;
    std::vector<Vec> probes;
    for (int i = 0; i < 50; ++i) {
      Vec x = rng.ball_point(3, 0.85);
      x[2] = std::abs(x[2]) + 0.05;
      if (x.norm() >= 0.9) x *= 0.9 / x.norm();
      probes.push_back(std::move(x));
    }
    std::vector<double> thirds(probes.size());
    parallel_for(probes.size(), cfg.workers, [&](std::size_t i) {
      thirds[i] = ev.extend(BallPoint(probes[i]))[2];
    });
    for (double v : thirds) min_third = std::min(min_third, v);
    rep.checks.push_back(positive("hemisphere_preserved_min_height", min_third));
  }

  // hemisphere preservation through the field: the pushforward measure seen
  // from an upper point has upward field on the equatorial disc
  {
    double min_inner = 1e300;
    for (int i = 0; i < 10; ++i) {
      Vec x = rng.ball_point(3, 0.7);
      x[2] = std::abs(x[2]) + 0.1;
      if (x.norm() >= 0.85) x *= 0.85 / x.norm();
      Mat moved;
      mobius_translate_columns(x, rule.nodes, moved);
      Mat atoms;
      F.eval_columns(moved, atoms);
      const SphereMeasure pushed = SphereMeasure::from_atoms(atoms, rule.weights);
      for (int j = 0; j < 5; ++j) {
        const Cplx u = 0.8 * rng.uniform() *
                       std::exp(Cplx(0.0, rng.uniform(0.0, 2.0 * std::numbers::pi)));
        const FieldValue fv = field(pushed, BallPoint(equatorial_point(u)));
        min_inner = std::min(min_inner, fv.vector[2]);
      }
    }
    rep.checks.push_back(positive("hemisphere_field_route_min_inner", min_inner));
  }

  // equatorial disc invariance and the identity conjecture residual
  {
    const std::vector<Cplx> grid = disc_grid(21, 0.9);
    std::vector<double> heights(grid.size()), residuals(grid.size());
    parallel_for(grid.size(), cfg.workers, [&](std::size_t i) {
      const BallPoint img = ev.extend(BallPoint(equatorial_point(grid[i])));
      heights[i] = std::abs(img[2]);
      residuals[i] = std::abs(equatorial_chart(img.coords()) -
                              f.eval_disc(grid[i]));
    });
    rep.checks.push_back(bounded("equatorial_disc_max_height",
                                 *std::max_element(heights.begin(), heights.end()), 1e-8));
    rep.identity_conjecture_sup = *std::max_element(residuals.begin(), residuals.end());
  }

  // vertical derivative: parallel to the axis with positive component
  {
    const double h = 1e-4;
    double max_offaxis = 0.0, min_vertical = 1e300;
    for (int i = 0; i < 10; ++i) {
      const Cplx u = 0.75 * std::sqrt(rng.uniform()) *
                     std::exp(Cplx(0.0, rng.uniform(0.0, 2.0 * std::numbers::pi)));
      Vec up = equatorial_point(u), dn = equatorial_point(u);
      up[2] += h;
      dn[2] -= h;
      const Vec diff =
          (ev.extend(BallPoint(up)).coords() - ev.extend(BallPoint(dn)).coords()) / (2.0 * h);
      max_offaxis = std::max({max_offaxis, std::abs(diff[0]), std::abs(diff[1])});
      min_vertical = std::min(min_vertical, diff[2]);
    }
    rep.checks.push_back(bounded("vertical_derivative_max_offaxis", max_offaxis, 1e-6));
    rep.checks.push_back(positive("vertical_derivative_min_component", min_vertical));
  }

  // vertical-axis probe (open conjecture; recorded, not asserted)
  rep.has_fixed_origin = std::abs(f.value_at_zero()) < 1e-14;
  if (rep.has_fixed_origin) {
    rep.origin_conjecture_residual = ev.extend(BallPoint::origin(3)).norm();
    bool monotone = true;
    double prev = 0.0;
    for (double s : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
      Vec x(3);
      x << 0.0, 0.0, s;
      const BallPoint img = ev.extend(BallPoint(std::move(x)));
      const double axis_offset = std::hypot(img[0], img[1]);
      rep.axis_rows.push_back({s, img[2], axis_offset});
      monotone = monotone && img[2] > prev;
      prev = img[2];
    }
    rep.axis_heights_monotone = monotone;
  }
  return rep;
}

ZdStructureReport zd_structure_check(int degree, const ExperimentConfig& cfg,
                                     const std::vector<double>& disc_params) {
  if (degree < 1) throw Error(ErrorCode::InvalidArgument, "degree must be at least 1");
  ZdStructureReport rep;
  rep.degree = degree;
  Eigen::VectorXcd num = Eigen::VectorXcd::Zero(degree + 1), den(1);
  num[degree] = 1.0;
  den[0] = 1.0;
  const PlaneMap f = RationalMap(std::move(num), std::move(den));
  const SphereMap F = lift(f);
  const QuadratureRule rule = make_rule(2, cfg.level);
  const ExtensionEvaluator ev(F, rule, cfg.solver);
  CounterRng rng(cfg.seed, 22);

  rep.checks.push_back(
      bounded("origin_fixed", ev.extend(BallPoint::origin(3)).norm(), 1e-9));

  // radial form: Phi(z) conj(z^d)/|z|^d falls on the positive real axis
  {
    double max_misalign = 0.0, min_re = 1e300;
    for (double r : {0.2, 0.4, 0.6, 0.8}) {
      for (int k = 0; k < 6; ++k) {
        const Cplx z = r * std::exp(Cplx(0.0, rng.uniform(0.0, 2.0 * std::numbers::pi)));
        const Cplx u = equatorial_chart(ev.extend(BallPoint(equatorial_point(z))).coords());
        const Cplx aligned = u * std::conj(std::pow(z, degree)) / std::pow(r, degree);
        max_misalign = std::max(max_misalign, std::abs(aligned.imag()));
        min_re = std::min(min_re, aligned.real());
      }
    }
    rep.checks.push_back(bounded("radial_form_max_misalignment", max_misalign, 1e-7));
    rep.checks.push_back(positive("radial_form_min_real_part", min_re));
  }

  // the real interval maps into itself
  {
    double worst = 0.0;
    for (double r : {-0.9, -0.6, -0.3, 0.3, 0.5, 0.7, 0.9}) {
      const BallPoint img = ev.extend(BallPoint(equatorial_point(Cplx(r, 0.0))));
      worst = std::max({worst, std::abs(img[1]), std::abs(img[2])});
    }
    rep.checks.push_back(bounded("real_interval_preserved", worst, 1e-8));
  }

  // rotational equivariance at generic angles
  {
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const Cplx z = 0.5 * std::exp(Cplx(0.0, rng.uniform(0.0, 2.0 * std::numbers::pi)));
      const Vec a = ev.extend(BallPoint(equatorial_point(z))).coords();
      const Vec b =
          ev.extend(BallPoint(equatorial_point(z * std::exp(Cplx(0.0, theta))))).coords();
      const Cplx rotated =
          equatorial_chart(a) * std::exp(Cplx(0.0, degree * theta));
      worst = std::max({worst, std::abs(rotated - equatorial_chart(b)), std::abs(a[2]),
                        std::abs(b[2])});
    }
    rep.checks.push_back(bounded("rotational_equivariance", worst, 1e-8));
  }

  // radial profile h(r) = Phi(r)/r^d, which approaches 1 from inside
  {
    const std::vector<double> radii = {0.3, 0.5, 0.7, 0.9, 0.95};
    double prev_gap = 1e300;
    double worst_increase = 0.0;
    for (double r : radii) {
      const BallPoint img = ev.extend(BallPoint(equatorial_point(Cplx(r, 0.0))));
      const double h = img[0] / std::pow(r, degree);
      rep.radial_profile.push_back({r, h});
      const double gap = std::abs(h - 1.0);
      if (gap > prev_gap) worst_increase = std::max(worst_increase, gap - prev_gap);
      prev_gap = gap;
    }
    rep.checks.push_back(bounded("radial_profile_gap_decreasing", worst_increase, 0.0));
  }

  // boundary circles of geodesic discs land on the t^d disc
  for (double t : disc_params) {
    const MobiusMap back = geodesic_disc_transport(std::pow(t, degree)).inverse();
    double worst = 0.0;
    for (int k = 0; k < 24; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / 24.0;
      const SpherePoint zeta = stereo_lift(ChartValue(t * std::exp(Cplx(0.0, theta))));
      const Vec image = ev.boundary(zeta).coords();
      worst = std::max(worst, std::abs(back.apply(image)[2]));
    }
    std::ostringstream id;
    id << "geodesic_disc_boundary_t_" << t;
    rep.checks.push_back(bounded(id.str(), worst, 1e-6));

    // interior ring residual, recorded only
    const MobiusMap fwd = geodesic_disc_transport(t);
    double ring_worst = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / 8.0 + 0.1;
      const Vec x = fwd.apply(equatorial_point(0.8 * std::exp(Cplx(0.0, theta))));
      const Vec image = ev.extend(BallPoint(x)).coords();
      ring_worst = std::max(ring_worst, std::abs(back.apply(image)[2]));
    }
    rep.interior_rings.push_back({t, 0.8, ring_worst});
  }
  return rep;
}

InnerRecoveryReport inner_recovery_check(const PlaneMap& f, const ExperimentConfig& cfg) {
  InnerRecoveryReport rep;
  rep.map_descriptor = plane_map_descriptor(f);
  const QuadratureRule rule = make_rule(1, cfg.level);
  const ExtensionEvaluator ev(circle_map(f), rule, cfg.solver);

  // Probes stay well inside: recovery through the sampled extension loses
  // accuracy as the inverse point of f(z) approaches the circle, which the
  // rule must still resolve. The radius shrinks with the rule.
  const double radius = cfg.level >= 8 ? 0.25 : 0.1;
  double sup = 0.0;
  for (int k = 0; k < 30; ++k) {
    const Cplx z =
        radius * std::sqrt((k + 1.0) / 30.0) * std::exp(Cplx(0.0, 2.0 * std::numbers::pi * k / 30.0 + 0.17));
    const ChartValue fz = eval_plane(f, ChartValue(z));
    if (fz.infinite) throw Error(ErrorCode::MapEvalError, "map has a pole inside the disc");
    Vec zv(2);
    zv << z.real(), z.imag();
    const BallPoint img = ev.extend(BallPoint(std::move(zv)));
    sup = std::max(sup, std::abs(Cplx(img[0], img[1]) - fz.value));
  }
  rep.sup_recovery_error = sup;
  rep.checks.push_back(CheckItem{"boundary_recovery_sup", sup, 1e-7, true, sup <= 1e-7});

  // Cauchy reconstruction of the interior values from the same boundary
  // samples; independent of the barycentric route.
  double cauchy_worst = 0.0;
  for (int k = 0; k < 12; ++k) {
    const Cplx z = radius * std::exp(Cplx(0.0, 2.0 * std::numbers::pi * k / 12.0));
    Cplx acc(0.0, 0.0);
    for (Index i = 0; i < rule.size(); ++i) {
      const Cplx zeta(rule.nodes(0, i), rule.nodes(1, i));
      const ChartValue fv = eval_plane(f, ChartValue(zeta));
      if (fv.infinite) throw Error(ErrorCode::MapEvalError, "pole on the circle");
      acc += rule.weights[i] * fv.value * zeta / (zeta - z);
    }
    const ChartValue direct = eval_plane(f, ChartValue(z));
    cauchy_worst = std::max(cauchy_worst, std::abs(acc - direct.value));
  }
  rep.cauchy_oracle_error = cauchy_worst;
  rep.checks.push_back(
      CheckItem{"cauchy_boundary_oracle", cauchy_worst, 1e-9, true, cauchy_worst <= 1e-9});
  return rep;
}

}  // namespace debary
