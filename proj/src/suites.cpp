#include "debary/suites.hpp"

#include "debary/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace debary {

SphereMeasure random_atomic_measure(CounterRng& rng, int ambient_dim, int max_atoms) {
  const int count = 3 + static_cast<int>(rng.uniform() * (max_atoms - 2));
  Mat pts(ambient_dim, count);
  Vec masses(count);
  for (int i = 0; i < count; ++i) {
    pts.col(i) = rng.sphere_point(ambient_dim);
    masses[i] = 0.05 + rng.uniform();
  }
  masses /= masses.sum();
  // keep every atom strictly admissible
  for (int i = 0; i < count; ++i) {
    if (masses[i] >= 0.45) {
      masses[i] = 0.45;
    }
  }
  masses /= masses.sum();
  return SphereMeasure::from_atoms(std::move(pts), std::move(masses));
}

SphereMeasure random_mixed_measure(CounterRng& rng, const QuadratureRule& rule) {
  const int k = rule.ambient_dim();
  const int count = 2 + static_cast<int>(rng.uniform() * 3.0);
  const double atom_share = rng.uniform(0.2, 0.6);
  Mat pts(k, count);
  Vec masses(count);
  for (int i = 0; i < count; ++i) {
    pts.col(i) = rng.sphere_point(k);
    masses[i] = 0.1 + rng.uniform();
  }
  masses *= atom_share / masses.sum();

  const Vec direction = rng.sphere_point(k);
  const double amp = rng.uniform(0.0, 0.9);
  Vec density(rule.size());
  for (Index i = 0; i < rule.size(); ++i) {
    density[i] = 1.0 + amp * direction.dot(rule.nodes.col(i));
  }
  density *= (1.0 - atom_share) / weighted_sum(density, rule.weights);
  SphereMeasure::QuadPart quad{rule.nodes, rule.weights, std::move(density)};
  return SphereMeasure(std::move(pts), std::move(masses), std::move(quad));
}

SphereMeasure transported_uniform(const MobiusMap& g, const QuadratureRule& rule) {
  return uniform_measure(rule).pushforward(g);
}

namespace {

CheckItem bounded(const std::string& id, double value, double threshold) {
  return CheckItem{id, value, threshold, true, value <= threshold};
}

CheckItem strictly_negative(const std::string& id, double value) {
  return CheckItem{id, value, 0.0, true, value < 0.0};
}

CheckItem strictly_positive(const std::string& id, double value) {
  return CheckItem{id, value, 0.0, true, value > 0.0};
}

// forward differential of a Mobius map along v
Vec mobius_differential(const MobiusMap& g, const Vec& at, const Vec& v) {
  const double h = 1e-6;
  const double n = v.norm();
  if (n < 1e-300) return Vec::Zero(at.size());
  const Vec dir = v / n;
  return (g.apply(at + h * dir) - g.apply(at - h * dir)) * (n / (2.0 * h));
}

SuiteResult suite_naturality(const SuiteConfig& cfg) {
  SuiteResult res{"naturality", {}};
  const int level = cfg.level > 0 ? cfg.level : 32;
  const QuadratureRule rule = make_rule(2, level);
  CounterRng rng(cfg.seed, 101);

  {
    // the field transforms by the differential
    double worst = 0.0;
    for (int t = 0; t < 15; ++t) {
      const SphereMeasure mu = random_atomic_measure(rng, 3);
      const MobiusMap g = rng.mobius(3, 0.8);
      const BallPoint w{rng.ball_point(3, 0.7)};
      const FieldValue fv = field(mu, w);
      const Vec lhs = mobius_differential(g, w.coords(), fv.vector);
      const Vec rhs = field(mu.pushforward(g), g(w)).vector;
      worst = std::max(worst, (lhs - rhs).norm());
    }
    res.checks.push_back(bounded("field.naturality", worst, 1e-9));
  }

  {
    // the barycenter commutes with the group action
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      const SphereMeasure mu = random_mixed_measure(rng, rule);
      const MobiusMap g = rng.mobius(3, 0.8);
      const BallPoint b = barycenter(mu, cfg.solver).point;
      const BallPoint bg = barycenter(mu.pushforward(g), cfg.solver).point;
      worst = std::max(worst, (bg.coords() - g.apply(b.coords())).norm());
    }
    res.checks.push_back(bounded("barycenter.naturality", worst, 1e-8));
  }

  {
    // the extension operator is equivariant under pre/post composition
    double worst = 0.0;
    const std::vector<PlaneMap> maps = {
        PlaneMap(BlaschkeProduct(1.0, {Cplx(0.3, 0.0), Cplx(0.0, -0.4)})),
        PlaneMap(RationalMap(coeffs({Cplx(0, 0), Cplx(0, 0), Cplx(1, 0)}),
                             coeffs({Cplx(1, 0)}))),
    };
    for (const PlaneMap& pm : maps) {
      const SphereMap phi = lift(pm);
      const MobiusMap g = rng.mobius(3, 0.7);
      const MobiusMap h = rng.mobius(3, 0.7);
      const MobiusMap hinv = h.inverse();
      SphereMap conjugated(
          2,
          [phi, g, hinv](Eigen::Ref<const Vec> in, Eigen::Ref<Vec> out) {
            Vec tmp(3);
            phi.eval(hinv.apply(in), tmp);
            out = g.apply(tmp);
          },
          "conjugated map");
      const ExtensionEvaluator left(conjugated, rule, cfg.solver);
      const ExtensionEvaluator right(phi, rule, cfg.solver);
      for (int t = 0; t < 10; ++t) {
        const BallPoint z{rng.ball_point(3, 0.5)};
        const Vec a = left.extend(z).coords();
        const Vec b = g.apply(right.extend(BallPoint(hinv.apply(z.coords()))).coords());
        worst = std::max(worst, (a - b).norm());
      }
    }
    res.checks.push_back(bounded("extension.naturality", worst, 1e-7));
  }
  return res;
}

SuiteResult suite_barycenter(const SuiteConfig& cfg) {
  SuiteResult res{"barycenter", {}};
  const int level2 = cfg.level > 0 ? cfg.level : 32;
  const QuadratureRule rule1 = make_rule(1, 8);
  const QuadratureRule rule2 = make_rule(2, level2);
  CounterRng rng(cfg.seed, 102);

  res.checks.push_back(bounded("barycenter.uniform_origin_s1",
                               barycenter(uniform_measure(rule1), cfg.solver).point.norm(),
                               1e-12));
  res.checks.push_back(bounded("barycenter.uniform_origin_s2",
                               barycenter(uniform_measure(rule2), cfg.solver).point.norm(),
                               1e-12));

  {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const Vec w = rng.ball_point(3, 0.9);
      const SphereMeasure mu = transported_uniform(MobiusMap::translation(BallPoint(w)), rule2);
      worst = std::max(worst, (barycenter(mu, cfg.solver).point.coords() - w).norm());
    }
    res.checks.push_back(bounded("barycenter.harmonic_recovery", worst, 1e-9));
  }

  {
    // multistart agreement
    const SphereMeasure mu = random_mixed_measure(rng, rule2);
    const Vec ref = barycenter(mu, cfg.solver).point.coords();
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      Vec start = rng.ball_point(3, 0.85);
      Mat pts(3, mu.quad()->nodes.cols() + mu.atom_count());
      // rebuild the flattened cloud through the public surface
      pts << mu.atom_points(), mu.quad()->nodes;
      Vec wts(pts.cols());
      wts << mu.atom_masses(), mu.quad()->weights.cwiseProduct(mu.quad()->density);
      const BarycenterResult r = solve_barycenter_points(pts, wts, cfg.solver, &start);
      worst = std::max(worst, (r.point.coords() - ref).norm());
    }
    res.checks.push_back(bounded("barycenter.multistart_uniqueness", worst, 1e-8));
  }

  {
    // stability: the recentered Jacobian is negative definite
    double max_eig = -1e300;
    for (int t = 0; t < 15; ++t) {
      const SphereMeasure mu = random_atomic_measure(rng, 3);
      const BallPoint b = barycenter(mu, cfg.solver).point;
      const SphereMeasure recentered =
          mu.pushforward(MobiusMap::translation(b).inverse());
      const Mat jac = field_jacobian_at_zero(recentered);
      Eigen::SelfAdjointEigenSolver<Mat> eig(jac);
      max_eig = std::max(max_eig, eig.eigenvalues().maxCoeff());
    }
    res.checks.push_back(strictly_negative("barycenter.stability_max_eigenvalue", max_eig));
  }

  {
    // normalization: zero barycenter exactly when the mean vanishes
    Mat pts(3, 4);
    pts << 1, -1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0;
    const SphereMeasure centered = SphereMeasure::from_atoms(pts, Vec::Constant(4, 0.25));
    const double at_center = barycenter(centered, cfg.solver).point.norm();
    res.checks.push_back(bounded("barycenter.normalization_centered", at_center, 1e-10));

    Mat pts2(3, 2);
    pts2 << 1, 0, 0, 1, 0, 0;
    Vec m2(2);
    m2 << 0.6, 0.4;
    const SphereMeasure offset = SphereMeasure::from_atoms(pts2, m2);
    res.checks.push_back(strictly_positive(
        "barycenter.normalization_offcenter",
        barycenter(offset, cfg.solver).point.norm() - 1e-3));
  }

  {
    // concentration criterion implies a positive field component
    double min_inner = 1e300;
    for (int t = 0; t < 200; ++t) {
      const double delta = rng.uniform(0.05, std::sqrt(2.0) - 0.05);
      const double need = (1.0 + delta * delta / 2.0) / 2.0;
      const double inside = std::min(0.995, need + rng.uniform(0.0, 1.0 - need));
      const int in_atoms = 2 + int(rng.uniform() * 3);
      const int out_atoms = 2 + int(rng.uniform() * 3);
      Mat pts(3, in_atoms + out_atoms);
      Vec masses(in_atoms + out_atoms);
      const Vec e1 = Vec::Unit(3, 0);
      for (int i = 0; i < in_atoms; ++i) {
        Vec p;
        do {
          p = rng.sphere_point(3);
        } while ((p - e1).norm() > delta);
        pts.col(i) = p;
        masses[i] = inside / in_atoms;
      }
      for (int i = 0; i < out_atoms; ++i) {
        pts.col(in_atoms + i) = rng.sphere_point(3);
        masses[in_atoms + i] = (1.0 - inside) / out_atoms;
      }
      const SphereMeasure mu = SphereMeasure::from_atoms(std::move(pts), std::move(masses));
      const DirectionBoundResult r = direction_bound_check(mu, delta);
      if (r.hypothesis_held) min_inner = std::min(min_inner, r.inner_product);
    }
    res.checks.push_back(strictly_positive("barycenter.direction_bound", min_inner));
  }

  {
    const SphereMeasure mu =
        transported_uniform(MobiusMap::translation(BallPoint(Vec(0.5 * Vec::Unit(3, 0)))), rule2);
    const InwardProbeResult probe = inward_radius_probe(mu, 24, cfg.seed);
    res.checks.push_back(CheckItem{"barycenter.inward_radius_found", probe.radius, 1.0, true,
                                   probe.all_inward && probe.radius < 1.0});
  }
  return res;
}

SuiteResult suite_extension(const SuiteConfig& cfg) {
  SuiteResult res{"extension", {}};
  const int level = cfg.level > 0 ? cfg.level : 32;
  const QuadratureRule rule = make_rule(2, level);
  CounterRng rng(cfg.seed, 103);

  {
    const ExtensionEvaluator ev(SphereMap::identity(2), rule, cfg.solver);
    double worst = 0.0, max_norm = 0.0;
    for (int t = 0; t < 20; ++t) {
      const BallPoint z{rng.ball_point(3, 0.9)};
      const Vec img = ev.extend(z).coords();
      worst = std::max(worst, (img - z.coords()).norm());
      max_norm = std::max(max_norm, img.norm());
    }
    res.checks.push_back(bounded("extension.identity_fixed", worst, 1e-9));
    res.checks.push_back(strictly_positive("extension.interior_mapping", 1.0 - max_norm));
  }

  {
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const MobiusMap g = rng.mobius(3, 0.8);
      const ExtensionEvaluator ev(SphereMap::mobius_boundary(g), rule, cfg.solver);
      for (int p = 0; p < 10; ++p) {
        const BallPoint z{rng.ball_point(3, 0.9)};
        worst = std::max(worst, (ev.extend(z).coords() - g.apply(z.coords())).norm());
      }
    }
    res.checks.push_back(bounded("extension.poincare_recovery", worst, 1e-8));
  }

  {
    // doubling the rule level moves values by less than the tolerance
    const PlaneMap pm = BlaschkeProduct(1.0, {Cplx(0.3, 0.0), Cplx(0.0, -0.4)});
    const ExtensionEvaluator coarse(lift(pm), rule, cfg.solver);
    const ExtensionEvaluator fine(lift(pm), make_rule(2, 2 * level), cfg.solver);
    double worst = 0.0;
    for (int t = 0; t < 8; ++t) {
      const BallPoint z{rng.ball_point(3, 0.4)};
      worst = std::max(worst, (coarse.extend(z).coords() - fine.extend(z).coords()).norm());
    }
    res.checks.push_back(bounded("extension.resolution_robustness", worst, 1e-8));
  }

  {
    // empirical modulus of continuity shrinks toward the boundary point
    const ExtensionEvaluator ev(SphereMap::identity(2), rule, cfg.solver);
    const auto rows = continuity_probe(ev, SpherePoint::axis(3, 0), {0.2, 0.1, 0.05, 0.01});
    res.checks.push_back(CheckItem{"extension.continuity_shrinks", rows.back().sup_distance,
                                   rows.front().sup_distance, true,
                                   rows.back().sup_distance < rows.front().sup_distance});
  }

  {
    // boundary dispatch: sphere points use the map, the gap ring is rejected
    const PlaneMap pm = BlaschkeProduct(1.0, {Cplx(0.3, 0.0)});
    const ExtensionEvaluator ev(lift(pm), rule, cfg.solver);
    const SpherePoint zeta = SpherePoint::axis(3, 0);
    const Vec direct = ev.boundary(zeta).coords();
    const Vec closed = ev.evaluate_closed(zeta.coords());
    bool ring_rejected = false;
    try {
      ev.evaluate_closed(Vec((1.0 - 1e-14) * zeta.coords()));
    } catch (const Error& e) {
      ring_rejected = e.code() == ErrorCode::PointOutsideBall;
    }
    res.checks.push_back(CheckItem{"extension.boundary_dispatch", (direct - closed).norm(),
                                   0.0, true,
                                   (direct - closed).norm() == 0.0 && ring_rejected});
  }
  return res;
}

SuiteResult suite_blaschke(const SuiteConfig& cfg) {
  SuiteResult res{"blaschke", {}};
  const int level = cfg.level > 0 ? cfg.level : 32;
  const QuadratureRule rule = make_rule(2, level);
  CounterRng rng(cfg.seed, 104);

  ExperimentConfig ecfg;
  ecfg.level = level;
  ecfg.solver = cfg.solver;
  ecfg.seed = cfg.seed;
  ecfg.workers = cfg.workers;

  const std::vector<BlaschkeProduct> maps = {
      BlaschkeProduct(1.0, {Cplx(0.0, 0.0), Cplx(0.0, 0.0)}),  // z^2
      BlaschkeProduct(1.0, {Cplx(0.3, 0.0), Cplx(0.0, -0.4)}),
      BlaschkeProduct(1.0, {Cplx(0.5, 0.0), Cplx(0.2, 0.3), Cplx(-0.1, 0.0)}),
  };
  for (const BlaschkeProduct& f : maps) {
    const BlaschkeStructureReport rep = blaschke_experiment_suite(f, ecfg);
    for (const CheckItem& c : rep.checks) {
      res.checks.push_back(CheckItem{"blaschke[" + plane_map_descriptor(PlaneMap(f)) + "]." + c.id,
                                     c.value, c.threshold, c.asserted, c.pass});
    }
  }

  {
    // equator stays setwise fixed under the lifted boundary map
    const SphereMap F = lift(PlaneMap(maps[1]));
    double worst = 0.0;
    for (int t = 0; t < 40; ++t) {
      const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
      Vec p(3);
      p << std::cos(th), std::sin(th), 0.0;
      Vec img(3);
      F.eval(p, img);
      worst = std::max(worst, std::abs(img[2]));
    }
    res.checks.push_back(bounded("blaschke.equator_preserved", worst, 1e-10));
  }

  {
    // reflection symmetry of the extension
    const ExtensionEvaluator ev(lift(PlaneMap(maps[1])), rule, cfg.solver);
    const MobiusMap c = MobiusMap::reflection(3);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const BallPoint z{rng.ball_point(3, 0.8)};
      const Vec a = c.apply(ev.extend(z).coords());
      const Vec b = ev.extend(BallPoint(c.apply(z.coords()))).coords();
      worst = std::max(worst, (a - b).norm());
    }
    res.checks.push_back(bounded("blaschke.reflection_symmetry", worst, 1e-8));
  }

  {
    // real-coefficient products preserve the x2 = 0 plane
    const BlaschkeProduct realf(1.0, {Cplx(0.4, 0.0), Cplx(-0.2, 0.0)});
    const ExtensionEvaluator ev(lift(PlaneMap(realf)), rule, cfg.solver);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      Vec x = rng.ball_point(3, 0.8);
      x[1] = 0.0;
      worst = std::max(worst, std::abs(ev.extend(BallPoint(x))[1]));
    }
    res.checks.push_back(bounded("blaschke.conjugation_symmetry", worst, 1e-8));
  }
  return res;
}

SuiteResult suite_inner(const SuiteConfig& cfg) {
  SuiteResult res{"inner", {}};
  ExperimentConfig ecfg;
  ecfg.level = cfg.level > 0 ? cfg.level : 8;
  ecfg.solver = cfg.solver;
  ecfg.seed = cfg.seed;

  const std::vector<PlaneMap> maps = {
      RationalMap(coeffs({Cplx(0, 0), Cplx(0, 0), Cplx(1, 0)}), coeffs({Cplx(1, 0)})),
      RationalMap(coeffs({Cplx(0, 0), Cplx(0, 0), Cplx(0, 0), Cplx(1, 0)}),
                  coeffs({Cplx(1, 0)})),
      BlaschkeProduct(1.0, {Cplx(0.5, 0.0), Cplx(0.5, 0.0)}),
      RationalMap(coeffs({Cplx(0, 0), Cplx(-0.8, 0), Cplx(1, 0)}),
                  coeffs({Cplx(1, 0), Cplx(-0.8, 0)})),
  };
  for (const PlaneMap& f : maps) {
    const InnerRecoveryReport rep = inner_recovery_check(f, ecfg);
    for (const CheckItem& c : rep.checks) {
      res.checks.push_back(CheckItem{"inner[" + plane_map_descriptor(f) + "]." + c.id, c.value,
                                     c.threshold, c.asserted, c.pass});
    }
  }

  {
    // a map fixing the origin has a centered boundary pushforward
    const PlaneMap f = maps[3];  // z (z - 0.8) / (1 - 0.8 z)
    const QuadratureRule rule = make_rule(1, ecfg.level);
    const ExtensionEvaluator ev(circle_map(f), rule, cfg.solver);
    res.checks.push_back(
        bounded("inner.fixed_origin", ev.extend(BallPoint::origin(2)).norm(), 1e-8));
  }
  return res;
}

SuiteResult suite_jacobian(const SuiteConfig& cfg) {
  SuiteResult res{"jacobian", {}};
  const int level = cfg.level > 0 ? cfg.level : 32;
  const QuadratureRule rule = make_rule(2, level);
  CounterRng rng(cfg.seed, 105);

  {
    const ExtensionEvaluator ev(SphereMap::identity(2), rule, cfg.solver);
    const Mat jac = ev.jacobian(BallPoint(Vec(0.3 * Vec::Unit(3, 0))));
    res.checks.push_back(
        bounded("jacobian.identity_calibration", (jac - Mat::Identity(3, 3)).norm(), 1e-8));
  }

  {
    std::vector<SphereMap> maps;
    maps.push_back(lift(PlaneMap(BlaschkeProduct(1.0, {Cplx(0.3, 0.0), Cplx(0.0, -0.4)}))));
    maps.push_back(lift(PlaneMap(
        RationalMap(coeffs({Cplx(0, 0), Cplx(0, 0), Cplx(1, 0)}), coeffs({Cplx(1, 0)})))));
    maps.push_back(SphereMap::mobius_boundary(rng.mobius(3, 0.6)));

    double worst_rel = 0.0, worst_negdef = -1e300;
    int trials = 0;
    const double h = 1e-4;
    for (int t = 0; t < 30; ++t) {
      const SphereMap& phi = maps[static_cast<std::size_t>(t) % maps.size()];
      const ExtensionEvaluator ev(phi, rule, cfg.solver);
      const BallPoint z{rng.ball_point(3, 0.6)};
      const Mat analytic = ev.jacobian(z);

      Mat fd(3, 3);
      for (int j = 0; j < 3; ++j) {
        Vec zp = z.coords(), zm = z.coords();
        zp[j] += h;
        zm[j] -= h;
        fd.col(j) =
            (ev.extend(BallPoint(zp)).coords() - ev.extend(BallPoint(zm)).coords()) / (2.0 * h);
      }
      worst_rel = std::max(worst_rel, (analytic - fd).norm() / fd.norm());

      const ImplicitSystemValue sys = ev.implicit_system(z, ev.extend(z));
      Eigen::SelfAdjointEigenSolver<Mat> eig(sys.Jw);
      worst_negdef = std::max(worst_negdef, eig.eigenvalues().maxCoeff());
      ++trials;
    }
    res.checks.push_back(bounded("jacobian.fd_agreement", worst_rel, 1e-4));
    res.checks.push_back(strictly_negative("jacobian.jw_negative_definite", worst_negdef));
  }

  {
    // moment calibration of the system matrices for the identity map
    const ExtensionEvaluator ev(SphereMap::identity(2), rule, cfg.solver);
    const ImplicitSystemValue sys =
        ev.implicit_system(BallPoint::origin(3), BallPoint::origin(3));
    const double n = 2.0;
    const Mat expected = (2.0 * n / (n + 1.0)) * Mat::Identity(3, 3);
    const double worst =
        std::max((sys.Jw + expected).cwiseAbs().maxCoeff(),
                 (sys.Jz - expected).cwiseAbs().maxCoeff());
    res.checks.push_back(bounded("jacobian.moment_calibration", worst, 1e-12));
  }
  return res;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"naturality", "barycenter", "extension", "blaschke", "inner", "jacobian"};
}

SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg) {
  if (name == "naturality") return suite_naturality(cfg);
  if (name == "barycenter") return suite_barycenter(cfg);
  if (name == "extension") return suite_extension(cfg);
  if (name == "blaschke") return suite_blaschke(cfg);
  if (name == "inner") return suite_inner(cfg);
  if (name == "jacobian") return suite_jacobian(cfg);
  throw Error(ErrorCode::InvalidArgument, "unknown suite '" + name + "'");
}

}  // namespace debary
