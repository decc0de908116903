#include "debary/complex_maps.hpp"
#include "debary/extension.hpp"
#include "debary/rng.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace debary;

TEST_CASE("identity extension is the identity") {
  const ExtensionEvaluator ev(SphereMap::identity(2), make_rule(2, 24));
  CounterRng rng(83);
  for (int t = 0; t < 20; ++t) {
    const BallPoint z{rng.ball_point(3, 0.9)};
    CHECK((ev.extend(z).coords() - z.coords()).norm() < 1e-9);
  }
}

TEST_CASE("poincare extension recovery for boundary mobius maps") {
  const QuadratureRule rule = make_rule(2, 32);
  CounterRng rng(89);
  for (int t = 0; t < 10; ++t) {
    const MobiusMap g = rng.mobius(3, 0.85);
    const ExtensionEvaluator ev(SphereMap::mobius_boundary(g), rule);
    for (int p = 0; p < 6; ++p) {
      const BallPoint z{rng.ball_point(3, 0.9)};
      CHECK((ev.extend(z).coords() - g.apply(z.coords())).norm() < 1e-8);
    }
  }
}

TEST_CASE("square map recovery on the circle (n = 1)") {
  const PlaneMap f = RationalMap(coeffs({0.0, 0.0, 1.0}), coeffs({1.0}));
  const ExtensionEvaluator ev(circle_map(f), make_rule(1, 8));
  CounterRng rng(97);
  for (int t = 0; t < 20; ++t) {
    const Cplx z = std::polar(rng.uniform(0.0, 0.4), rng.uniform(0.0, 6.28));
    Vec zv(2);
    zv << z.real(), z.imag();
    const BallPoint img = ev.extend(BallPoint(zv));
    CHECK(std::abs(Cplx(img[0], img[1]) - z * z) < 1e-8);
  }
}

TEST_CASE("interior points stay interior") {
  const PlaneMap f = BlaschkeProduct(1.0, {Cplx(0.3, 0.0), Cplx(0.0, -0.4)});
  const ExtensionEvaluator ev(lift(f), make_rule(2, 24));
  CounterRng rng(101);
  for (int t = 0; t < 15; ++t) {
    const BallPoint z{rng.ball_point(3, 0.9)};
    CHECK(ev.extend(z).norm() < 1.0);
  }
}

TEST_CASE("implicit system calibration for the identity map") {
  const ExtensionEvaluator ev(SphereMap::identity(2), make_rule(2, 32));
  const ImplicitSystemValue sys =
      ev.implicit_system(BallPoint::origin(3), BallPoint::origin(3));
  CHECK(sys.F.norm() < 1e-12);
  CHECK((sys.Jw + (4.0 / 3.0) * Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((sys.Jz - (4.0 / 3.0) * Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((ev.jacobian(BallPoint::origin(3)) - Mat::Identity(3, 3)).norm() < 1e-8);
  // away from the origin the identity still has the identity differential
  CHECK((ev.jacobian(BallPoint(Vec(0.4 * Vec::Unit(3, 1)))) - Mat::Identity(3, 3)).norm() <
        1e-8);
}

TEST_CASE("system residual vanishes at solved points and Jw stays definite") {
  const PlaneMap f = BlaschkeProduct(1.0, {Cplx(0.3, 0.0), Cplx(0.0, -0.4)});
  const ExtensionEvaluator ev(lift(f), make_rule(2, 32));
  CounterRng rng(103);
  for (int t = 0; t < 10; ++t) {
    const BallPoint z{rng.ball_point(3, 0.7)};
    const BallPoint w = ev.extend(z);
    const ImplicitSystemValue sys = ev.implicit_system(z, w);
    CHECK(sys.F.norm() <= 1e-11);
    Eigen::SelfAdjointEigenSolver<Mat> eig(sys.Jw);
    CHECK(eig.eigenvalues().maxCoeff() < 0.0);
  }
}

TEST_CASE("jacobian of a mobius extension matches the map differential") {
  const QuadratureRule rule = make_rule(2, 32);
  CounterRng rng(107);
  const MobiusMap g = rng.mobius(3, 0.6);
  const ExtensionEvaluator ev(SphereMap::mobius_boundary(g), rule);
  const Mat fd = testing::numeric_jacobian(
      [&](const Vec& z) { return g.apply(z); }, Vec::Zero(3), 1e-6);
  CHECK((ev.jacobian(BallPoint::origin(3)) - fd).norm() < 1e-8);
}

TEST_CASE("jacobian against central differences for a lifted square map") {
  const PlaneMap f = RationalMap(coeffs({0.0, 0.0, 1.0}), coeffs({1.0}));
  const ExtensionEvaluator ev(lift(f), make_rule(2, 32));
  const BallPoint z{Vec(0.3 * Vec::Unit(3, 0))};
  const Mat analytic = ev.jacobian(z);
  const double h = 1e-4;
  Mat fd(3, 3);
  for (int j = 0; j < 3; ++j) {
    Vec p = z.coords(), m = z.coords();
    p[j] += h;
    m[j] -= h;
    fd.col(j) = (ev.extend_detail(BallPoint(p)).point.coords() -
                 ev.extend_detail(BallPoint(m)).point.coords()) /
                (2.0 * h);
  }
  CHECK((analytic - fd).norm() / fd.norm() < 1e-5);
}

TEST_CASE("boundary handling and the rejection ring") {
  const ExtensionEvaluator ev(SphereMap::identity(2), make_rule(2, 16));
  const Vec on_sphere = Vec::Unit(3, 0);
  CHECK((ev.evaluate_closed(on_sphere) - on_sphere).norm() == 0.0);
  CHECK_THROWS_AS(ev.evaluate_closed(Vec((1.0 - 5e-15) * on_sphere)), Error);
  CHECK_THROWS_AS(ev.evaluate_closed(Vec(1.5 * on_sphere)), Error);
  CHECK((ev.evaluate_closed(Vec(0.5 * on_sphere)) - 0.5 * on_sphere).norm() < 1e-9);
}

TEST_CASE("near-constant samples are rejected as inadmissible") {
  // a map collapsing the whole sphere to one point concentrates all mass
  const SphereMap constant(
      2, [](Eigen::Ref<const Vec>, Eigen::Ref<Vec> out) { out = Vec::Unit(3, 0); },
      "constant");
  const ExtensionEvaluator ev(constant, make_rule(2, 8));
  CHECK_THROWS_AS(ev.extend(BallPoint::origin(3)), Error);
  try {
    ev.extend(BallPoint::origin(3));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InadmissibleSample);
  }
}

TEST_CASE("continuity probe shrinks for continuous maps") {
  const QuadratureRule rule = make_rule(2, 24);
  const std::vector<double> radii = {0.2, 0.1, 0.05, 0.02};

  const ExtensionEvaluator id(SphereMap::identity(2), rule);
  const auto rows_id = continuity_probe(id, SpherePoint::axis(3, 0), radii);
  for (std::size_t i = 1; i < rows_id.size(); ++i) {
    CHECK(rows_id[i].sup_distance < rows_id[i - 1].sup_distance);
  }
  // roughly linear shrinkage for the identity
  CHECK(rows_id.back().sup_distance < 3.0 * radii.back());

  const PlaneMap sq = RationalMap(coeffs({0.0, 0.0, 1.0}), coeffs({1.0}));
  const ExtensionEvaluator ev(lift(sq), rule);
  const SpherePoint equatorial = stereo_lift(ChartValue(std::polar(1.0, 0.7)));
  const auto rows = continuity_probe(ev, equatorial, radii);
  CHECK(rows.back().sup_distance < rows.front().sup_distance);

  // a jump map need not shrink; recorded without assertion
  const SphereMap jump(
      2,
      [](Eigen::Ref<const Vec> in, Eigen::Ref<Vec> out) {
        out = in;
        out[2] = std::abs(out[2]) + 0.1;
      },
      "half-sphere swap", /*continuous=*/false);
  const ExtensionEvaluator evj(jump, rule);
  const auto rows_jump = continuity_probe(evj, SpherePoint::axis(3, 0), {0.1, 0.05});
  CHECK(rows_jump.size() == 2);
}

TEST_CASE("extension naturality under conjugation") {
  const QuadratureRule rule = make_rule(2, 32);
  CounterRng rng(109);
  const PlaneMap pm = BlaschkeProduct(1.0, {Cplx(0.3, 0.0), Cplx(0.0, -0.4)});
  const SphereMap phi = lift(pm);
  for (int t = 0; t < 3; ++t) {
    const MobiusMap g = rng.mobius(3, 0.7);
    const MobiusMap h = rng.mobius(3, 0.7);
    const MobiusMap hinv = h.inverse();
    const SphereMap conjugated(
        2,
        [phi, g, hinv](Eigen::Ref<const Vec> in, Eigen::Ref<Vec> out) {
          Vec tmp(3);
          phi.eval(hinv.apply(in), tmp);
          out = g.apply(tmp);
        },
        "g o phi o h^{-1}");
    const ExtensionEvaluator left(conjugated, rule);
    const ExtensionEvaluator right(phi, rule);
    double worst = 0.0;
    for (int p = 0; p < 10; ++p) {
      const BallPoint z{rng.ball_point(3, 0.5)};
      const Vec a = left.extend(z).coords();
      const Vec b = g.apply(right.extend(BallPoint(hinv.apply(z.coords()))).coords());
      worst = std::max(worst, (a - b).norm());
    }
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("resolution robustness for a smooth map") {
  const PlaneMap pm = BlaschkeProduct(1.0, {Cplx(0.3, 0.0), Cplx(0.0, -0.4)});
  const ExtensionEvaluator coarse(lift(pm), make_rule(2, 32));
  const ExtensionEvaluator fine(lift(pm), make_rule(2, 64));
  CounterRng rng(113);
  for (int t = 0; t < 8; ++t) {
    const BallPoint z{rng.ball_point(3, 0.4)};
    CHECK((coarse.extend(z).coords() - fine.extend(z).coords()).norm() <= 1e-8);
  }
}

TEST_CASE("evaluation cache returns identical values") {
  const PlaneMap pm = BlaschkeProduct(1.0, {Cplx(0.3, 0.0)});
  const ExtensionEvaluator ev(lift(pm), make_rule(2, 16));
  const BallPoint z{Vec(0.3 * Vec::Unit(3, 0))};
  const Vec first = ev.extend(z).coords();
  const Vec second = ev.extend(z).coords();
  CHECK((first - second).norm() == 0.0);
}
