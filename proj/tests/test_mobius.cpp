#include "debary/mobius.hpp"
#include "debary/rng.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace debary;

TEST_CASE("ball translation basics") {
  Vec w(3);
  w << 0.3, -0.2, 0.1;
  Vec zero = Vec::Zero(3);
  CHECK((mobius_translate(w, zero) - w).norm() == doctest::Approx(0.0).epsilon(1e-15));

  // the fixed point on the sphere along the translation axis
  Vec half = 0.5 * Vec::Unit(3, 0);
  Vec e1 = Vec::Unit(3, 0);
  CHECK((mobius_translate(half, e1) - e1).norm() < 1e-15);

  CHECK_THROWS_AS(mobius_translate_checked(Vec(1.5 * Vec::Unit(3, 0)), zero), Error);
}

TEST_CASE("translation inverts and preserves sphere and ball") {
  CounterRng rng(7);
  for (int t = 0; t < 1000; ++t) {
    const int k = t % 2 ? 2 : 3;
    const Vec w = rng.ball_point(k, 0.95);
    const Vec x = t % 3 ? rng.ball_point(k, 0.999) : Vec(rng.sphere_point(k));
    const Vec y = mobius_translate(w, x);
    CHECK((mobius_translate(Vec(-w), y) - x).norm() < 1e-12);
    if (t % 3 == 0) CHECK(std::abs(y.norm() - 1.0) < 1e-12);
    if (t % 3 != 0) CHECK(y.norm() < 1.0);
  }
}

TEST_CASE("reflection flips the last coordinate") {
  const MobiusMap c = MobiusMap::reflection(3);
  Vec x(3);
  x << 0.2, 0.3, 0.4;
  const Vec y = c.apply(x);
  CHECK(y[0] == 0.2);
  CHECK(y[1] == 0.3);
  CHECK(y[2] == -0.4);

  const MobiusMap id = MobiusMap::identity(3);
  CHECK((id.apply(x) - x).norm() == 0.0);
}

TEST_CASE("composition against pointwise application") {
  CounterRng rng(11);
  for (int t = 0; t < 50; ++t) {
    const MobiusMap g = rng.mobius(3, 0.85);
    const MobiusMap h = rng.mobius(3, 0.85);
    const MobiusMap gh = compose(g, h);
    for (int p = 0; p < 5; ++p) {
      const Vec x = p % 2 ? rng.ball_point(3, 0.9) : Vec(rng.sphere_point(3));
      CHECK((gh.apply(x) - g.apply(h.apply(x))).norm() < 1e-12);
    }
  }
}

TEST_CASE("composition associativity") {
  CounterRng rng(13);
  for (int t = 0; t < 50; ++t) {
    const MobiusMap a = rng.mobius(3, 0.8);
    const MobiusMap b = rng.mobius(3, 0.8);
    const MobiusMap c = rng.mobius(3, 0.8);
    const MobiusMap left = compose(compose(a, b), c);
    const MobiusMap right = compose(a, compose(b, c));
    for (int p = 0; p < 3; ++p) {
      const Vec x = rng.ball_point(3, 0.9);
      CHECK((left.apply(x) - right.apply(x)).norm() < 1e-12);
    }
  }
}

TEST_CASE("inverse and canonical form") {
  CounterRng rng(17);
  for (int t = 0; t < 50; ++t) {
    const MobiusMap g = rng.mobius(3, 0.9);
    const MobiusMap gi = g.inverse();
    const MobiusMap e = compose(g, gi);
    CHECK(e.translation_part().norm() < 1e-12);
    CHECK((e.rotation_part() - Mat::Identity(3, 3)).norm() < 1e-11);

    // recompose(decompose(g)) acts identically
    const MobiusMap rebuilt =
        compose(MobiusMap::translation(g.translation_part()), MobiusMap::rotation(g.rotation_part()));
    const Vec x = rng.ball_point(3, 0.9);
    CHECK((rebuilt.apply(x) - g.apply(x)).norm() < 1e-12);
  }
}

TEST_CASE("translation composed with rotation keeps its translation part") {
  CounterRng rng(19);
  const Vec w = rng.ball_point(3, 0.8);
  const MobiusMap g = compose(MobiusMap::translation(BallPoint(w)),
                              MobiusMap::rotation(rng.rotation(3)));
  CHECK((g.translation_part().coords() - w).norm() < 1e-14);
}

TEST_CASE("radial translation doubling") {
  // two translations by r along the axis give the hyperbolic-sum radius
  const Vec r = 0.5 * Vec::Unit(3, 0);
  const MobiusMap gr = MobiusMap::translation(BallPoint(r));
  const MobiusMap gg = compose(gr, gr);
  CHECK(gg.translation_part().coords()[0] == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("boundary jacobian magnitude") {
  const MobiusMap id = MobiusMap::identity(3);
  CHECK(id.boundary_jacobian_norm(SpherePoint::axis(3, 1)) == doctest::Approx(1.0));

  const MobiusMap g = MobiusMap::translation(BallPoint(Vec(0.5 * Vec::Unit(3, 0))));
  CHECK(g.boundary_jacobian_norm(SpherePoint::axis(3, 0)) ==
        doctest::Approx(1.0 / 9.0).epsilon(1e-14));

  // finite-difference area distortion agrees with the closed form
  CounterRng rng(23);
  for (int t = 0; t < 10; ++t) {
    const MobiusMap m = rng.mobius(3, 0.7);
    const Vec zeta = rng.sphere_point(3);
    const Mat d = testing::boundary_differential(
        [&](const Vec& x) { return m.apply(x); }, zeta);
    CHECK(std::abs(std::abs(d.determinant()) -
                   m.boundary_jacobian_norm(SpherePoint(zeta))) < 1e-7);
  }
}

TEST_CASE("boundary differential is conformal") {
  CounterRng rng(29);
  for (int t = 0; t < 20; ++t) {
    const MobiusMap g = rng.mobius(3, 0.8);
    const Vec zeta = rng.sphere_point(3);
    const Mat d = testing::boundary_differential(
        [&](const Vec& x) { return g.apply(x); }, zeta);
    Eigen::JacobiSVD<Mat> svd(d);
    const Vec sv = svd.singularValues();
    CHECK(sv.maxCoeff() - sv.minCoeff() < 1e-8);
  }
}

TEST_CASE("kernel consistency with the harmonic density") {
  CounterRng rng(31);
  for (int t = 0; t < 20; ++t) {
    const Vec w = rng.ball_point(3, 0.9);
    const Vec zeta = rng.sphere_point(3);
    const MobiusMap back = MobiusMap::translation(BallPoint(w)).inverse();
    const double lhs = back.boundary_jacobian_norm(SpherePoint(zeta));
    const double w2 = w.squaredNorm();
    const double rhs = std::pow((1.0 - w2) / (zeta - w).squaredNorm(), 2);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, rhs));
  }
}

TEST_CASE("hyperbolic distance") {
  const BallPoint o = BallPoint::origin(3);
  Vec x(3);
  x << 0.6, 0.0, 0.0;
  CHECK(hyperbolic_distance(o, o) == 0.0);
  CHECK(hyperbolic_distance(o, BallPoint(x)) ==
        doctest::Approx(std::log(1.6 / 0.4)).epsilon(1e-14));

  CounterRng rng(37);
  for (int t = 0; t < 50; ++t) {
    const MobiusMap g = rng.mobius(3, 0.9);
    const BallPoint a{rng.ball_point(3, 0.95)};
    const BallPoint b{rng.ball_point(3, 0.95)};
    CHECK(std::abs(hyperbolic_distance(g(a), g(b)) - hyperbolic_distance(a, b)) < 1e-10);
  }
}

TEST_CASE("stereographic chart") {
  const SpherePoint north = stereo_lift(ChartValue(Cplx(0.0, 0.0)));
  CHECK(north[0] == 0.0);
  CHECK(north[2] == 1.0);

  const SpherePoint one = stereo_lift(ChartValue(Cplx(1.0, 0.0)));
  CHECK(one[0] == doctest::Approx(1.0));
  CHECK(std::abs(one[2]) < 1e-15);

  const SpherePoint south = stereo_lift(ChartValue::inf());
  CHECK(south[2] == -1.0);
  CHECK(stereo_project(south).infinite);

  // round trip with relative tolerance in the chart
  CounterRng rng(41);
  for (int t = 0; t < 200; ++t) {
    const Cplx z(rng.uniform(-40.0, 40.0), rng.uniform(-40.0, 40.0));
    const ChartValue back = stereo_project(stereo_lift(ChartValue(z)));
    REQUIRE(!back.infinite);
    CHECK(std::abs(back.value - z) <= 1e-12 * (1.0 + std::norm(z)));
  }

  // the unit circle lands on the equator
  for (int t = 0; t < 20; ++t) {
    const double th = rng.uniform(0.0, 6.28);
    const SpherePoint p = stereo_lift(ChartValue(std::polar(1.0, th)));
    CHECK(std::abs(p[2]) < 1e-15);
  }
}

TEST_CASE("ball point construction rejects the boundary ring") {
  Vec x = 0.999999 * Vec::Unit(3, 0);
  CHECK_NOTHROW(BallPoint{x});
  CHECK_THROWS_AS(BallPoint{Vec(Vec::Unit(3, 0))}, Error);
  CHECK_THROWS_AS(BallPoint{Vec((1.0 - 1e-16) * Vec::Unit(3, 0))}, Error);
}

TEST_CASE("sphere point renormalizes") {
  Vec x(3);
  x << 0.0, 2.0, 0.0;
  CHECK_THROWS_AS(SpherePoint{x}, Error);  // too far off to silently fix
  Vec y(3);
  y << 0.0, 1.0 + 1e-9, 0.0;
  const SpherePoint p{y};
  CHECK(std::abs(p.coords().norm() - 1.0) <= 1e-12);
}
