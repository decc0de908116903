#include "debary/rng.hpp"

#include <cmath>
#include <numbers>

namespace debary {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : base_(splitmix64(seed ^ splitmix64(stream * 0x632be59bd9b4e019ULL))) {}

std::uint64_t CounterRng::next_u64() { return splitmix64(base_ + ++counter_); }

double CounterRng::uniform() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double CounterRng::normal() {
  const double u = std::max(uniform(), 0x1.0p-60);
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

Vec CounterRng::sphere_point(int ambient_dim) {
  Vec v(ambient_dim);
  double n = 0.0;
  do {
    for (int i = 0; i < ambient_dim; ++i) v[i] = normal();
    n = v.norm();
  } while (n < 1e-12);
  return v / n;
}

Vec CounterRng::ball_point(int ambient_dim, double max_radius) {
  return Vec(sphere_point(ambient_dim) * max_radius * std::pow(uniform(), 1.0 / ambient_dim));
}

Mat CounterRng::rotation(int ambient_dim, bool proper) {
  Mat a(ambient_dim, ambient_dim);
  for (int i = 0; i < ambient_dim; ++i) {
    for (int j = 0; j < ambient_dim; ++j) a(i, j) = normal();
  }
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < ambient_dim; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  if (proper && q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

MobiusMap CounterRng::mobius(int ambient_dim, double max_radius) {
  Vec w = sphere_point(ambient_dim) * uniform(0.0, max_radius);
  return MobiusMap(BallPoint(std::move(w)), rotation(ambient_dim));
}

}  // namespace debary
