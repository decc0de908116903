#include "debary/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace debary {

void gauss_legendre(int k, Vec& x, Vec& w) {
  x.resize(k);
  w.resize(k);
  const int half = (k + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= k; ++j) {
        const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = k * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[k - 1 - i] = t;
    const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
    w[i] = wi;
    w[k - 1 - i] = wi;
  }
}

namespace {

QuadratureRule circle_rule(int level) {
  const Index m = Index(1) << level;
  QuadratureRule rule;
  rule.nodes.resize(2, m);
  for (Index j = 0; j < m; ++j) {
    const double th = 2.0 * std::numbers::pi * double(j) / double(m);
    rule.nodes(0, j) = std::cos(th);
    rule.nodes(1, j) = std::sin(th);
  }
  rule.weights = Vec::Constant(m, 1.0 / double(m));
  rule.order = static_cast<int>(m) - 1;
  rule.level = level;
  return rule;
}

QuadratureRule product_rule_s2(int level) {
  Vec t, a;
  gauss_legendre(level, t, a);
  const Index naz = 2 * Index(level);
  QuadratureRule rule;
  rule.nodes.resize(3, Index(level) * naz);
  rule.weights.resize(Index(level) * naz);
  Index c = 0;
  for (int i = 0; i < level; ++i) {
    const double st = std::sqrt(std::max(0.0, 1.0 - t[i] * t[i]));
    const double wi = a[i] / 2.0 / double(naz);
    for (Index j = 0; j < naz; ++j, ++c) {
      const double ph = 2.0 * std::numbers::pi * double(j) / double(naz);
      rule.nodes(0, c) = st * std::cos(ph);
      rule.nodes(1, c) = st * std::sin(ph);
      rule.nodes(2, c) = t[i];
      rule.weights[c] = wi;
    }
  }
  rule.order = 2 * level - 1;
  rule.level = level;
  return rule;
}

// Acklam's rational approximation of the standard normal quantile, refined by
// one Halley step; accurate to ~1e-15 on (0,1).
double normal_quantile(double p) {
  static const double A[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double B[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double C[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double D[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5, r = q * q;
    x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
        (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

QuadratureRule monte_carlo_rule(int sphere_dim, int level) {
  const int k = sphere_dim + 1;
  Index m = 1;
  for (int i = 0; i < level; ++i) m *= 4;
  if (m % 2 == 1) ++m;

  // Kronecker sequence with the generalized golden-ratio increments, pushed
  // through the normal quantile and normalized; antipodes appended so every
  // odd moment of the rule vanishes exactly.
  double phi = 1.0;
  for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (k + 1));
  Vec alpha(k);
  for (int j = 0; j < k; ++j) alpha[j] = std::fmod(std::pow(1.0 / phi, j + 1), 1.0);

  QuadratureRule rule;
  rule.nodes.resize(k, m);
  Vec u = Vec::Constant(k, 0.5);
  for (Index i = 0; i < m / 2; ++i) {
    for (int j = 0; j < k; ++j) {
      u[j] = std::fmod(u[j] + alpha[j], 1.0);
      rule.nodes(j, 2 * i) = normal_quantile(std::min(1.0 - 1e-12, std::max(1e-12, u[j])));
    }
    const double nrm = rule.nodes.col(2 * i).norm();
    if (nrm < 1e-8) {
      rule.nodes.col(2 * i).setZero();
      rule.nodes(0, 2 * i) = 1.0;
    } else {
      rule.nodes.col(2 * i) /= nrm;
    }
    rule.nodes.col(2 * i + 1) = -rule.nodes.col(2 * i);
  }
  rule.weights = Vec::Constant(m, 1.0 / double(m));
  rule.order = 0;
  rule.level = level;
  rule.monte_carlo = true;
  return rule;
}

}  // namespace

QuadratureRule make_rule(int sphere_dim, int level) {
  if (level < 3) {
    throw Error(ErrorCode::UnsupportedLevel,
                "quadrature level " + std::to_string(level) + " is below the minimum (3)");
  }
  if (sphere_dim < 1) {
    throw Error(ErrorCode::InvalidArgument, "sphere dimension must be at least 1");
  }
  if (sphere_dim == 1) return circle_rule(level);
  if (sphere_dim == 2) return product_rule_s2(level);
  return monte_carlo_rule(sphere_dim, level);
}

double integrate(const QuadratureRule& rule, const std::function<double(const Vec&)>& f) {
  Vec values(rule.size());
  for (Index i = 0; i < rule.size(); ++i) values[i] = f(rule.nodes.col(i));
  return weighted_sum(values, rule.weights);
}

Vec integrate_vec(const QuadratureRule& rule, int value_dim,
                  const std::function<Vec(const Vec&)>& f) {
  Mat values(value_dim, rule.size());
  for (Index i = 0; i < rule.size(); ++i) values.col(i) = f(rule.nodes.col(i));
  return weighted_colsum(values, rule.weights);
}

McEstimate integrate_with_error(const QuadratureRule& rule,
                                const std::function<double(const Vec&)>& f) {
  Vec values(rule.size());
  for (Index i = 0; i < rule.size(); ++i) values[i] = f(rule.nodes.col(i));
  McEstimate est;
  est.value = weighted_sum(values, rule.weights);
  if (rule.monte_carlo && rule.size() > 1) {
    const double mean = est.value;
    double ss = 0.0;
    for (Index i = 0; i < rule.size(); ++i) ss += (values[i] - mean) * (values[i] - mean);
    est.std_error = std::sqrt(ss / double(rule.size() - 1) / double(rule.size()));
  }
  return est;
}

}  // namespace debary
