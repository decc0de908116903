#pragma once

#include "debary/core.hpp"

#include <functional>

namespace debary {

/// Quadrature rule on S^n with nodes as matrix columns and weights summing to
/// one. `order` is the polynomial exactness degree of the rule (0 for Monte
/// Carlo rules, which carry equal weights on an antithetic point set).
struct QuadratureRule {
  Mat nodes;      // (n+1) x M
  Vec weights;    // M, positive, sum = 1
  int order = 0;
  int level = 0;
  bool monte_carlo = false;

  int sphere_dim() const { return static_cast<int>(nodes.rows()) - 1; }
  int ambient_dim() const { return static_cast<int>(nodes.rows()); }
  Index size() const { return nodes.cols(); }
};

/// Builds the rule for integrating against the uniform probability measure:
///   n = 1  : 2^level equispaced nodes, equal weights (spectrally accurate);
///   n = 2  : Gauss-Legendre in the polar cosine times equispaced azimuth,
///            level x (2 level) nodes, exact through degree 2 level - 1;
///   n >= 3 : 4^level equal-weight low-discrepancy points, antithetic so the
///            rule integrates odd functions to zero exactly.
/// Levels below 3 are rejected.
QuadratureRule make_rule(int sphere_dim, int level);

/// Nodes and weights of the k-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int k, Vec& x, Vec& w);

/// Sum of weights[i] * f(node_i), pairwise-accumulated.
double integrate(const QuadratureRule& rule, const std::function<double(const Vec&)>& f);

/// Same with a vector-valued integrand.
Vec integrate_vec(const QuadratureRule& rule, int value_dim,
                  const std::function<Vec(const Vec&)>& f);

/// Monte Carlo value with a standard-error estimate; meaningful only when
/// rule.monte_carlo is set (deterministic rules report std_error = 0).
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};
McEstimate integrate_with_error(const QuadratureRule& rule,
                                const std::function<double(const Vec&)>& f);

}  // namespace debary
