#pragma once

#include "debary/complex_maps.hpp"
#include "debary/io.hpp"

#include <iosfwd>

namespace debary {

struct SuiteConfig {
  std::uint64_t seed = 1;
  int level = 0;  // 0 picks the suite default
  int workers = 1;
  SolverConfig solver{};
};

struct SuiteResult {
  std::string name;
  std::vector<CheckItem> checks;
  bool passed() const { return all_asserted_pass(checks); }
};

/// Named property suites: naturality, barycenter, extension, blaschke,
/// inner, jacobian. Every check carries a stable property id that names the
/// violated invariant on failure.
SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg);

std::vector<std::string> suite_names();

/// Random admissible measure with a handful of atoms (masses strictly below
/// 1/2, summing to one).
SphereMeasure random_atomic_measure(CounterRng& rng, int ambient_dim, int max_atoms = 8);

/// Random admissible measure mixing atoms with a smooth density part sampled
/// on the rule.
SphereMeasure random_mixed_measure(CounterRng& rng, const QuadratureRule& rule);

/// The uniform rule measure transported by a Mobius map; this is the sampled
/// harmonic measure with center g(0).
SphereMeasure transported_uniform(const MobiusMap& g, const QuadratureRule& rule);

}  // namespace debary
