#pragma once

#include "debary/core.hpp"
#include "debary/mobius.hpp"

#include <cstdint>

namespace debary {

/// Counter-based deterministic generator (splitmix64 over a seed/stream/
/// counter triple). Identical seeds give identical streams on every platform,
/// independent of call interleaving across workers when each worker derives
/// its own stream.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  double uniform();                      // [0, 1)
  double uniform(double a, double b);
  double normal();

  Vec sphere_point(int ambient_dim);
  Vec ball_point(int ambient_dim, double max_radius);
  /// Haar-ish random rotation from the QR factorization of a Gaussian matrix,
  /// sign-fixed; pass proper=true to force determinant +1.
  Mat rotation(int ambient_dim, bool proper = true);
  MobiusMap mobius(int ambient_dim, double max_radius);

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace debary
