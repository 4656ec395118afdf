#pragma once

#include <cstdint>
#include <random>

#include "corostab/tensor.hpp"

namespace corostab {

/// Reproducible random source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; the distributions below are written
/// out here instead of using <random> distributions, whose algorithms are
/// implementation-defined. Same seed, same numbers, on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal by the Box-Muller transform (one draw per call).
  double normal();

  Vector3 uniform_vector(double lo, double hi);
  /// Uniformly distributed rotation (normalized Gaussian quaternion).
  Tensor3 rotation();
  /// Symmetric tensor from the Gaussian orthogonal ensemble: diagonal
  /// N(0,1), off-diagonal N(0,1/2).
  SymmetricTensor3 goe();
  /// goe() scaled to unit Frobenius norm.
  SymmetricTensor3 unit_symmetric();

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Random smooth path whose state at t = 0 has log-stretches x in a random
/// frame; rates are unit scale.
SmoothPathSpec random_path_spec(Rng& rng, const Vector3& x, double rate_scale = 1.0);

}  // namespace corostab
