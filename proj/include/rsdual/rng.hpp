#pragma once

#include <cstdint>
#include <random>

#include "rsdual/linalg.hpp"

namespace rsd {

/// Seedable generator with portable output: the engine is std::mt19937_64 and
/// the real-valued transforms are implemented here, so streams are identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for trial `index` of a campaign seeded with `seed`.
  static Rng for_trial(std::uint64_t seed, std::uint64_t index);

  std::uint64_t bits() { return engine_(); }
  double uniform();                     // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();                      // standard Gaussian
  double exponential();                 // rate 1
  Complex complex_normal() { return {normal(), normal()}; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Haar-distributed element of SU(n).
UnitaryMatrix random_special_unitary(int n, Rng& rng);
/// Gaussian element of su(n) (standard normal coordinates in su_basis).
LieAlgebraVector random_lie_algebra(int n, Rng& rng);

}  // namespace rsd
