#pragma once

// Seeded random inputs for property tests.

#include <cstdint>
#include <numbers>
#include <random>

#include "nhscat/model.hpp"

namespace nhscat::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  double wave_number(double margin = 0.1) {
    return uniform(margin, std::numbers::pi - margin);
  }

  /// Any of the five models with every parameter in [0, 3].
  CenterModel model() {
    switch (integer(0, 4)) {
      case 0: return ImaginaryOnsite{uniform(0, 3), uniform(0, 3)};
      case 1: return UnequalHopping{uniform(0, 3), uniform(0, 3)};
      case 2: return ComplexHopping{uniform(0, 3), uniform(0, 3)};
      case 3: return AntiHermitianHopping{uniform(0, 3), uniform(0, 3)};
      default: return ImaginaryCoupling{uniform(0, 3)};
    }
  }

  /// A model at a Hermitian parameter point, one family after another.
  CenterModel hermitian_model(int family) {
    switch (family % 5) {
      case 0: return ImaginaryOnsite{0.0, 0.0};
      case 1: return UnequalHopping{-uniform(0.2, 3), 0.0};
      case 2: return ComplexHopping{-uniform(0.2, 3), 0.0};
      case 3: return AntiHermitianHopping{0.0, 0.0};
      default: return ImaginaryCoupling{0.0};
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace nhscat::testing
