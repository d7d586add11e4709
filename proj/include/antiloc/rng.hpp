#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "antiloc/linalg.hpp"

namespace antiloc {

/// Random stream keyed by a list of integers (seed, work-item indices, ...).
/// Only the engine is taken from the standard library; the variate
/// transforms are written out so streams are identical across toolchains.
class Rng {
 public:
  explicit Rng(std::initializer_list<std::uint64_t> keys);

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  double normal();

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  Vec3 isotropic_direction();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace antiloc
