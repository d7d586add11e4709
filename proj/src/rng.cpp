#include "antiloc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace antiloc {

Rng::Rng(std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  for (std::uint64_t k : keys) {
    words.push_back(static_cast<std::uint32_t>(k & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
  const double phi = 2.0 * kPi * uniform();
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection removes the modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

Vec3 Rng::isotropic_direction() {
  const double cos_t = 2.0 * uniform() - 1.0;
  const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
  const double phi = 2.0 * kPi * uniform();
  return {sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t};
}

}  // namespace antiloc
