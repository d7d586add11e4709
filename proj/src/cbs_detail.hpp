#pragma once

#include <cstdint>
#include <vector>

#include "antiloc/cbs.hpp"
#include "antiloc/rng.hpp"

namespace antiloc::detail {

struct ChainSampleResult {
  double single = 0.0;
  std::vector<double> ladder;  // indexed by order
  std::vector<double> interf;
  std::uint64_t resampled = 0;
};

/// One Monte-Carlo chain of up to n_max scatterers; entries are already
/// multiplied by their importance weights.
void sample_chain(const CbsEvaluator& ev, int n_max, Rng& rng, ChainSampleResult& out);

}  // namespace antiloc::detail
