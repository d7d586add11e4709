#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "antiloc/atom.hpp"
#include "antiloc/beatspec.hpp"
#include "antiloc/cbs.hpp"
#include "antiloc/medium.hpp"

namespace antiloc {

struct GridSpec {
  double start = 0.0;
  double stop = 1.0;
  std::size_t steps = 2;

  std::vector<double> values() const { return linear_grid(start, stop, steps); }
};

struct BeatConfig {
  VelocityModel velocity;
  double k_laser = 1.0;
  GridSpec grid{-0.3, 0.3, 601};
  std::size_t geometry_samples = 100000;
};

struct OutputPaths {
  std::string csv_path = "spectrum.csv";
  std::string plot_path;  ///< empty: no plot
  std::string beat_csv_path = "beatspec.csv";
};

/// Parsed run configuration. See README.md for the JSON schema.
struct RunConfig {
  LevelScheme scheme;
  CloudConfig cloud;
  ChannelSpec channel;
  GridSpec delta_grid{-36.0, 6.0, 161};
  std::vector<double> check_deltas{0.0, -10.0, -27.0};
  std::uint64_t n_samples = 100000;
  int n_max_order = 2;
  std::uint64_t seed = 0;
  CbsOptions options;
  BeatConfig beat;
  OutputPaths outputs;
  /// Canonical JSON of the configuration without the seed.
  std::string canonical;

  /// FNV-1a of the canonical form and the seed.
  std::uint64_t hash() const;
};

/// Throws ConfigError; syntax errors carry "origin:line:column".
RunConfig parse_config(std::string_view text, std::string_view origin = "<config>");
RunConfig load_config(const std::string& path);

std::uint64_t fnv1a(std::string_view data);

}  // namespace antiloc
