#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "antiloc/cbs.hpp"
#include "antiloc/config.hpp"

namespace antiloc {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfigError = 2,
  kExitInvariantViolation = 3,
};

struct RunOptions {
  std::optional<std::uint64_t> seed;  ///< overrides the config file
  unsigned threads = 0;               ///< 0: all hardware threads
  std::string out_dir;                ///< prefix for relative output paths
};

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_double(double x);

std::string hash_hex(std::uint64_t h);

void write_spectrum_csv(std::ostream& os, std::span<const SpectrumRecord> records,
                        std::uint64_t config_hash, std::uint64_t seed);

void write_beat_csv(std::ostream& os, const BeatSpectrum& single, const BeatSpectrum& pair,
                    std::uint64_t config_hash, std::uint64_t seed);

/// Self-contained SVG of R2 and X_EF against detuning with resonance markers.
std::string spectrum_svg(std::span<const SpectrumRecord> records,
                         std::span<const double> resonances, std::uint64_t config_hash,
                         std::uint64_t seed);

int run_spectrum(RunConfig config, const RunOptions& options, std::ostream& log);
int run_beatspec(RunConfig config, const RunOptions& options, std::ostream& log);

/// Order-2 Monte Carlo against the deterministic pair quadrature at the
/// configured check detunings; passes within 2%.
int run_quadrature_check(RunConfig config, const RunOptions& options, std::ostream& log);

struct OracleOptions {
  unsigned threads = 0;
  /// Fault injection: run the suite with a wrong outgoing phase sign.
  bool corrupt_propagator = false;
};

/// Fast pre-flight suite (reciprocity, quadrature, identities). 0 iff all pass.
int run_oracles(const OracleOptions& options, std::ostream& out);

}  // namespace antiloc
