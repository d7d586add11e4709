#pragma once

#include <string>
#include <vector>

#include "antiloc/half_int.hpp"

namespace antiloc {

struct HyperfineLevel {
  HalfInt F;
  double energy = 0.0;  ///< units of gamma
};

/// Hyperfine and Zeeman structure of the model atom. All frequencies are in
/// units of the natural width gamma.
///
/// Excited energies are measured from the reference line (for 85Rb the
/// F0=3 -> F=4 transition), ground energies from the populated ground level,
/// so that a laser detuned by `delta` from the reference sits at
/// delta - (E_e - E_g) from the line F0 -> Fe. Each manifold is listed from
/// the highest to the lowest level.
struct LevelScheme {
  std::string name = "custom";
  HalfInt nuclear_spin;
  HalfInt Jg;
  HalfInt Je;
  std::vector<HyperfineLevel> ground_levels;
  std::vector<HyperfineLevel> excited_levels;
  HalfInt populated_ground;  ///< F0 of the prepared |F0, -F0> state
  double gamma = 1.0;
  double zeeman_ground_splitting = 0.1;
  double zeeman_quadratic = 0.0;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  const HyperfineLevel& ground(HalfInt F) const;
  const HyperfineLevel& excited(HalfInt F) const;
  bool has_ground(HalfInt F) const;
  bool has_excited(HalfInt F) const;
};

/// 85Rb D2 line: I = 5/2, 5S1/2 (F0 = 2, 3) -> 5P3/2 (F = 1..4).
LevelScheme rb85_default();

/// J = 0 -> J = 1 atom without nuclear spin; the classical reciprocal scatterer.
LevelScheme scalar_dipole_atom();

/// Laser detuning from the F0 -> Fe line when detuned `delta` from the reference.
double detuning(const LevelScheme& scheme, HalfInt F0, HalfInt Fe, double delta);

/// Ground Zeeman energy of |F0, m> relative to the stretched state |F0, -F0>.
double zeeman_energy(const LevelScheme& scheme, HalfInt F0, HalfInt m);

/// Reference detunings at which the populated ground level is resonant with
/// each dipole-allowed excited level, ascending.
std::vector<double> resonance_positions(const LevelScheme& scheme);

}  // namespace antiloc
