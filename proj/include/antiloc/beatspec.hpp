#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "antiloc/linalg.hpp"
#include "antiloc/medium.hpp"
#include "antiloc/rng.hpp"

namespace antiloc {

/// Maxwell velocity distribution, v_rms per axis in units gamma/k.
struct VelocityModel {
  double v_rms = 0.0;

  void validate() const;
};

/// Per-axis rms velocity in units gamma/k for an atom of mass `mass_amu` at
/// temperature `kelvin`, probed at wavelength `wavelength_m` on a line of
/// natural width `linewidth_hz` (Gamma / 2 pi).
double thermal_velocity_rms(double kelvin, double mass_amu, double wavelength_m,
                            double linewidth_hz);

/// thermal_velocity_rms with the 85Rb D2 constants.
double rb85_velocity_rms(double kelvin);

/// Photocurrent spectrum around the beat frequency. omega_grid holds offsets
/// from the carrier; the trapezoid integral of intensity over the grid is the
/// channel weight times the fraction of the line inside the grid.
struct BeatSpectrum {
  std::vector<double> omega_grid;
  std::vector<double> intensity;
  double carrier = 0.0;
  double rms_width = 0.0;  ///< of the underlying continuous line

  double total() const;
};

/// Evenly spaced grid with `steps` points from start to stop inclusive.
std::vector<double> linear_grid(double start, double stop, std::size_t steps);

/// Unit direction from the first to the second scatterer of a pair.
struct PairGeometry {
  Vec3 direction = Vec3::UnitZ();
  double weight = 1.0;
};

/// Doppler rate of the double-scattering loop length z1 + |r12| + z2 per unit
/// k v_rms: sqrt(|z - u|^2 + |z + u|^2).
double loop_rate_factor(const Vec3& u);

/// Single scattering: Gaussian of rms width 2 k v_rms around the carrier.
BeatSpectrum single_profile(const VelocityModel& v, double k_laser, double omega_R,
                            std::span<const double> grid, double weight = 1.0);

/// Double scattering: velocity average done per geometry, then a weighted
/// average over the geometries.
BeatSpectrum double_profile(const VelocityModel& v, double k_laser, double omega_R,
                            std::span<const PairGeometry> geometries,
                            std::span<const double> grid, double weight = 1.0);

/// Pair directions drawn with the chain-sampling measure of the Monte-Carlo
/// estimator: first atom from the density, second along an isotropic ray
/// weighted by the column beyond r_min.
std::vector<PairGeometry> sample_pair_geometries(const CloudConfig& cloud, std::size_t n,
                                                 double r_min, Rng& rng);

/// Full width at half maximum read off the sampled profile; 0 when all weight
/// sits in one bin.
double fwhm(const BeatSpectrum& spectrum);

/// Second moment about the carrier computed from the samples.
double sampled_rms_width(const BeatSpectrum& spectrum);

struct Resolvability {
  bool resolvable = false;
  double margin = 0.0;  ///< FWHM / zeeman_beat
  double fwhm = 0.0;
};

/// Resolvable iff FWHM < zeeman_beat / 3.
Resolvability channel_resolvability(const BeatSpectrum& spectrum, double zeeman_beat);

}  // namespace antiloc
