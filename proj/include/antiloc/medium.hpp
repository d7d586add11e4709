#pragma once

#include "antiloc/linalg.hpp"
#include "antiloc/rng.hpp"
#include "antiloc/scatter.hpp"

namespace antiloc {

/// Gaussian cloud. Lengths in units of 1/k, densities in units of k^3.
struct CloudConfig {
  double sigma_x = 1000.0;
  double sigma_y = 1000.0;
  double sigma_z = 1000.0;
  double target_b = 1.0;      ///< on-axis optical depth of the probe mode
  double peak_density = 0.0;  ///< filled in by calibration
  double temperature = 0.0;   ///< per-axis velocity variance, units (gamma/k)^2

  static CloudConfig sphere(double radius, double b = 1.0);
  /// Elongated along the probe axis: sigma_z > sigma_x = sigma_y.
  static CloudConfig cigar(double radial, double axial, double b = 1.0);

  void validate() const;
  bool is_spherical() const { return sigma_x == sigma_y && sigma_y == sigma_z; }
  bool is_axisymmetric() const { return sigma_x == sigma_y; }

  /// Volume integral of the profile at unit peak density: (2 pi)^(3/2) sx sy sz.
  double volume() const;
  double atom_number(double n0) const { return n0 * volume(); }

  /// n(r)/n0
  double profile(const Vec3& r) const;
};

/// Peak density n0 with n0 sqrt(2 pi) sigma_z sigma_tot(q, delta) = target_b.
double calibrate_density(const CloudConfig& cloud, const ScatteringModel& model, double delta,
                         int probe_mode);
double calibrate_density(const CloudConfig& cloud, const LevelScheme& scheme, double delta,
                         int probe_mode);

/// Closed-form column of the unit-peak profile along from + s*dir, s in [s0, s1].
/// `dir` must be a unit vector; s1 may be +infinity.
double column_profile(const CloudConfig& cloud, const Vec3& from, const Vec3& dir, double s0,
                      double s1);

/// Column density between two points.
double segment_column(const CloudConfig& cloud, double n0, const Vec3& from, const Vec3& to);

/// Column density from a point to infinity along `dir`.
double halfline_column(const CloudConfig& cloud, double n0, const Vec3& from, const Vec3& dir);

Vec3 sample_position(const CloudConfig& cloud, Rng& rng);

/// Field propagation factor exp(i/2 * chi_q * column) between two points.
complex ray_attenuation(const CloudConfig& cloud, const LevelScheme& scheme, double n0,
                        const Vec3& from, const Vec3& to, int q, double delta);

/// Same, from a point to the edge of the cloud along a unit direction.
complex ray_attenuation_to_infinity(const CloudConfig& cloud, const LevelScheme& scheme,
                                    double n0, const Vec3& from, const Vec3& dir, int q,
                                    double delta);

/// Next scatterer of a chain, drawn along a uniformly random direction with
/// distance distributed like the density on that ray beyond s_min.
struct RayStep {
  Vec3 position;
  Vec3 direction;
  double distance = 0.0;
  /// Integral of n/N along the ray from s_min to infinity. The density of the
  /// sampled point is (n(r)/N) / (4 pi s^2 column).
  double column = 0.0;
};

RayStep sample_ray_step(const CloudConfig& cloud, const Vec3& from, double s_min, Rng& rng);

/// Propagation through the oriented medium at one detuning. External rays
/// along the z axis use the helicity eigenmodes of the stretched-state gas;
/// rays between scatterers use the polarization-averaged susceptibility.
class OpticalMedium {
 public:
  struct Options {
    bool external = true;
    bool interatomic = true;
  };

  OpticalMedium(const CloudConfig& cloud, const ScatteringModel& model, double delta, double n0,
                Options options);

  double n0() const { return n0_; }
  const CloudConfig& cloud() const { return cloud_; }

  /// chi_q per unit density.
  complex chi(int q) const { return chi_[static_cast<std::size_t>(q + 1)]; }
  complex chi_mean() const { return chi_mean_; }

  /// Probe field factor from z = -inf to `r` for lab mode e_q (q = +-1).
  complex external(const Vec3& r, int q) const;

  /// Field factor between two scatterers.
  complex interatomic(const Vec3& a, const Vec3& b) const;

 private:
  CloudConfig cloud_;
  double n0_;
  Options options_;
  std::array<complex, 3> chi_{};
  complex chi_mean_;
};

}  // namespace antiloc
