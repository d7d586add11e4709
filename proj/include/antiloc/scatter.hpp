#pragma once

#include <array>
#include <vector>

#include "antiloc/atom.hpp"
#include "antiloc/half_int.hpp"
#include "antiloc/linalg.hpp"

namespace antiloc {

/// Spherical basis vector: e_{+1} = -(x + iy)/sqrt2, e_0 = z, e_{-1} = (x - iy)/sqrt2.
CVec3 spherical_unit(int q);

/// Polarization vector expanded on the spherical basis, v = sum_q c_q e_q.
struct SphericalVector {
  std::array<complex, 3> c{};

  static SphericalVector unit(int q);
  static SphericalVector from_cartesian(const CVec3& v);

  complex operator[](int q) const { return c[static_cast<std::size_t>(q + 1)]; }
  complex& operator[](int q) { return c[static_cast<std::size_t>(q + 1)]; }

  CVec3 cartesian() const;
  double norm2() const;
};

/// A single Kramers-Heisenberg channel amplitude with its labels.
struct KHAmplitude {
  complex value;
  HalfInt m_in;
  HalfInt m_out;
  int q_in = 0;
  int q_out = 0;
  double laser_detuning = 0.0;
};

/// Quasi-elastic scattering on the populated ground level of a scheme.
///
/// The dimensionless Kramers-Heisenberg amplitude is
///   A = - sum_{Fe,me} <Fe me|d_qout|F0 m_out> <Fe me|d_qin|F0 m_in> / (Delta_Fe + i gamma/2)
/// (rotating-wave term only). Multiplying by scale() gives the scattering
/// amplitude f in units of 1/k, anchored so that a closed two-level cycle
/// has the resonant extinction cross section 6 pi / k^2.
class ScatteringModel {
 public:
  explicit ScatteringModel(LevelScheme scheme);

  const LevelScheme& scheme() const { return scheme_; }
  HalfInt ground() const { return scheme_.populated_ground; }
  HalfInt stretched() const { return -scheme_.populated_ground; }

  /// f / A in units of 1/k: 3 (2Je + 1) / 4.
  double scale() const { return scale_; }

  complex amplitude(HalfInt m_in, HalfInt m_out, int q_in, int q_out, double delta) const;

  /// Contribution of a single excited level Fe to amplitude().
  complex amplitude_from_level(HalfInt Fe, HalfInt m_in, HalfInt m_out, int q_in, int q_out,
                               double delta) const;

  /// Cartesian tensor T with e_out^* . T . e_in equal to the dimensionless amplitude.
  CMat3 tensor(HalfInt m_in, HalfInt m_out, double delta) const;

  /// Forward elastic amplitude of the stretched state for the lab mode e_q.
  complex forward(int q, double delta) const;

  /// chi_q = 4 pi density f_q(0), density in units of k^3.
  complex susceptibility(int q, double delta, double density) const;

  /// Optical-theorem extinction cross section in units of 1/k^2.
  double total_cross_section(int q, double delta) const;

 private:
  struct Coupling {
    HalfInt Fe;
    double offset = 0.0;  // E_Fe - E_F0
    // d[m0 index][q + 1] = <Fe m0+q|d_q|F0 m0>
    std::vector<std::array<double, 3>> d;
  };

  double element(const Coupling& c, HalfInt m0, int q) const;

  LevelScheme scheme_;
  double scale_ = 0.0;
  std::vector<Coupling> couplings_;
};

complex kh_amplitude(const LevelScheme& scheme, HalfInt m_in, HalfInt m_out, int q_in, int q_out,
                     double delta);

KHAmplitude kh_channel(const LevelScheme& scheme, HalfInt m_in, HalfInt m_out, int q_in,
                       int q_out, double delta);

/// Bilinear contraction sum (e_out)_qout^* M_{qout,qin} (e_in)_qin.
complex amplitude_lab_frame(const LevelScheme& scheme, HalfInt m_in, HalfInt m_out,
                            const SphericalVector& e_in, const SphericalVector& e_out,
                            double delta);

complex susceptibility(const LevelScheme& scheme, int q, double delta, double density);

double total_cross_section(const LevelScheme& scheme, int q, double delta);

}  // namespace antiloc
