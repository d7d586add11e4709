#include "antiloc/scatter.hpp"

#include <cmath>

#include "antiloc/angmom.hpp"
#include "antiloc/errors.hpp"

namespace antiloc {

CVec3 spherical_unit(int q) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (q) {
    case 1:
      return CVec3(complex(-s, 0), complex(0, -s), 0);
    case 0:
      return CVec3(0, 0, 1);
    case -1:
      return CVec3(complex(s, 0), complex(0, -s), 0);
    default:
      throw std::invalid_argument("spherical index must be -1, 0 or +1");
  }
}

SphericalVector SphericalVector::unit(int q) {
  SphericalVector v;
  v[q] = 1.0;
  return v;
}

SphericalVector SphericalVector::from_cartesian(const CVec3& v) {
  SphericalVector s;
  for (int q = -1; q <= 1; ++q) s[q] = spherical_unit(q).dot(v);  // conj(e_q) . v
  return s;
}

CVec3 SphericalVector::cartesian() const {
  CVec3 v = CVec3::Zero();
  for (int q = -1; q <= 1; ++q) v += (*this)[q] * spherical_unit(q);
  return v;
}

double SphericalVector::norm2() const {
  return std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]);
}

ScatteringModel::ScatteringModel(LevelScheme scheme) : scheme_(std::move(scheme)) {
  scheme_.validate();
  scale_ = 0.75 * (scheme_.Je.twice() + 1);
  const HalfInt F0 = scheme_.populated_ground;
  for (const auto& level : scheme_.excited_levels) {
    if (angmom::hyperfine_reduced_element(scheme_, F0, level.F) == 0.0) continue;
    Coupling c;
    c.Fe = level.F;
    c.offset = level.energy - scheme_.ground(F0).energy;
    for (HalfInt m0 = -F0; m0 <= F0; m0 += 1) {
      std::array<double, 3> row{};
      for (int q = -1; q <= 1; ++q) {
        const HalfInt me = m0 + HalfInt(q);
        row[static_cast<std::size_t>(q + 1)] =
            valid_projection(level.F, me)
                ? angmom::dipole_element(F0, m0, q, level.F, me, scheme_)
                : 0.0;
      }
      c.d.push_back(row);
    }
    couplings_.push_back(std::move(c));
  }
}

double ScatteringModel::element(const Coupling& c, HalfInt m0, int q) const {
  const int idx = (m0 + scheme_.populated_ground).twice() / 2;
  return c.d[static_cast<std::size_t>(idx)][static_cast<std::size_t>(q + 1)];
}

complex ScatteringModel::amplitude_from_level(HalfInt Fe, HalfInt m_in, HalfInt m_out, int q_in,
                                              int q_out, double delta) const {
  const HalfInt F0 = ground();
  if (!valid_projection(F0, m_in) || !valid_projection(F0, m_out)) return 0.0;
  if (q_in < -1 || q_in > 1 || q_out < -1 || q_out > 1) return 0.0;
  if (m_out + HalfInt(q_out) != m_in + HalfInt(q_in)) return 0.0;
  scheme_.excited(Fe);
  for (const auto& c : couplings_) {
    if (c.Fe != Fe) continue;
    const double num = element(c, m_out, q_out) * element(c, m_in, q_in);
    if (num == 0.0) return 0.0;
    return -num / complex(delta - c.offset, 0.5 * scheme_.gamma);
  }
  return 0.0;
}

complex ScatteringModel::amplitude(HalfInt m_in, HalfInt m_out, int q_in, int q_out,
                                   double delta) const {
  const HalfInt F0 = ground();
  if (!valid_projection(F0, m_in) || !valid_projection(F0, m_out)) return 0.0;
  if (q_in < -1 || q_in > 1 || q_out < -1 || q_out > 1) return 0.0;
  if (m_out + HalfInt(q_out) != m_in + HalfInt(q_in)) return 0.0;
  complex sum = 0.0;
  for (const auto& c : couplings_) {
    const double num = element(c, m_out, q_out) * element(c, m_in, q_in);
    if (num != 0.0) sum -= num / complex(delta - c.offset, 0.5 * scheme_.gamma);
  }
  return sum;
}

CMat3 ScatteringModel::tensor(HalfInt m_in, HalfInt m_out, double delta) const {
  // T = sum A(q_in, q_out) e_qout e_qin^dagger
  CMat3 t = CMat3::Zero();
  for (int q_in = -1; q_in <= 1; ++q_in) {
    const int q_out = q_in - (m_out - m_in).twice() / 2;
    if (q_out < -1 || q_out > 1) continue;
    const complex a = amplitude(m_in, m_out, q_in, q_out, delta);
    if (a == 0.0) continue;
    t += a * spherical_unit(q_out) * spherical_unit(q_in).adjoint();
  }
  return t;
}

complex ScatteringModel::forward(int q, double delta) const {
  return amplitude(stretched(), stretched(), q, q, delta);
}

complex ScatteringModel::susceptibility(int q, double delta, double density) const {
  return 4.0 * kPi * density * scale_ * forward(q, delta);
}

double ScatteringModel::total_cross_section(int q, double delta) const {
  return 4.0 * kPi * scale_ * forward(q, delta).imag();
}

complex kh_amplitude(const LevelScheme& scheme, HalfInt m_in, HalfInt m_out, int q_in, int q_out,
                     double delta) {
  return ScatteringModel(scheme).amplitude(m_in, m_out, q_in, q_out, delta);
}

KHAmplitude kh_channel(const LevelScheme& scheme, HalfInt m_in, HalfInt m_out, int q_in,
                       int q_out, double delta) {
  return {kh_amplitude(scheme, m_in, m_out, q_in, q_out, delta), m_in, m_out, q_in, q_out, delta};
}

complex amplitude_lab_frame(const LevelScheme& scheme, HalfInt m_in, HalfInt m_out,
                            const SphericalVector& e_in, const SphericalVector& e_out,
                            double delta) {
  const ScatteringModel model(scheme);
  complex sum = 0.0;
  for (int q_in = -1; q_in <= 1; ++q_in)
    for (int q_out = -1; q_out <= 1; ++q_out)
      sum += std::conj(e_out[q_out]) * model.amplitude(m_in, m_out, q_in, q_out, delta) *
             e_in[q_in];
  return sum;
}

complex susceptibility(const LevelScheme& scheme, int q, double delta, double density) {
  return ScatteringModel(scheme).susceptibility(q, delta, density);
}

double total_cross_section(const LevelScheme& scheme, int q, double delta) {
  return ScatteringModel(scheme).total_cross_section(q, delta);
}

}  // namespace antiloc
