#include <cmath>

#include "antiloc/cbs.hpp"
#include "antiloc/numerics.hpp"

namespace antiloc {

namespace {

constexpr double kSpan = 6.5;  // Gaussian widths covered by each coordinate

// sigma = 1/2 int d3r1 n(r1) int dOmega int ds s^2 n(r1 + s u) terms(r1, r1 + s u)
QuadratureResult inner(const CbsEvaluator& ev, const QuadratureNodes& nodes, const Vec3& r1,
                       double weight) {
  const CloudConfig& c = ev.cloud();
  const double n0 = ev.n0();
  const double r_min = ev.options().r_min;
  const auto polar = gauss_legendre(nodes.polar, -1.0, 1.0);
  const auto unit = gauss_legendre(nodes.distance, -1.0, 1.0);
  const double dphi = 2.0 * kPi / nodes.azimuth;

  QuadratureResult acc;
  for (std::size_t it = 0; it < polar.nodes.size(); ++it) {
    const double ct = polar.nodes[it];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int ip = 0; ip < nodes.azimuth; ++ip) {
      const double phi = (ip + 0.5) * dphi;
      const Vec3 u(st * std::cos(phi), st * std::sin(phi), ct);
      // Density along the ray is a Gaussian in s; integrate over its support.
      const double a = u.x() * u.x() / (c.sigma_x * c.sigma_x) +
                       u.y() * u.y() / (c.sigma_y * c.sigma_y) +
                       u.z() * u.z() / (c.sigma_z * c.sigma_z);
      const double b = r1.x() * u.x() / (c.sigma_x * c.sigma_x) +
                       r1.y() * u.y() / (c.sigma_y * c.sigma_y) +
                       r1.z() * u.z() / (c.sigma_z * c.sigma_z);
      const double s_mid = -b / a;
      const double width = 8.0 / std::sqrt(a);
      const double lo = std::max(r_min, s_mid - width);
      const double hi = s_mid + width;
      if (hi <= lo) continue;
      const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
      for (std::size_t is = 0; is < unit.nodes.size(); ++is) {
        const double s = mid + half * unit.nodes[is];
        const Vec3 r2 = r1 + s * u;
        const double n2 = n0 * c.profile(r2);
        if (n2 == 0.0) continue;
        const PairTerms t = ev.pair_contribution(r1, r2);
        const double w = 0.5 * weight * polar.weights[it] * dphi * half * unit.weights[is] * s *
                         s * n2;
        acc.sigma_ladder += w * t.ladder;
        acc.sigma_interf += w * t.interf;
      }
    }
  }
  return acc;
}

}  // namespace

QuadratureResult quadrature_order2(const CbsEvaluator& ev, const QuadratureNodes& nodes) {
  const CloudConfig& c = ev.cloud();
  const double n0 = ev.n0();
  const auto zr = gauss_legendre(nodes.axial, -kSpan * c.sigma_z, kSpan * c.sigma_z);
  QuadratureResult total;
  auto add = [&](const QuadratureResult& r) {
    total.sigma_ladder += r.sigma_ladder;
    total.sigma_interf += r.sigma_interf;
  };

  if (c.is_axisymmetric()) {
    // Axial symmetry of cloud, orientation and probe: integrate the first
    // atom's azimuth analytically.
    const auto rho = gauss_legendre(nodes.radial, 0.0, kSpan * c.sigma_x);
    for (std::size_t i = 0; i < rho.nodes.size(); ++i)
      for (std::size_t k = 0; k < zr.nodes.size(); ++k) {
        const Vec3 r1(rho.nodes[i], 0.0, zr.nodes[k]);
        const double w =
            2.0 * kPi * rho.nodes[i] * rho.weights[i] * zr.weights[k] * n0 * c.profile(r1);
        if (w != 0.0) add(inner(ev, nodes, r1, w));
      }
    return total;
  }

  const auto xr = gauss_legendre(nodes.radial, -kSpan * c.sigma_x, kSpan * c.sigma_x);
  const auto yr = gauss_legendre(nodes.radial, -kSpan * c.sigma_y, kSpan * c.sigma_y);
  for (std::size_t i = 0; i < xr.nodes.size(); ++i)
    for (std::size_t j = 0; j < yr.nodes.size(); ++j)
      for (std::size_t k = 0; k < zr.nodes.size(); ++k) {
        const Vec3 r1(xr.nodes[i], yr.nodes[j], zr.nodes[k]);
        const double w = xr.weights[i] * yr.weights[j] * zr.weights[k] * n0 * c.profile(r1);
        if (w != 0.0) add(inner(ev, nodes, r1, w));
      }
  return total;
}

}  // namespace antiloc
