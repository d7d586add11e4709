#include "antiloc/medium.hpp"

#include <cmath>
#include <limits>

#include "antiloc/errors.hpp"

namespace antiloc {

namespace {

struct LineGaussian {
  double a;      // curvature sum u_i^2 / sigma_i^2
  double s_mid;  // parameter of maximal density
  double q_min;  // exponent at s_mid: density = n0 exp(-q_min/2) exp(-a (s - s_mid)^2 / 2)
};

LineGaussian line_gaussian(const CloudConfig& c, const Vec3& p, const Vec3& u) {
  const Vec3 inv(1.0 / (c.sigma_x * c.sigma_x), 1.0 / (c.sigma_y * c.sigma_y),
                 1.0 / (c.sigma_z * c.sigma_z));
  const double a = (u.array().square() * inv.array()).sum();
  const double b = (p.array() * u.array() * inv.array()).sum();
  const double cc = (p.array().square() * inv.array()).sum();
  return {a, -b / a, std::max(0.0, cc - b * b / a)};
}

// erf(x1) - erf(x0) for x0 <= x1 without cancellation in the tails.
double erf_difference(double x0, double x1) {
  if (x0 >= 0.0) return std::erfc(x0) - std::erfc(x1);
  if (x1 <= 0.0) return std::erfc(-x1) - std::erfc(-x0);
  return std::erf(x1) - std::erf(x0);
}

// Standard normal truncated to [alpha, inf).
double truncated_normal(double alpha, Rng& rng) {
  if (alpha < 0.5) {
    for (;;) {
      const double z = rng.normal();
      if (z >= alpha) return z;
    }
  }
  // Exponential proposal with the optimal rate.
  const double lambda = 0.5 * (alpha + std::sqrt(alpha * alpha + 4.0));
  for (;;) {
    const double z = alpha - std::log(rng.uniform_pos()) / lambda;
    const double d = z - lambda;
    if (rng.uniform() <= std::exp(-0.5 * d * d)) return z;
  }
}

}  // namespace

CloudConfig CloudConfig::sphere(double radius, double b) {
  CloudConfig c;
  c.sigma_x = c.sigma_y = c.sigma_z = radius;
  c.target_b = b;
  return c;
}

CloudConfig CloudConfig::cigar(double radial, double axial, double b) {
  CloudConfig c;
  c.sigma_x = c.sigma_y = radial;
  c.sigma_z = axial;
  c.target_b = b;
  return c;
}

void CloudConfig::validate() const {
  if (!(sigma_x > 0 && sigma_y > 0 && sigma_z > 0))
    throw ConfigError("cloud radii must be positive");
  if (!(target_b > 0)) throw ConfigError("target_b must be positive");
  if (temperature < 0) throw ConfigError("temperature must be non-negative");
}

double CloudConfig::volume() const {
  return std::pow(2.0 * kPi, 1.5) * sigma_x * sigma_y * sigma_z;
}

double CloudConfig::profile(const Vec3& r) const {
  const double q = r.x() * r.x() / (sigma_x * sigma_x) + r.y() * r.y() / (sigma_y * sigma_y) +
                   r.z() * r.z() / (sigma_z * sigma_z);
  return std::exp(-0.5 * q);
}

double calibrate_density(const CloudConfig& cloud, const ScatteringModel& model, double delta,
                         int probe_mode) {
  cloud.validate();
  const double sigma = model.total_cross_section(probe_mode, delta);
  if (!(sigma > std::numeric_limits<double>::min()))
    throw ZeroCrossSection("probe cross section vanishes at delta=" + std::to_string(delta));
  return cloud.target_b / (std::sqrt(2.0 * kPi) * cloud.sigma_z * sigma);
}

double calibrate_density(const CloudConfig& cloud, const LevelScheme& scheme, double delta,
                         int probe_mode) {
  return calibrate_density(cloud, ScatteringModel(scheme), delta, probe_mode);
}

double column_profile(const CloudConfig& cloud, const Vec3& from, const Vec3& dir, double s0,
                      double s1) {
  if (!(s1 > s0)) return 0.0;
  const LineGaussian g = line_gaussian(cloud, from, dir);
  const double k = std::sqrt(0.5 * g.a);
  const double x0 = (s0 - g.s_mid) * k;
  const double diff = std::isinf(s1) ? std::erfc(x0) : erf_difference(x0, (s1 - g.s_mid) * k);
  return std::exp(-0.5 * g.q_min) * std::sqrt(0.5 * kPi / g.a) * diff;
}

double segment_column(const CloudConfig& cloud, double n0, const Vec3& from, const Vec3& to) {
  const Vec3 d = to - from;
  const double len = d.norm();
  if (len == 0.0) return 0.0;
  return n0 * column_profile(cloud, from, d / len, 0.0, len);
}

double halfline_column(const CloudConfig& cloud, double n0, const Vec3& from, const Vec3& dir) {
  return n0 * column_profile(cloud, from, dir.normalized(), 0.0,
                             std::numeric_limits<double>::infinity());
}

Vec3 sample_position(const CloudConfig& cloud, Rng& rng) {
  const double x = cloud.sigma_x * rng.normal();
  const double y = cloud.sigma_y * rng.normal();
  const double z = cloud.sigma_z * rng.normal();
  return {x, y, z};
}

complex ray_attenuation(const CloudConfig& cloud, const LevelScheme& scheme, double n0,
                        const Vec3& from, const Vec3& to, int q, double delta) {
  if (n0 == 0.0) return 1.0;
  const complex chi = ScatteringModel(scheme).susceptibility(q, delta, 1.0);
  return std::exp(complex(0, 0.5) * chi * segment_column(cloud, n0, from, to));
}

complex ray_attenuation_to_infinity(const CloudConfig& cloud, const LevelScheme& scheme,
                                    double n0, const Vec3& from, const Vec3& dir, int q,
                                    double delta) {
  if (n0 == 0.0) return 1.0;
  const complex chi = ScatteringModel(scheme).susceptibility(q, delta, 1.0);
  return std::exp(complex(0, 0.5) * chi * halfline_column(cloud, n0, from, dir));
}

RayStep sample_ray_step(const CloudConfig& cloud, const Vec3& from, double s_min, Rng& rng) {
  RayStep step;
  step.direction = rng.isotropic_direction();
  const LineGaussian g = line_gaussian(cloud, from, step.direction);
  const double root_a = std::sqrt(g.a);
  const double alpha = (s_min - g.s_mid) * root_a;
  step.distance = g.s_mid + truncated_normal(alpha, rng) / root_a;
  step.position = from + step.distance * step.direction;
  step.column = std::exp(-0.5 * g.q_min) * std::sqrt(0.5 * kPi / g.a) *
                std::erfc(alpha / std::sqrt(2.0)) / cloud.volume();
  return step;
}

OpticalMedium::OpticalMedium(const CloudConfig& cloud, const ScatteringModel& model, double delta,
                             double n0, Options options)
    : cloud_(cloud), n0_(n0), options_(options) {
  for (int q = -1; q <= 1; ++q)
    chi_[static_cast<std::size_t>(q + 1)] = model.susceptibility(q, delta, 1.0);
  chi_mean_ = (chi_[0] + chi_[1] + chi_[2]) / 3.0;
}

complex OpticalMedium::external(const Vec3& r, int q) const {
  if (!options_.external || n0_ == 0.0) return 1.0;
  const double col = halfline_column(cloud_, n0_, r, Vec3(0, 0, -1));
  return std::exp(complex(0, 0.5) * chi(q) * col);
}

complex OpticalMedium::interatomic(const Vec3& a, const Vec3& b) const {
  if (!options_.interatomic || n0_ == 0.0) return 1.0;
  return std::exp(complex(0, 0.5) * chi_mean_ * segment_column(cloud_, n0_, a, b));
}

}  // namespace antiloc
