#include "antiloc/beatspec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "antiloc/errors.hpp"

namespace antiloc {

namespace {

// Standard normal CDF at x / width; a step at 0 for width 0.
double normal_cdf(double x, double width) {
  if (width == 0.0) return x > 0.0 ? 1.0 : 0.0;
  return 0.5 * std::erfc(-x / (width * std::sqrt(2.0)));
}

// Edges of the trapezoid dual cells: node i owns [edge[i], edge[i+1]].
std::vector<double> cell_edges(std::span<const double> grid) {
  std::vector<double> e(grid.size() + 1);
  e.front() = grid.front();
  e.back() = grid.back();
  for (std::size_t i = 1; i < grid.size(); ++i) e[i] = 0.5 * (grid[i - 1] + grid[i]);
  return e;
}

void check_grid(std::span<const double> grid) {
  if (grid.size() < 2) throw std::invalid_argument("beat spectrum grid needs >= 2 points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("beat spectrum grid not sorted");
}

struct Component {
  double width;
  double weight;
};

// Cell averages of a Gaussian mixture centred on the carrier, so that the
// trapezoid integral over the grid is exact.
BeatSpectrum mixture(std::span<const Component> parts, double omega_R,
                     std::span<const double> grid) {
  check_grid(grid);
  BeatSpectrum out;
  out.omega_grid.assign(grid.begin(), grid.end());
  out.intensity.assign(grid.size(), 0.0);
  out.carrier = omega_R;
  const auto edges = cell_edges(grid);
  double total_w = 0.0, var = 0.0;
  for (const auto& c : parts) {
    total_w += c.weight;
    var += c.weight * c.width * c.width;
    double lo = normal_cdf(edges[0], c.width);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double hi = normal_cdf(edges[i + 1], c.width);
      // Upper-tail form keeps precision for cells right of the centre.
      const double mass = edges[i] >= 0.0 && c.width > 0.0
                              ? 0.5 * (std::erfc(edges[i] / (c.width * std::sqrt(2.0))) -
                                       std::erfc(edges[i + 1] / (c.width * std::sqrt(2.0))))
                              : hi - lo;
      out.intensity[i] += c.weight * mass / (edges[i + 1] - edges[i]);
      lo = hi;
    }
  }
  out.rms_width = total_w > 0.0 ? std::sqrt(var / total_w) : 0.0;
  return out;
}

}  // namespace

void VelocityModel::validate() const {
  if (!(v_rms >= 0.0)) throw ConfigError("v_rms must be non-negative");
}

double thermal_velocity_rms(double kelvin, double mass_amu, double wavelength_m,
                            double linewidth_hz) {
  constexpr double kBoltzmann = 1.380649e-23;
  constexpr double kAmu = 1.66053906660e-27;
  if (kelvin < 0.0) throw std::invalid_argument("temperature must be non-negative");
  const double v = std::sqrt(kBoltzmann * kelvin / (mass_amu * kAmu));
  const double k = 2.0 * kPi / wavelength_m;
  const double gamma = 2.0 * kPi * linewidth_hz;
  return v * k / gamma;
}

double rb85_velocity_rms(double kelvin) {
  return thermal_velocity_rms(kelvin, 84.911789738, 780.241209686e-9, 6.0666e6);
}

double BeatSpectrum::total() const {
  double s = 0.0;
  for (std::size_t i = 1; i < omega_grid.size(); ++i)
    s += 0.5 * (intensity[i] + intensity[i - 1]) * (omega_grid[i] - omega_grid[i - 1]);
  return s;
}

std::vector<double> linear_grid(double start, double stop, std::size_t steps) {
  if (steps < 2) throw ConfigError("grid needs at least 2 steps");
  if (!(start < stop)) throw ConfigError("grid start must be below stop");
  std::vector<double> g(steps);
  const double h = (stop - start) / static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) g[i] = start + h * static_cast<double>(i);
  g.back() = stop;
  return g;
}

double loop_rate_factor(const Vec3& u) {
  const Vec3 z = Vec3::UnitZ();
  return std::sqrt((z - u).squaredNorm() + (z + u).squaredNorm());
}

BeatSpectrum single_profile(const VelocityModel& v, double k_laser, double omega_R,
                            std::span<const double> grid, double weight) {
  v.validate();
  const Component c{2.0 * k_laser * v.v_rms, weight};
  return mixture(std::span<const Component>(&c, 1), omega_R, grid);
}

BeatSpectrum double_profile(const VelocityModel& v, double k_laser, double omega_R,
                            std::span<const PairGeometry> geometries,
                            std::span<const double> grid, double weight) {
  v.validate();
  if (geometries.empty()) throw std::invalid_argument("no pair geometries");
  std::vector<Component> parts;
  double total = 0.0;
  for (const auto& g : geometries) {
    parts.push_back({k_laser * v.v_rms * loop_rate_factor(g.direction.normalized()), g.weight});
    total += g.weight;
  }
  if (!(total > 0.0)) throw std::invalid_argument("pair geometry weights sum to zero");
  // Merge equal widths; the loop rate is often geometry independent.
  std::sort(parts.begin(), parts.end(),
            [](const Component& a, const Component& b) { return a.width < b.width; });
  std::vector<Component> merged;
  for (const auto& p : parts) {
    if (!merged.empty() && std::abs(p.width - merged.back().width) <= 1e-12 * p.width)
      merged.back().weight += p.weight;
    else
      merged.push_back(p);
  }
  for (auto& m : merged) m.weight *= weight / total;
  return mixture(merged, omega_R, grid);
}

std::vector<PairGeometry> sample_pair_geometries(const CloudConfig& cloud, std::size_t n,
                                                 double r_min, Rng& rng) {
  std::vector<PairGeometry> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 r1 = sample_position(cloud, rng);
    const RayStep step = sample_ray_step(cloud, r1, r_min, rng);
    out.push_back({step.direction, step.column});
  }
  return out;
}

double fwhm(const BeatSpectrum& s) {
  const auto& y = s.intensity;
  const auto& x = s.omega_grid;
  if (y.empty()) return 0.0;
  const std::size_t peak =
      static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  const double half = 0.5 * y[peak];
  if (!(half > 0.0)) return 0.0;
  const bool left_empty = peak == 0 || y[peak - 1] == 0.0;
  const bool right_empty = peak + 1 == y.size() || y[peak + 1] == 0.0;
  if (left_empty && right_empty) return 0.0;

  auto crossing = [&](std::size_t inside, std::size_t outside) {
    return x[inside] + (half - y[inside]) * (x[outside] - x[inside]) / (y[outside] - y[inside]);
  };
  std::size_t i = peak;
  while (i > 0 && y[i - 1] >= half) --i;
  const double left = i == 0 ? x.front() : crossing(i, i - 1);
  std::size_t j = peak;
  while (j + 1 < y.size() && y[j + 1] >= half) ++j;
  const double right = j + 1 == y.size() ? x.back() : crossing(j, j + 1);
  return right - left;
}

double sampled_rms_width(const BeatSpectrum& s) {
  double m0 = 0.0, m2 = 0.0;
  for (std::size_t i = 1; i < s.omega_grid.size(); ++i) {
    const double h = s.omega_grid[i] - s.omega_grid[i - 1];
    const double a = s.omega_grid[i - 1], b = s.omega_grid[i];
    m0 += 0.5 * h * (s.intensity[i - 1] + s.intensity[i]);
    m2 += 0.5 * h * (a * a * s.intensity[i - 1] + b * b * s.intensity[i]);
  }
  return m0 > 0.0 ? std::sqrt(m2 / m0) : 0.0;
}

Resolvability channel_resolvability(const BeatSpectrum& spectrum, double zeeman_beat) {
  Resolvability r;
  r.fwhm = fwhm(spectrum);
  if (!(zeeman_beat > 0.0)) {
    r.margin = std::numeric_limits<double>::infinity();
    return r;
  }
  r.margin = r.fwhm / zeeman_beat;
  r.resolvable = r.fwhm < zeeman_beat / 3.0;
  return r;
}

}  // namespace antiloc
