#include "antiloc/atom.hpp"

#include <algorithm>
#include <cmath>

#include "antiloc/errors.hpp"

namespace antiloc {

namespace {

// 85Rb D2 spectroscopic constants (MHz).
constexpr double kRb85LinewidthMHz = 6.0666;
constexpr double kRb85Excited43MHz = 120.640;
constexpr double kRb85Excited32MHz = 63.401;
constexpr double kRb85Excited21MHz = 29.372;
constexpr double kRb85GroundSplittingMHz = 3035.732439;

bool in_coupling_range(HalfInt F, HalfInt J, HalfInt I) {
  const int lo = std::abs(J.twice() - I.twice());
  const int hi = J.twice() + I.twice();
  return F.twice() >= lo && F.twice() <= hi && (F.twice() - lo) % 2 == 0;
}

template <class Levels>
const HyperfineLevel* find_level(const Levels& levels, HalfInt F) {
  auto it = std::find_if(levels.begin(), levels.end(),
                         [F](const HyperfineLevel& l) { return l.F == F; });
  return it == levels.end() ? nullptr : &*it;
}

void check_manifold(const std::vector<HyperfineLevel>& levels, HalfInt J, HalfInt I,
                    const char* what) {
  if (levels.empty()) throw ConfigError(std::string(what) + " manifold is empty");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!in_coupling_range(levels[i].F, J, I))
      throw ConfigError(std::string(what) + " level F=" + levels[i].F.str() +
                        " is not reachable by coupling J and I");
    for (std::size_t j = 0; j < i; ++j) {
      if (levels[i].F == levels[j].F)
        throw ConfigError(std::string(what) + " level F=" + levels[i].F.str() + " repeated");
    }
    if (i > 0 && !(levels[i].energy < levels[i - 1].energy))
      throw ConfigError(std::string(what) + " levels must be listed by strictly decreasing energy");
  }
}

}  // namespace

void LevelScheme::validate() const {
  if (nuclear_spin.twice() < 0 || Jg.twice() < 0 || Je.twice() < 0)
    throw ConfigError("angular momenta must be non-negative");
  check_manifold(ground_levels, Jg, nuclear_spin, "ground");
  check_manifold(excited_levels, Je, nuclear_spin, "excited");
  if (!has_ground(populated_ground))
    throw ConfigError("populated ground level F0=" + populated_ground.str() + " not in scheme");
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (zeeman_ground_splitting < 0.0) throw ConfigError("zeeman_ground_splitting must be >= 0");
}

const HyperfineLevel& LevelScheme::ground(HalfInt F) const {
  if (auto* l = find_level(ground_levels, F)) return *l;
  throw UnknownLevel("no ground level F=" + F.str());
}

const HyperfineLevel& LevelScheme::excited(HalfInt F) const {
  if (auto* l = find_level(excited_levels, F)) return *l;
  throw UnknownLevel("no excited level F=" + F.str());
}

bool LevelScheme::has_ground(HalfInt F) const { return find_level(ground_levels, F) != nullptr; }
bool LevelScheme::has_excited(HalfInt F) const {
  return find_level(excited_levels, F) != nullptr;
}

LevelScheme rb85_default() {
  LevelScheme s;
  s.name = "rb85";
  s.nuclear_spin = half(5);
  s.Jg = half(1);
  s.Je = half(3);
  const double e3 = -kRb85Excited43MHz / kRb85LinewidthMHz;
  const double e2 = e3 - kRb85Excited32MHz / kRb85LinewidthMHz;
  const double e1 = e2 - kRb85Excited21MHz / kRb85LinewidthMHz;
  s.excited_levels = {{4, 0.0}, {3, e3}, {2, e2}, {1, e1}};
  s.ground_levels = {{3, 0.0}, {2, -kRb85GroundSplittingMHz / kRb85LinewidthMHz}};
  s.populated_ground = 3;
  return s;
}

LevelScheme scalar_dipole_atom() {
  LevelScheme s;
  s.name = "scalar";
  s.nuclear_spin = 0;
  s.Jg = 0;
  s.Je = 1;
  s.excited_levels = {{1, 0.0}};
  s.ground_levels = {{0, 0.0}};
  s.populated_ground = 0;
  s.zeeman_ground_splitting = 0.0;
  return s;
}

double detuning(const LevelScheme& scheme, HalfInt F0, HalfInt Fe, double delta) {
  return delta - (scheme.excited(Fe).energy - scheme.ground(F0).energy);
}

double zeeman_energy(const LevelScheme& scheme, HalfInt F0, HalfInt m) {
  scheme.ground(F0);
  if (!valid_projection(F0, m))
    throw std::invalid_argument("m=" + m.str() + " is not a projection of F0=" + F0.str());
  const double steps = (m + F0).value();
  return scheme.zeeman_ground_splitting * steps + scheme.zeeman_quadratic * steps * steps;
}

std::vector<double> resonance_positions(const LevelScheme& scheme) {
  std::vector<double> out;
  const HalfInt F0 = scheme.populated_ground;
  for (const auto& e : scheme.excited_levels) {
    const int dF = e.F.twice() - F0.twice();
    if (dF < -2 || dF > 2) continue;
    if (e.F.twice() == 0 && F0.twice() == 0) continue;
    out.push_back(scheme.excited(e.F).energy - scheme.ground(F0).energy);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace antiloc
