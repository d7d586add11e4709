#include <doctest.h>

#include "antiloc/atom.hpp"
#include "antiloc/errors.hpp"

using namespace antiloc;

namespace {

// 85Rb D2 spectroscopic constants in MHz
constexpr double kLinewidth = 6.0666;
constexpr double kSplit43 = 120.640;
constexpr double kSplit32 = 63.401;
constexpr double kSplit21 = 29.372;
constexpr double kGroundSplit = 3035.732439;

}  // namespace

TEST_CASE("85Rb level scheme structure") {
  const LevelScheme s = rb85_default();
  s.validate();
  CHECK(s.excited_levels.size() == 4);
  CHECK(s.ground_levels.size() == 2);
  CHECK(s.nuclear_spin == half(5));
  CHECK(s.Jg == half(1));
  CHECK(s.Je == half(3));
  CHECK(s.populated_ground == 3);
  CHECK(s.gamma == 1.0);
  CHECK(s.zeeman_ground_splitting == 0.1);
  CHECK(s.zeeman_quadratic == 0.0);
}

TEST_CASE("85Rb energies follow the spectroscopic splittings") {
  const LevelScheme s = rb85_default();
  CHECK(s.excited(4).energy == 0.0);
  CHECK(s.excited(3).energy - s.excited(4).energy ==
        doctest::Approx(-kSplit43 / kLinewidth).epsilon(1e-12));
  CHECK(s.excited(2).energy - s.excited(3).energy ==
        doctest::Approx(-kSplit32 / kLinewidth).epsilon(1e-12));
  CHECK(s.excited(1).energy - s.excited(2).energy ==
        doctest::Approx(-kSplit21 / kLinewidth).epsilon(1e-12));
  CHECK(s.excited(3).energy == doctest::Approx(-19.89).epsilon(1e-3));
  CHECK(s.excited(2).energy - s.excited(3).energy == doctest::Approx(-10.45).epsilon(1e-3));
  CHECK(s.excited(2).energy == doctest::Approx(-30.34).epsilon(1e-3));
  CHECK(s.excited(1).energy == doctest::Approx(-35.18).epsilon(1e-3));
  CHECK(s.ground(2).energy - s.ground(3).energy ==
        doctest::Approx(-kGroundSplit / kLinewidth).epsilon(1e-12));
}

TEST_CASE("detuning from individual lines") {
  const LevelScheme s = rb85_default();
  CHECK(detuning(s, 3, 4, 0.0) == 0.0);
  CHECK(detuning(s, 3, 3, s.excited(3).energy) == 0.0);
  CHECK(detuning(s, 3, 3, 0.0) == doctest::Approx(-s.excited(3).energy));
  // the other ground level is far off resonance
  CHECK(detuning(s, 2, 3, 0.0) == doctest::Approx(s.ground(2).energy - s.excited(3).energy));
  CHECK(detuning(s, 2, 3, 0.0) < -400.0);
}

TEST_CASE("resonance positions seen from the populated level") {
  const LevelScheme s = rb85_default();
  const auto r = resonance_positions(s);
  REQUIRE(r.size() == 3);  // Fe = 1 is dipole-forbidden from F0 = 3
  CHECK(r[0] == doctest::Approx(s.excited(2).energy));
  CHECK(r[1] == doctest::Approx(s.excited(3).energy));
  CHECK(r[2] == 0.0);
}

TEST_CASE("ground Zeeman energies") {
  LevelScheme s = rb85_default();
  CHECK(zeeman_energy(s, 3, -3) == 0.0);
  CHECK(zeeman_energy(s, 3, -1) == doctest::Approx(0.2));
  CHECK(zeeman_energy(s, 3, 3) == doctest::Approx(0.6));
  s.zeeman_quadratic = 0.01;
  CHECK(zeeman_energy(s, 3, -1) == doctest::Approx(0.2 + 0.04));
  // non-equidistant: two single steps no longer equal one double step
  CHECK(2 * zeeman_energy(s, 3, -2) != doctest::Approx(zeeman_energy(s, 3, -1)));
  CHECK_THROWS(zeeman_energy(s, 3, 4));
  CHECK_THROWS(zeeman_energy(s, 3, half(1)));
}

TEST_CASE("scalar dipole atom") {
  const LevelScheme s = scalar_dipole_atom();
  s.validate();
  CHECK(s.excited_levels.size() == 1);
  CHECK(s.populated_ground == 0);
  CHECK(resonance_positions(s) == std::vector<double>{0.0});
}

TEST_CASE("level lookup and validation errors") {
  const LevelScheme good = rb85_default();
  CHECK_THROWS_AS(good.ground(1), UnknownLevel);
  CHECK_THROWS_AS(good.excited(5), UnknownLevel);
  CHECK(good.has_excited(1));
  CHECK_FALSE(good.has_ground(4));

  LevelScheme s = good;
  s.excited_levels = {{4, 0.0}, {3, 1.0}, {2, -30.0}, {1, -35.0}};  // not ordered
  CHECK_THROWS_AS(s.validate(), ConfigError);

  s = good;
  s.excited_levels.push_back({5, -40.0});  // F = 5 impossible for J = 3/2, I = 5/2
  CHECK_THROWS_AS(s.validate(), ConfigError);

  s = good;
  s.gamma = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);

  s = good;
  s.zeeman_ground_splitting = -0.1;
  CHECK_THROWS_AS(s.validate(), ConfigError);

  s = good;
  s.populated_ground = 1;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}
