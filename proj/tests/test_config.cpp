#include <doctest.h>

#include <string>

#include "antiloc/config.hpp"
#include "antiloc/errors.hpp"

using namespace antiloc;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

}  // namespace

TEST_CASE("defaults with only a seed") {
  const RunConfig c = parse_config(R"({"seed": 5})");
  CHECK(c.seed == 5);
  CHECK(c.scheme.name == "rb85");
  CHECK(c.cloud.is_spherical());
  CHECK(c.cloud.target_b == 1.0);
  CHECK(c.channel.final_m == HalfInt(-1));
  CHECK(c.channel.diagram_set == DiagramSet::SigmaOnly);
  CHECK(c.delta_grid.values().size() == 161);
  CHECK(c.delta_grid.values().front() == -36.0);
  CHECK(c.delta_grid.values().back() == 6.0);
  CHECK(c.n_max_order == 2);
  CHECK(c.options.external_attenuation);
  CHECK(c.outputs.csv_path == "spectrum.csv");
  CHECK(c.outputs.plot_path.empty());
}

TEST_CASE("full configuration") {
  const RunConfig c = parse_config(R"({
    "scheme": {"preset": "rb85", "zeeman_ground_splitting": 0.2, "zeeman_quadratic": 0.01},
    "cloud": {"shape": "cigar", "radial": 300, "axial": 900, "b": 2.5},
    "channel": {"pol_in": -1, "pol_out": -1, "final_m": 1, "diagram_set": "full"},
    "delta_grid": {"start": -20, "stop": 0, "steps": 11},
    "check_deltas": [-1, -2],
    "n_samples": 1234, "n_max_order": 5, "seed": 9,
    "options": {"ideal": true, "r_min": 1.5, "enumerate_max_order": 2},
    "beatspec": {"temperature_uK": 50, "grid": {"start": -1, "stop": 1, "steps": 21},
                 "geometry_samples": 10},
    "outputs": {"csv_path": "a.csv", "plot_path": "a.svg", "beat_csv_path": "b.csv"}
  })");
  CHECK(c.scheme.zeeman_ground_splitting == 0.2);
  CHECK(c.scheme.zeeman_quadratic == 0.01);
  CHECK(c.cloud.sigma_z == 900.0);
  CHECK(c.cloud.sigma_x == 300.0);
  CHECK(c.cloud.target_b == 2.5);
  CHECK(c.channel.pol_in == -1);
  CHECK(c.channel.final_m == HalfInt(1));
  CHECK(c.channel.diagram_set == DiagramSet::Full);
  CHECK(c.delta_grid.values()[1] == doctest::Approx(-18.0));
  CHECK(c.check_deltas == std::vector<double>{-1, -2});
  CHECK(c.n_samples == 1234);
  CHECK(c.n_max_order == 5);
  CHECK_FALSE(c.options.external_attenuation);
  CHECK_FALSE(c.options.interatomic_attenuation);
  CHECK(c.options.r_min == 1.5);
  CHECK(c.options.enumerate_max_order == 2);
  CHECK(c.beat.velocity.v_rms == doctest::Approx(rb85_velocity_rms(50e-6)));
  CHECK(c.beat.grid.steps == 21);
  CHECK(c.beat.geometry_samples == 10);
  CHECK(c.outputs.plot_path == "a.svg");

  const RunConfig s = parse_config(R"({"seed": 1, "scheme": {"preset": "scalar"},
    "cloud": {"shape": "gaussian", "sigma_x": 10, "sigma_y": 20, "sigma_z": 30}})");
  CHECK(s.scheme.excited_levels.size() == 1);
  CHECK(s.channel.final_m == HalfInt(0));
  CHECK(s.cloud.sigma_y == 20.0);
}

TEST_CASE("syntax errors report line and column") {
  const std::string e = error_of("{\n  \"seed\": 1,\n  \"n_samples\": ,\n}");
  CHECK(contains(e, "cfg.json:3:16:"));
  CHECK(contains(e, "syntax error"));
  CHECK(contains(error_of("{\"seed\": 1"), "cfg.json:1:"));
}

TEST_CASE("semantic errors") {
  CHECK(contains(error_of("{}"), "seed: is required"));
  CHECK(contains(error_of(R"({"seed": 1, "colud": {}})"), "unknown key 'colud'"));
  CHECK(contains(error_of(R"({"seed": 1, "cloud": {"radius": 10, "sigma": 1}})"),
                 "unknown key 'sigma'"));
  CHECK(contains(error_of(R"({"seed": -1})"), "non-negative integer"));
  CHECK(contains(error_of(R"({"seed": 1, "n_samples": 0})"), "n_samples"));
  CHECK(contains(error_of(R"({"seed": 1, "n_max_order": 13})"), "1..12"));
  CHECK(contains(error_of(R"({"seed": 1, "cloud": {"shape": "cube"}})"), "unknown shape"));
  CHECK(contains(error_of(R"({"seed": 1, "cloud": {"radius": -3}})"), "cloud"));
  CHECK(contains(error_of(R"({"seed": 1, "scheme": {"preset": "na23"}})"), "unknown preset"));
  CHECK(contains(error_of(R"({"seed": 1, "channel": {"final_m": 0.3}})"), "multiple of 1/2"));
  CHECK(contains(error_of(R"({"seed": 1, "channel": {"final_m": 5}})"), "not a sublevel"));
  CHECK(contains(error_of(R"({"seed": 1, "channel": {"diagram_set": "most"}})"), "diagram_set"));
  CHECK(contains(error_of(R"({"seed": 1, "delta_grid": {"start": 1, "stop": 0, "steps": 3}})"),
                 "start must be below stop"));
  CHECK(contains(error_of(R"({"seed": 1, "check_deltas": []})"), "non-empty"));
  CHECK(contains(error_of(R"({"seed": 1, "options": {"r_min": 0}})"), "r_min"));
  CHECK(contains(error_of(R"({"seed": 1, "beatspec": {"v_rms": 0.1, "temperature_uK": 5}})"),
                 "not both"));
  CHECK(contains(error_of(R"({"seed": 1, "scheme": {"preset": "scalar"},
                             "beatspec": {"temperature_uK": 5}})"),
                 "only available for rb85"));
  CHECK(contains(error_of(R"({"seed": 1, "n_samples": "many"})"), "n_samples"));
  CHECK(contains(error_of("[1, 2]"), "expected an object"));
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("configuration hash") {
  const RunConfig a = parse_config(R"({"seed": 1, "n_samples": 10, "cloud": {"radius": 50}})");
  const RunConfig b = parse_config("{\"cloud\":{\"radius\":50},\n \"n_samples\":10, \"seed\":1}");
  const RunConfig c = parse_config(R"({"seed": 2, "n_samples": 10, "cloud": {"radius": 50}})");
  const RunConfig d = parse_config(R"({"seed": 1, "n_samples": 11, "cloud": {"radius": 50}})");
  CHECK(a.hash() == b.hash());
  CHECK(a.canonical == c.canonical);
  CHECK(a.hash() != c.hash());
  CHECK(a.hash() != d.hash());
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}
