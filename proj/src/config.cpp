#include "antiloc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "antiloc/errors.hpp"

namespace antiloc {

namespace {

using json = nlohmann::json;

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& where, const std::string& what) const {
    throw ConfigError(origin_ + ": " + where + ": " + what);
  }

  void only_keys(const json& obj, const std::string& where,
                 std::initializer_list<std::string_view> keys) const {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& [k, v] : obj.items())
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail(where, "unknown key '" + k + "'");
  }

  double number(const json& obj, const std::string& where, const char* key, double fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(where + "." + key, "must be finite");
    return x;
  }

  std::uint64_t count(const json& obj, const std::string& where, const char* key,
                      std::uint64_t fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
      fail(where + "." + key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  int integer(const json& obj, const std::string& where, const char* key, int fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
    return v.get<int>();
  }

  bool boolean(const json& obj, const std::string& where, const char* key, bool fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(where + "." + key, "expected true or false");
    return v.get<bool>();
  }

  std::string string(const json& obj, const std::string& where, const char* key,
                     std::string fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(where + "." + key, "expected a string");
    return v.get<std::string>();
  }

  GridSpec grid(const json& obj, const std::string& where, GridSpec g) const {
    only_keys(obj, where, {"start", "stop", "steps"});
    g.start = number(obj, where, "start", g.start);
    g.stop = number(obj, where, "stop", g.stop);
    g.steps = count(obj, where, "steps", g.steps);
    if (g.steps < 2) fail(where + ".steps", "must be >= 2");
    if (!(g.start < g.stop)) fail(where, "start must be below stop");
    return g;
  }

 private:
  std::string origin_;
};

LevelScheme read_scheme(const Reader& rd, const json& j) {
  rd.only_keys(j, "scheme", {"preset", "zeeman_ground_splitting", "zeeman_quadratic"});
  const std::string preset = rd.string(j, "scheme", "preset", "rb85");
  LevelScheme s;
  if (preset == "rb85")
    s = rb85_default();
  else if (preset == "scalar")
    s = scalar_dipole_atom();
  else
    rd.fail("scheme.preset", "unknown preset '" + preset + "' (rb85, scalar)");
  s.zeeman_ground_splitting =
      rd.number(j, "scheme", "zeeman_ground_splitting", s.zeeman_ground_splitting);
  s.zeeman_quadratic = rd.number(j, "scheme", "zeeman_quadratic", s.zeeman_quadratic);
  try {
    s.validate();
  } catch (const ConfigError& e) {
    rd.fail("scheme", e.what());
  }
  return s;
}

CloudConfig read_cloud(const Reader& rd, const json& j) {
  rd.only_keys(j, "cloud", {"shape", "radius", "radial", "axial", "sigma_x", "sigma_y", "sigma_z", "b"});
  const std::string shape = rd.string(j, "cloud", "shape", "sphere");
  const double b = rd.number(j, "cloud", "b", 1.0);
  CloudConfig c;
  if (shape == "sphere") {
    c = CloudConfig::sphere(rd.number(j, "cloud", "radius", 1000.0), b);
  } else if (shape == "cigar") {
    c = CloudConfig::cigar(rd.number(j, "cloud", "radial", 1000.0),
                           rd.number(j, "cloud", "axial", 3000.0), b);
  } else if (shape == "gaussian") {
    c.sigma_x = rd.number(j, "cloud", "sigma_x", c.sigma_x);
    c.sigma_y = rd.number(j, "cloud", "sigma_y", c.sigma_y);
    c.sigma_z = rd.number(j, "cloud", "sigma_z", c.sigma_z);
    c.target_b = b;
  } else {
    rd.fail("cloud.shape", "unknown shape '" + shape + "' (sphere, cigar, gaussian)");
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    rd.fail("cloud", e.what());
  }
  return c;
}

ChannelSpec read_channel(const Reader& rd, const json& j, const LevelScheme& scheme) {
  rd.only_keys(j, "channel", {"pol_in", "pol_out", "final_m", "diagram_set"});
  const std::string set = rd.string(j, "channel", "diagram_set", "sigma_only");
  DiagramSet ds = DiagramSet::SigmaOnly;
  if (set == "full")
    ds = DiagramSet::Full;
  else if (set != "sigma_only")
    rd.fail("channel.diagram_set", "expected 'sigma_only' or 'full'");
  ChannelSpec c = ChannelSpec::helicity_preserving(scheme, ds);
  c.pol_in = rd.integer(j, "channel", "pol_in", c.pol_in);
  c.pol_out = rd.integer(j, "channel", "pol_out", c.pol_out);
  if (j.contains("final_m")) {
    const double m = rd.number(j, "channel", "final_m", 0.0);
    const double twice = 2.0 * m;
    if (twice != std::round(twice)) rd.fail("channel.final_m", "must be a multiple of 1/2");
    c.final_m = HalfInt::from_twice(static_cast<int>(twice));
  }
  try {
    c.validate(scheme);
  } catch (const ConfigError& e) {
    rd.fail("channel", e.what());
  }
  return c;
}

CbsOptions read_options(const Reader& rd, const json& j) {
  rd.only_keys(j, "options", {"ideal", "external_attenuation", "interatomic_attenuation", "r_min",
                              "enumerate_max_order"});
  CbsOptions o = rd.boolean(j, "options", "ideal", false) ? CbsOptions::ideal() : CbsOptions{};
  o.external_attenuation = rd.boolean(j, "options", "external_attenuation", o.external_attenuation);
  o.interatomic_attenuation =
      rd.boolean(j, "options", "interatomic_attenuation", o.interatomic_attenuation);
  o.r_min = rd.number(j, "options", "r_min", o.r_min);
  o.enumerate_max_order = rd.integer(j, "options", "enumerate_max_order", o.enumerate_max_order);
  if (!(o.r_min > 0.0)) rd.fail("options.r_min", "must be positive");
  if (o.enumerate_max_order < 1) rd.fail("options.enumerate_max_order", "must be >= 1");
  return o;
}

BeatConfig read_beat(const Reader& rd, const json& j, const LevelScheme& scheme) {
  rd.only_keys(j, "beatspec", {"v_rms", "temperature_uK", "k_laser", "grid", "geometry_samples"});
  BeatConfig b;
  if (j.contains("v_rms") && j.contains("temperature_uK"))
    rd.fail("beatspec", "give either v_rms or temperature_uK, not both");
  if (j.contains("temperature_uK")) {
    if (scheme.name != "rb85") rd.fail("beatspec.temperature_uK", "only available for rb85");
    const double t = rd.number(j, "beatspec", "temperature_uK", 0.0);
    if (t < 0.0) rd.fail("beatspec.temperature_uK", "must be non-negative");
    b.velocity.v_rms = rb85_velocity_rms(t * 1e-6);
  }
  b.velocity.v_rms = rd.number(j, "beatspec", "v_rms", b.velocity.v_rms);
  if (b.velocity.v_rms < 0.0) rd.fail("beatspec.v_rms", "must be non-negative");
  b.k_laser = rd.number(j, "beatspec", "k_laser", b.k_laser);
  if (!(b.k_laser > 0.0)) rd.fail("beatspec.k_laser", "must be positive");
  if (j.contains("grid")) b.grid = rd.grid(j.at("grid"), "beatspec.grid", b.grid);
  b.geometry_samples = rd.count(j, "beatspec", "geometry_samples", b.geometry_samples);
  if (b.geometry_samples < 1) rd.fail("beatspec.geometry_samples", "must be >= 1");
  return b;
}

OutputPaths read_outputs(const Reader& rd, const json& j) {
  rd.only_keys(j, "outputs", {"csv_path", "plot_path", "beat_csv_path"});
  OutputPaths o;
  o.csv_path = rd.string(j, "outputs", "csv_path", o.csv_path);
  o.plot_path = rd.string(j, "outputs", "plot_path", o.plot_path);
  o.beat_csv_path = rd.string(j, "outputs", "beat_csv_path", o.beat_csv_path);
  if (o.csv_path.empty()) rd.fail("outputs.csv_path", "must not be empty");
  if (o.beat_csv_path.empty()) rd.fail("outputs.beat_csv_path", "must not be empty");
  return o;
}

// Line and column (1-based) of a byte offset.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t RunConfig::hash() const {
  return fnv1a(canonical + "\nseed=" + std::to_string(seed));
}

RunConfig parse_config(std::string_view text, std::string_view origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte is one past the offending character
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    if (const auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ConfigError(std::string(origin) + ":" + std::to_string(line) + ":" +
                      std::to_string(col) + ": " + msg);
  }

  const Reader rd{std::string(origin)};
  rd.only_keys(j, "top level",
               {"scheme", "cloud", "channel", "delta_grid", "check_deltas", "n_samples",
                "n_max_order", "seed", "options", "beatspec", "outputs"});
  if (!j.contains("seed")) rd.fail("seed", "is required");

  const json empty = json::object();
  auto section = [&](const char* key) -> const json& { return j.contains(key) ? j.at(key) : empty; };

  RunConfig c;
  c.scheme = read_scheme(rd, section("scheme"));
  c.cloud = read_cloud(rd, section("cloud"));
  c.channel = read_channel(rd, section("channel"), c.scheme);
  if (j.contains("delta_grid")) c.delta_grid = rd.grid(j.at("delta_grid"), "delta_grid", c.delta_grid);
  if (j.contains("check_deltas")) {
    const json& d = j.at("check_deltas");
    if (!d.is_array() || d.empty()) rd.fail("check_deltas", "expected a non-empty array");
    c.check_deltas.clear();
    for (const auto& x : d) {
      if (!x.is_number()) rd.fail("check_deltas", "expected numbers");
      c.check_deltas.push_back(x.get<double>());
    }
  }
  c.n_samples = rd.count(j, "top level", "n_samples", c.n_samples);
  if (c.n_samples < 1) rd.fail("n_samples", "must be >= 1");
  c.n_max_order = rd.integer(j, "top level", "n_max_order", c.n_max_order);
  if (c.n_max_order < 1 || c.n_max_order > 12) rd.fail("n_max_order", "must be in 1..12");
  c.seed = rd.count(j, "top level", "seed", 0);
  c.options = read_options(rd, section("options"));
  c.beat = read_beat(rd, section("beatspec"), c.scheme);
  c.outputs = read_outputs(rd, section("outputs"));

  json canon = j;
  canon.erase("seed");
  c.canonical = canon.dump();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace antiloc
