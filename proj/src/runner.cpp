#include "antiloc/runner.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <locale>
#include <sstream>
#include <vector>

#include "antiloc/angmom.hpp"
#include "antiloc/errors.hpp"

namespace antiloc {

namespace {

namespace fs = std::filesystem;

fs::path resolve(const RunOptions& opt, const std::string& path) {
  fs::path p(path);
  if (!opt.out_dir.empty() && p.is_relative()) p = fs::path(opt.out_dir) / p;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << content;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string header_comment(const char* kind, std::uint64_t hash, std::uint64_t seed) {
  return std::string("# cbs_antiloc ") + kind + " config_hash=" + hash_hex(hash) +
         " seed=" + std::to_string(seed) + "\n";
}

McSettings settings_for(const RunConfig& c, const RunOptions& opt) {
  McSettings s;
  s.n_samples = c.n_samples;
  s.n_max_order = c.n_max_order;
  s.seed = c.seed;
  s.threads = opt.threads;
  s.options = c.options;
  return s;
}

void apply(RunConfig& c, const RunOptions& opt) {
  if (opt.seed) c.seed = *opt.seed;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  const auto r = std::to_chars(buf, buf + sizeof buf, h, 16);
  std::string s(buf, r.ptr);
  return std::string(16 - s.size(), '0') + s;
}

void write_spectrum_csv(std::ostream& os, std::span<const SpectrumRecord> records,
                        std::uint64_t config_hash, std::uint64_t seed) {
  std::string out = header_comment("spectrum", config_hash, seed);
  out +=
      "delta_gamma,sigma_single,sigma_ladder,sigma_interf,X_EF,R2,stderr_X_EF,stderr_R2,"
      "resampled_paths\n";
  for (const auto& r : records) {
    for (double v : {r.delta, r.sigma_single, r.sigma_ladder, r.sigma_interf, r.X_EF, r.R2,
                     r.stderr_X_EF, r.stderr_R2}) {
      out += format_double(v);
      out += ',';
    }
    out += std::to_string(r.resampled_paths);
    out += '\n';
  }
  os << out;
}

void write_beat_csv(std::ostream& os, const BeatSpectrum& single, const BeatSpectrum& pair,
                    std::uint64_t config_hash, std::uint64_t seed) {
  std::string out = header_comment("beatspec", config_hash, seed);
  out += "omega_offset_gamma,I1,I2\n";
  for (std::size_t i = 0; i < single.omega_grid.size(); ++i) {
    out += format_double(single.omega_grid[i]) + ',' + format_double(single.intensity[i]) + ',' +
           format_double(pair.intensity[i]) + '\n';
  }
  os << out;
}

int run_spectrum(RunConfig config, const RunOptions& options, std::ostream& log) {
  apply(config, options);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<SpectrumRecord> records;
  try {
    const auto deltas = config.delta_grid.values();
    records = mc_spectrum(config.channel, config.scheme, config.cloud, deltas,
                          settings_for(config, options));
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const ZeroCrossSection& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  const auto csv = resolve(options, config.outputs.csv_path);
  {
    std::ofstream f(csv, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + csv.string());
    write_spectrum_csv(f, records, config.hash(), config.seed);
  }
  log << "wrote " << csv.string() << " (" << records.size() << " detunings, "
      << format_double(seconds_since(t0)) << " s)\n";
  if (!config.outputs.plot_path.empty()) {
    const auto svg = resolve(options, config.outputs.plot_path);
    write_file(svg, spectrum_svg(records, resonance_positions(config.scheme), config.hash(),
                                 config.seed));
    log << "wrote " << svg.string() << '\n';
  }

  const XefMinimum m = xef_minimum(records);
  log << "min X_EF - 1 = " << format_double(m.xef - 1.0) << " at delta = " << format_double(m.delta)
      << '\n';

  for (const auto& r : records)
    if (!r.invariants_hold()) {
      log << "invariant violated at delta = " << format_double(r.delta) << '\n';
      return kExitInvariantViolation;
    }
  return kExitOk;
}

int run_beatspec(RunConfig config, const RunOptions& options, std::ostream& log) {
  apply(config, options);
  BeatSpectrum single, pair;
  double beat = 0.0;
  try {
    const auto grid = config.beat.grid.values();
    const HalfInt F0 = config.scheme.populated_ground;
    beat = zeeman_energy(config.scheme, F0, config.channel.final_m);
    single = single_profile(config.beat.velocity, config.beat.k_laser, beat, grid);
    Rng rng({config.seed, 0x6265617473706563ULL});
    const auto geometries = sample_pair_geometries(config.cloud, config.beat.geometry_samples,
                                                   config.options.r_min, rng);
    pair = double_profile(config.beat.velocity, config.beat.k_laser, beat, geometries, grid);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  const auto csv = resolve(options, config.outputs.beat_csv_path);
  {
    std::ofstream f(csv, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + csv.string());
    write_beat_csv(f, single, pair, config.hash(), config.seed);
  }
  log << "wrote " << csv.string() << '\n';
  log << "carrier = " << format_double(beat) << " gamma, v_rms = "
      << format_double(config.beat.velocity.v_rms) << " gamma/k\n";
  for (const auto* s : {&single, &pair}) {
    const Resolvability r = channel_resolvability(*s, beat);
    log << (s == &single ? "I1" : "I2") << ": rms width " << format_double(s->rms_width)
        << ", FWHM " << format_double(r.fwhm) << ", FWHM/beat " << format_double(r.margin)
        << (r.resolvable ? " (resolvable)" : " (not resolvable)") << '\n';
  }

  for (const auto* s : {&single, &pair})
    for (double v : s->intensity)
      if (!(v >= 0.0)) {
        log << "invariant violated: negative or NaN intensity\n";
        return kExitInvariantViolation;
      }
  return kExitOk;
}

namespace {

std::string percent(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::fixed << std::setprecision(2) << 100.0 * x << '%';
  return os.str();
}

}  // namespace

int run_quadrature_check(RunConfig config, const RunOptions& options, std::ostream& log) {
  apply(config, options);
  constexpr double kTolerance = 0.02;
  bool ok = true;
  try {
    const ScatteringModel model(config.scheme);
    McSettings s = settings_for(config, options);
    s.n_max_order = 2;
    const auto mc = mc_spectrum(config.channel, config.scheme, config.cloud, config.check_deltas, s);
    for (std::size_t i = 0; i < mc.size(); ++i) {
      const CbsEvaluator ev(model, config.cloud, config.channel, config.check_deltas[i],
                            config.options);
      const QuadratureResult q = quadrature_order2(ev);
      const double dl = std::abs(mc[i].ladder_by_order[2] / q.sigma_ladder - 1.0);
      const double di = std::abs(mc[i].interf_by_order[2] / q.sigma_interf - 1.0);
      const bool pass = dl <= kTolerance && di <= kTolerance;
      ok = ok && pass;
      const double el = mc[i].stderr_ladder_by_order[2] / std::abs(mc[i].ladder_by_order[2]);
      const double ei = mc[i].stderr_interf_by_order[2] / std::abs(mc[i].interf_by_order[2]);
      log << (pass ? "PASS" : "FAIL") << " delta=" << format_double(config.check_deltas[i])
          << " ladder mc=" << format_double(mc[i].ladder_by_order[2])
          << " quad=" << format_double(q.sigma_ladder) << " dev=" << percent(dl)
          << " mc_stderr=" << percent(el) << " interf mc=" << format_double(mc[i].interf_by_order[2])
          << " quad=" << format_double(q.sigma_interf) << " dev=" << percent(di)
          << " mc_stderr=" << percent(ei) << '\n';
    }
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return ok ? kExitOk : kExitFailure;
}

// --- oracle suite -------------------------------------------------------------

namespace {

struct Oracle {
  const char* name;
  std::function<std::string(bool&)> run;  // sets pass, returns a detail line
};

std::string reciprocity_paths(const OracleOptions& o, bool& pass) {
  const LevelScheme scheme = scalar_dipole_atom();
  const CloudConfig cloud = CloudConfig::sphere(50.0);
  CbsOptions opt;
  opt.flip_outgoing_phase = o.corrupt_propagator;
  const ScatteringModel model(scheme);
  const CbsEvaluator ev(model, cloud, ChannelSpec::helicity_preserving(scheme), -1.3, opt);
  Rng rng({7, 1});
  double worst = 0.0;
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int order = 2 + trial % 4;
    std::vector<Vec3> atoms;
    while (static_cast<int>(atoms.size()) < order) {
      const Vec3 r = sample_position(cloud, rng);
      bool clash = false;
      for (const auto& a : atoms) clash = clash || (r - a).norm() < opt.r_min;
      if (!clash) atoms.push_back(r);
    }
    const Routing routing(static_cast<std::size_t>(order), 0);
    const complex ad = ev.path_amplitude(atoms, routing, false);
    const complex ar = ev.path_amplitude(atoms, routing, true);
    worst = std::max(worst, std::abs(ad - ar) / ev.path_amplitude_bound(atoms, routing));
    ++checked;
  }
  pass = worst <= 1e-12;
  return std::to_string(checked) + " chains, max |A_d - A_r|/bound = " + format_double(worst);
}

std::string reciprocity_enhancement(const OracleOptions& o, bool& pass) {
  const LevelScheme scheme = scalar_dipole_atom();
  McSettings s;
  s.n_samples = 20000;
  s.n_max_order = 2;
  s.seed = 11;
  s.threads = o.threads;
  s.options.flip_outgoing_phase = o.corrupt_propagator;
  const double deltas[] = {-0.7};
  const auto rec = mc_spectrum(ChannelSpec::helicity_preserving(scheme), scheme,
                               CloudConfig::sphere(200.0), deltas, s);
  const double ratio = 1.0 + rec[0].R2;
  const double err = rec[0].stderr_R2;
  pass = std::abs(ratio - 2.0) <= std::max(3.0 * err, 1e-12);
  return "(L+I)/L = " + format_double(ratio) + " +- " + format_double(err);
}

std::string quadrature(const OracleOptions& o, bool& pass) {
  const LevelScheme scheme = rb85_default();
  const CloudConfig cloud = CloudConfig::sphere(300.0);
  const ChannelSpec ch = ChannelSpec::helicity_preserving(scheme);
  CbsOptions opt;
  opt.flip_outgoing_phase = o.corrupt_propagator;
  McSettings s;
  s.n_samples = 40000;
  s.n_max_order = 2;
  s.seed = 5;
  s.threads = o.threads;
  s.options = opt;
  const double deltas[] = {-10.0};
  const auto rec = mc_spectrum(ch, scheme, cloud, deltas, s);
  const CbsEvaluator ev(ScatteringModel(scheme), cloud, ch, deltas[0], opt);
  QuadratureNodes nodes;
  nodes.radial = 16;
  nodes.axial = 24;
  nodes.distance = 20;
  nodes.polar = 16;
  nodes.azimuth = 12;
  const QuadratureResult q = quadrature_order2(ev, nodes);
  const double l = rec[0].ladder_by_order[2], i = rec[0].interf_by_order[2];
  const double el = rec[0].stderr_ladder_by_order[2], ei = rec[0].stderr_interf_by_order[2];
  pass = std::abs(l - q.sigma_ladder) <= std::max(0.03 * std::abs(q.sigma_ladder), 3 * el) &&
         std::abs(i - q.sigma_interf) <= std::max(0.03 * std::abs(q.sigma_interf), 3 * ei);
  return "ladder mc/quad = " + format_double(l / q.sigma_ladder) +
         ", interf mc/quad = " + format_double(i / q.sigma_interf);
}

std::string identities(bool& pass) {
  using namespace angmom;
  double worst = 0.0;
  // 3j orthogonality
  const HalfInt j1 = 2, j2 = half(3), j3 = half(7);
  for (HalfInt m3 = -j3; m3 <= j3; m3 += 1) {
    double s = 0.0;
    for (HalfInt m1 = -j1; m1 <= j1; m1 += 1) {
      const HalfInt m2 = -m1 - m3;
      if (!valid_projection(j2, m2)) continue;
      const double w = wigner3j(j1, j2, j3, m1, m2, m3);
      s += (j3.twice() + 1) * w * w;
    }
    worst = std::max(worst, std::abs(s - 1.0));
  }
  // 6j orthogonality: sum_x (2x+1)(2f+1){a b x; c d f}{a b x; c d f'} = delta_ff'
  const HalfInt a = half(3), b = 2, c = half(5), d = half(3);
  for (HalfInt f = 0; f <= 5; f += 1)
    for (HalfInt g = 0; g <= 5; g += 1) {
      if (!triangle(a, d, f) || !triangle(c, b, f) || !triangle(a, d, g) || !triangle(c, b, g))
        continue;
      double s = 0.0;
      for (HalfInt x = 0; x <= 6; x += 1)
        s += (x.twice() + 1) * (f.twice() + 1) * wigner6j(a, b, x, c, d, f) *
             wigner6j(a, b, x, c, d, g);
      worst = std::max(worst, std::abs(s - (f == g ? 1.0 : 0.0)));
    }
  // dipole sum rule over all excited states and polarizations
  const LevelScheme rb = rb85_default();
  const HalfInt F0 = 3;
  double first = -1.0;
  for (HalfInt m0 = -F0; m0 <= F0; m0 += 1) {
    double s = 0.0;
    for (const auto& e : rb.excited_levels)
      for (int q = -1; q <= 1; ++q) {
        const double v = dipole_element(F0, m0, q, e.F, m0 + HalfInt(q), rb);
        s += v * v;
      }
    if (first < 0.0) first = s;
    worst = std::max(worst, std::abs(s - first));
  }
  pass = worst <= 1e-12;
  return "max identity residual " + format_double(worst);
}

std::string cauchy_schwarz(const OracleOptions& o, bool& pass) {
  const LevelScheme scheme = rb85_default();
  const ScatteringModel model(scheme);
  const CloudConfig cloud = CloudConfig::sphere(100.0);
  CbsOptions opt;
  opt.flip_outgoing_phase = o.corrupt_propagator;
  Rng rng({3, 3});
  int violations = 0;
  for (int k = 0; k < 20; ++k) {
    const double delta = -36.0 + 42.0 * rng.uniform();
    const ChannelSpec ch = ChannelSpec::helicity_preserving(
        scheme, k % 2 ? DiagramSet::Full : DiagramSet::SigmaOnly);
    const CbsEvaluator ev(model, cloud, ch, delta, opt);
    for (int p = 0; p < 100; ++p) {
      const Vec3 r1 = sample_position(cloud, rng);
      const Vec3 r2 = r1 + (1.0 + 50.0 * rng.uniform()) * rng.isotropic_direction();
      const PairTerms t = ev.pair_contribution(r1, r2);
      if (!(t.ladder >= 0.0) || std::abs(t.interf) > t.ladder * (1.0 + 1e-12)) ++violations;
    }
  }
  pass = violations == 0;
  return std::to_string(violations) + " violations in 2000 pairs";
}

}  // namespace

int run_oracles(const OracleOptions& options, std::ostream& out) {
  const std::vector<Oracle> oracles = {
      {"reciprocity-paths", [&](bool& p) { return reciprocity_paths(options, p); }},
      {"reciprocity-enhancement", [&](bool& p) { return reciprocity_enhancement(options, p); }},
      {"quadrature-order2", [&](bool& p) { return quadrature(options, p); }},
      {"angular-identities", [&](bool& p) { return identities(p); }},
      {"cauchy-schwarz", [&](bool& p) { return cauchy_schwarz(options, p); }},
  };
  bool all = true;
  for (const auto& o : oracles) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
      detail = o.run(pass);
    } catch (const std::exception& e) {
      pass = false;
      detail = std::string("exception: ") + e.what();
    }
    all = all && pass;
    out << (pass ? "PASS " : "FAIL ") << o.name << ": " << detail << " ["
        << format_double(std::round(seconds_since(t0) * 100) / 100) << " s]\n";
  }
  return all ? kExitOk : kExitFailure;
}

}  // namespace antiloc
