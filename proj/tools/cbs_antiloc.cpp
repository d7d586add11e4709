#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "antiloc/config.hpp"
#include "antiloc/errors.hpp"
#include "antiloc/runner.hpp"

namespace {

// --threads, falling back to CBS_ANTILOC_THREADS, then to all cores.
unsigned thread_count(const std::optional<unsigned>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CBS_ANTILOC_THREADS")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      std::cerr << "ignoring malformed CBS_ANTILOC_THREADS='" << env << "'\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent backscattering from an oriented multilevel atomic gas"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out_dir;
  bool corrupt = false;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config_path, "run configuration (JSON)");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the configured seed");
    sub->add_option("--threads", threads, "worker threads, 0 = all cores");
    sub->add_option("--out", out_dir, "directory for relative output paths");
  };

  auto* spectrum = app.add_subcommand("spectrum", "Monte-Carlo enhancement-factor scan");
  add_common(spectrum, true);
  auto* beat = app.add_subcommand("beatspec", "Doppler-broadened beat-note spectra");
  add_common(beat, true);
  auto* oracles = app.add_subcommand("oracles", "fast self-check suite");
  oracles->add_option("--threads", threads, "worker threads, 0 = all cores");
  oracles->add_flag("--corrupt-propagator", corrupt,
                    "run with a deliberately wrong outgoing phase (must fail)");
  auto* quad = app.add_subcommand("quadrature-check", "order-2 Monte Carlo against quadrature");
  add_common(quad, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : antiloc::kExitConfigError;
  }

  antiloc::RunOptions opt;
  opt.seed = seed;
  opt.threads = thread_count(threads);
  opt.out_dir = out_dir;

  try {
    if (*oracles) {
      antiloc::OracleOptions o;
      o.threads = opt.threads;
      o.corrupt_propagator = corrupt;
      return antiloc::run_oracles(o, std::cout);
    }
    const antiloc::RunConfig config = antiloc::load_config(config_path);
    if (*spectrum) return antiloc::run_spectrum(config, opt, std::cerr);
    if (*beat) return antiloc::run_beatspec(config, opt, std::cerr);
    if (*quad) return antiloc::run_quadrature_check(config, opt, std::cout);
  } catch (const antiloc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return antiloc::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return antiloc::kExitFailure;
  }
  return antiloc::kExitFailure;
}
