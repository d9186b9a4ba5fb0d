#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "nlospf/experiment.hpp"
#include "nlospf/image_io.hpp"
#include "nlospf/parallel.hpp"

namespace fs = std::filesystem;
using namespace nlos;

namespace {

// Exit codes: 0 success, 2 configuration error, 3 runtime/coverage error.
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string default_out_base() {
  if (const char* env = std::getenv("NLOSPF_OUT")) return env;
  return "out";
}

struct CommonArgs {
  std::string preset;
  std::string config;
  std::string out_base;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned threads = 0;
  bool threads_set = false;
  std::string scene;
  double lambda_c = 0.0;
  double sigma = 0.0;
  double dt = 0.0;
  std::size_t paths = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--preset", a.preset, "Name of a shipped experiment preset");
  cmd->add_option("--config", a.config, "Path to an experiment config file");
  cmd->add_option("--out", a.out_base,
                  "Output base directory (default $NLOSPF_OUT or ./out)");
  cmd->add_option("--seed", a.seed, "Random seed")
      ->each([&a](const std::string&) { a.seed_set = true; });
  cmd->add_option("--threads", a.threads, "Worker threads (0 = hardware)")
      ->each([&a](const std::string&) { a.threads_set = true; });
  cmd->add_option("--scene", a.scene, "Override the scene file");
  cmd->add_option("--lambda-c", a.lambda_c, "Pulse central wavelength [m]");
  cmd->add_option("--sigma", a.sigma, "Pulse envelope deviation [m]");
  cmd->add_option("--dt", a.dt, "Histogram bin width [s]");
  cmd->add_option("--paths", a.paths, "Monte Carlo path count");
}

Overrides to_overrides(const CommonArgs& a) {
  Overrides ov;
  if (a.seed_set) ov.seed = a.seed;
  if (a.threads_set) ov.threads = a.threads;
  if (!a.scene.empty()) ov.scene = a.scene;
  if (a.lambda_c > 0.0) ov.lambda_c = a.lambda_c;
  if (a.sigma > 0.0) ov.sigma = a.sigma;
  if (a.dt > 0.0) ov.dt = a.dt;
  if (a.paths > 0) ov.paths = a.paths;
  return ov;
}

std::string resolve_config(const CommonArgs& a) {
  if (!a.config.empty()) return a.config;
  if (!a.preset.empty()) return preset_path(a.preset);
  throw ConfigError("specify --preset <name> or --config <file>");
}

int run_cmd(const CommonArgs& a, const std::string& forced_pipeline = "") {
  ExperimentConfig cfg = load_experiment(resolve_config(a), to_overrides(a));
  if (!forced_pipeline.empty()) cfg.pipeline = forced_pipeline;
  const std::string base = a.out_base.empty() ? default_out_base() : a.out_base;
  const fs::path out = fs::path(base) / cfg.output;
  const std::string report = run_experiment(cfg, out.string());
  std::cout << report;
  std::cout << "artifacts written to " << out.string() << "\n";
  return 0;
}

int validate_cmd(const CommonArgs& a) {
  const ExperimentConfig cfg = load_experiment(resolve_config(a), to_overrides(a));
  const auto issues = validate_experiment(cfg);
  if (issues.empty()) {
    std::cout << "ok: no issues found\n";
  } else {
    for (const auto& line : issues) std::cout << "issue: " << line << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NLOS transient rendering and phasor-field imaging toolkit"};
  app.set_version_flag("--version", std::string(NLOSPF_VERSION));
  app.require_subcommand(1);
  set_tool_version(NLOSPF_VERSION);

  CommonArgs run_args, validate_args;
  std::map<std::string, CommonArgs> pipeline_args;

  CLI::App* run = app.add_subcommand("run", "Run an experiment config end to end");
  add_common(run, run_args);

  CLI::App* validate =
      app.add_subcommand("validate", "Dry-run checks of an experiment config");
  add_common(validate, validate_args);

  // Each pipeline is also a standalone subcommand over the same config
  // machinery: `nlospf render --preset X` equals `nlospf run` with the
  // pipeline forced to `render`.
  for (const std::string name : {"render", "image-transient", "image-confocal",
                                 "infer", "secondary", "two-corner", "wavesim",
                                 "infinity-mirror", "missing-cone"}) {
    CLI::App* cmd = app.add_subcommand(name, "Run the " + name + " pipeline");
    add_common(cmd, pipeline_args[name]);
  }

  CLI::App* presets = app.add_subcommand("presets", "List shipped experiment presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) return run_cmd(run_args);
    if (validate->parsed()) return validate_cmd(validate_args);
    if (presets->parsed()) {
      for (const auto& name : list_presets()) std::cout << name << "\n";
      return 0;
    }
    for (auto& [name, args] : pipeline_args)
      if (app.get_subcommand(name)->parsed()) return run_cmd(args, name);
    std::cerr << "no subcommand\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
