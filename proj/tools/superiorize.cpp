#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "superiorization/experiment.hpp"

namespace sz = superiorization;

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kExecutionError = 2 };

sz::ExperimentConfig load(const std::string& path,
                          const std::optional<std::uint64_t>& seed) {
  sz::ExperimentConfig cfg = sz::load_config(path);
  if (seed) cfg.seed = *seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superiorization experiment harness: basic vs. superiorized "
               "feasibility-seeking runs and perturbation-resilience probes"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool quiet = false;

  auto add_common = [&](CLI::App* cmd, bool writes) {
    cmd->add_option("config", config_path, "Experiment config (YAML)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "Override the config seed");
    cmd->add_flag("--quiet,-q", quiet, "Suppress the summary");
    if (writes) cmd->add_option("--out-dir,-o", out_dir, "Output directory");
  };

  auto* run = app.add_subcommand("run", "Compare basic and superiorized runs");
  add_common(run, true);
  auto* probe = app.add_subcommand("probe", "Run the resilience probes only");
  add_common(probe, true);
  auto* validate = app.add_subcommand("validate", "Check a config and print it resolved");
  add_common(validate, false);

  CLI11_PARSE(app, argc, argv);

  sz::ExperimentConfig cfg;
  try {
    cfg = load(config_path, seed);
    sz::validate_config(cfg);
  } catch (const sz::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  const sz::RunOptions options{out_dir, quiet};
  try {
    if (*validate) {
      if (!quiet) std::cout << sz::config_echo(cfg).dump(2) << '\n';
    } else if (*run) {
      sz::run_experiment(cfg, options, std::cout);
    } else {
      sz::run_probe(cfg, options, std::cout);
    }
  } catch (const sz::NonFiniteIterate& e) {
    std::cerr << "aborted: " << e.what() << '\n';
    return kExecutionError;
  } catch (const sz::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExecutionError;
  }
  return kOk;
}
