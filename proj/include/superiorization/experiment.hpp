#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "superiorization/engine.hpp"
#include "superiorization/problems.hpp"
#include "superiorization/resilience.hpp"

namespace superiorization {

/// Invalid or unreadable experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeneratedSystem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  RowRelation relation = RowRelation::Equality;
  double witness_scale = 1.0;
  double slack = 0.0;
};

/// Where the linear system comes from. Files are read at load time, so A and
/// b are populated for both inline and file sources.
struct ProblemSource {
  std::optional<GeneratedSystem> generate;
  std::vector<Vector> matrix;
  Vector rhs;
  std::vector<RowRelation> relations;
  std::string matrix_file;
  std::string rhs_file;
  std::optional<Box> box;
};

struct ResilienceSettings {
  std::vector<double> eps_grid;
  double eps_prime = 0.0;
  std::size_t trials = 50;
  double c = 0.1;
  double rho = 0.9;
  std::size_t starts = 20;
};

struct ExperimentConfig {
  std::string label = "experiment";
  std::uint64_t seed = 0;
  ProblemSource problem;
  AlgorithmKind algorithm = AlgorithmKind::Sequential;
  TargetFunctionSpec target;
  SuperiorizationConfig engine;
  double eps = 1e-4;
  std::optional<Vector> initial_point;
  double start_scale = 5.0;
  std::optional<ResilienceSettings> resilience;

  std::size_t dimension() const;
};

/// Parses and validates a YAML experiment file, filling every default.
/// Errors carry the field path and, where known, the line number. Relative
/// data-file paths resolve against the config's directory, and an unlabelled
/// config takes the file stem as its label.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text,
                              const std::filesystem::path& base_dir = ".",
                              const std::string& default_label = "experiment");

/// Range checks across fields; load_config already calls this.
void validate_config(const ExperimentConfig& cfg);

/// Fully resolved configuration as JSON.
nlohmann::json config_echo(const ExperimentConfig& cfg);

/// The experiment's inputs, built from a validated config.
struct ExperimentSetup {
  LinearFeasibilityProblem system;
  ProblemInstance instance;
  TargetedProblemStructure structure;
  BasicAlgorithm algorithm;
  Point x0;
};

ExperimentSetup build_setup(const ExperimentConfig& cfg);

/// Seed of an independent random stream derived from the experiment seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Header: k,proximity,target,ell,beta_k,clamped
void write_trace_csv(std::ostream& out, const IterationTrace& trace);

nlohmann::json to_json(const EpsilonOutputResult& result,
                       const TargetedProblemStructure& structure,
                       const ProblemInstance& problem);
nlohmann::json to_json(const ResilienceReport& report);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  bool quiet = false;
};

struct RunOutcome {
  nlohmann::json report;
  std::vector<std::filesystem::path> files;
};

/// Basic vs. superiorized comparison (plus resilience probes when the config
/// has a resilience section). Writes <label>_basic.csv, <label>_sup.csv and
/// <label>_report.json into out_dir.
RunOutcome run_experiment(const ExperimentConfig& cfg, const RunOptions& options,
                          std::ostream& log);

/// Resilience probes only; writes <label>_probe.json.
RunOutcome run_probe(const ExperimentConfig& cfg, const RunOptions& options,
                     std::ostream& log);

}  // namespace superiorization
