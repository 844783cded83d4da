#include "superiorization/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

namespace superiorization {

using nlohmann::json;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

constexpr std::uint64_t kProblemStream = 1;
constexpr std::uint64_t kStartStream = 2;
constexpr std::uint64_t kProbeStartStream = 3;
constexpr std::uint64_t kPerturbationStream = 4;

LinearFeasibilityProblem build_system(const ExperimentConfig& cfg) {
  const ProblemSource& src = cfg.problem;
  if (src.generate) {
    const GeneratedSystem& g = *src.generate;
    LinearFeasibilityProblem sys =
        random_consistent_system(g.rows, g.cols, g.relation,
                                 derive_seed(cfg.seed, kProblemStream),
                                 g.witness_scale, g.slack);
    if (!src.box) return sys;
    std::vector<Vector> rows;
    Vector rhs;
    std::vector<RowRelation> rels;
    for (std::size_t i = 0; i < sys.rows(); ++i) {
      rows.emplace_back(sys.row(i).begin(), sys.row(i).end());
      rhs.push_back(sys.rhs(i));
      rels.push_back(sys.relation(i));
    }
    return LinearFeasibilityProblem(std::move(rows), std::move(rhs),
                                    std::move(rels), src.box);
  }
  return LinearFeasibilityProblem(src.matrix, src.rhs, src.relations, src.box);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json nullable(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

json resilience_section(const ExperimentConfig& cfg, const ExperimentSetup& setup,
                        const ResilienceSettings& res) {
  const auto starts = random_starts(setup.structure, res.starts, cfg.start_scale,
                                    derive_seed(cfg.seed, kProbeStartStream));
  PerturbationSpec spec{res.c, res.rho, derive_seed(cfg.seed, kPerturbationStream)};
  const ResilienceReport report = assess_resilience(
      setup.structure, setup.algorithm, setup.instance, res.eps_grid, cfg.eps,
      res.eps_prime, res.trials, cfg.engine.k_max, spec, starts);
  return to_json(report);
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   since)
      .count();
}

}  // namespace

ExperimentSetup build_setup(const ExperimentConfig& cfg) {
  LinearFeasibilityProblem system = build_system(cfg);
  TargetedProblemStructure structure =
      make_linear_structure(system.cols(), cfg.target, system.box());
  ProblemInstance instance = make_instance(cfg.label, system);

  Vector start;
  if (cfg.initial_point) {
    start = *cfg.initial_point;
  } else {
    std::mt19937_64 rng(derive_seed(cfg.seed, kStartStream));
    std::normal_distribution<double> gauss(0.0, 1.0);
    start.resize(system.cols());
    for (double& v : start) v = cfg.start_scale * gauss(rng);
  }
  Point x0(std::move(start));
  if (system.box()) x0 = system.box()->clamp(x0);

  return ExperimentSetup{std::move(system), std::move(instance),
                         std::move(structure), make_algorithm(cfg.algorithm),
                         std::move(x0)};
}

json config_echo(const ExperimentConfig& cfg) {
  json problem;
  const ProblemSource& src = cfg.problem;
  if (src.generate) {
    const auto& g = *src.generate;
    problem["source"] = "generate";
    problem["generate"] = {{"rows", g.rows},
                           {"cols", g.cols},
                           {"relation", to_string(g.relation)},
                           {"witness_scale", g.witness_scale},
                           {"slack", g.slack}};
  } else {
    problem["source"] = src.matrix_file.empty() ? "inline" : "file";
    if (!src.matrix_file.empty()) problem["matrix_file"] = src.matrix_file;
    if (!src.rhs_file.empty()) problem["rhs_file"] = src.rhs_file;
    problem["A"] = src.matrix;
    problem["b"] = src.rhs;
    json rels = json::array();
    for (auto r : src.relations) rels.push_back(to_string(r));
    problem["relations"] = rels;
  }
  problem["box"] = src.box ? json{{"lower", src.box->lower}, {"upper", src.box->upper}}
                           : json(nullptr);
  problem["initial_point"] =
      cfg.initial_point ? json(*cfg.initial_point) : json("random");
  problem["start_scale"] = cfg.start_scale;

  json target{{"kind", to_string(cfg.target.kind)}};
  if (cfg.target.kind == TargetKind::WeightedL1) target["weights"] = cfg.target.weights;

  const auto& e = cfg.engine;
  json echo{{"label", cfg.label},
            {"seed", cfg.seed},
            {"problem", problem},
            {"algorithm", to_string(cfg.algorithm)},
            {"target", target},
            {"engine",
             {{"N", e.n_stages},
              {"a", e.decay_base},
              {"M_max", e.max_candidates_per_stage},
              {"k_max", e.k_max},
              {"strategy", to_string(e.strategy)},
              {"h", e.finite_difference_step},
              {"gradient_tolerance", e.gradient_tolerance}}},
            {"eps", cfg.eps}};
  if (cfg.resilience) {
    const auto& r = *cfg.resilience;
    echo["resilience"] = {{"eps_grid", r.eps_grid}, {"eps_prime", r.eps_prime},
                          {"trials", r.trials},     {"c", r.c},
                          {"rho", r.rho},           {"starts", r.starts}};
  } else {
    echo["resilience"] = nullptr;
  }
  return echo;
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
  out << "k,proximity,target,ell,beta_k,clamped\n";
  for (const auto& row : trace.iterations) {
    out << row.k << ',' << format_number(row.proximity) << ','
        << format_number(row.target) << ',' << row.ell << ','
        << format_number(row.beta) << ',' << (row.clamped ? 1 : 0) << '\n';
  }
}

json to_json(const EpsilonOutputResult& result,
             const TargetedProblemStructure& structure,
             const ProblemInstance& problem) {
  json out{{"status", result.defined() ? "defined" : "undefined"},
           {"iterations_examined", result.iterations_examined}};
  if (result.defined()) {
    out["K"] = *result.index;
    out["proximity"] = structure.evaluate_proximity(problem, *result.point);
    out["target"] = structure.evaluate_target(*result.point);
  } else {
    out["K"] = nullptr;
    out["proximity"] = nullptr;
    out["target"] = nullptr;
  }
  return out;
}

json to_json(const ResilienceReport& report) {
  json coverage = json::array();
  for (const auto& c : report.condition1.coverage) {
    coverage.push_back({{"eps", c.eps}, {"defined_starts", c.defined_starts}});
  }
  json trials = json::array();
  for (const auto& t : report.condition2) {
    trials.push_back({{"eps", t.eps},
                      {"eps_prime", t.eps_prime},
                      {"seed", t.seed},
                      {"start_index", t.start_index},
                      {"defined", t.defined},
                      {"K", t.index ? json(*t.index) : json(nullptr)},
                      {"clamp_count", t.clamp_count},
                      {"sum_beta", t.sum_beta}});
  }
  json out{
      {"condition1",
       {{"eps_found", nullable(report.condition1.eps_found)},
        {"starts_tested", report.condition1.starts_tested},
        {"all_defined", report.condition1.all_defined},
        {"coverage", coverage}}},
      {"condition1_holds_at_eps", report.condition1_holds_at_eps},
      {"condition2", trials},
      {"verdict", report.verdict == Verdict::ConsistentWithResilience
                      ? "consistent_with_resilience"
                      : "counterexample_found"},
      {"detail", report.detail},
      {"qualification", "undefined means undefined within k_max iterations"}};
  if (report.counterexample) out["counterexample_start"] = report.counterexample->start;
  return out;
}

RunOutcome run_experiment(const ExperimentConfig& cfg, const RunOptions& options,
                          std::ostream& log) {
  const auto started = std::chrono::steady_clock::now();
  const ExperimentSetup setup = build_setup(cfg);
  const PairResult pair = run_pair(setup.structure, setup.algorithm, setup.instance,
                                   setup.x0, cfg.eps, cfg.engine);

  RunOutcome outcome;
  std::filesystem::create_directories(options.out_dir);
  const auto basic_path = options.out_dir / (cfg.label + "_basic.csv");
  const auto sup_path = options.out_dir / (cfg.label + "_sup.csv");
  const auto report_path = options.out_dir / (cfg.label + "_report.json");

  std::ostringstream basic_csv, sup_csv;
  write_trace_csv(basic_csv, pair.basic_trace);
  write_trace_csv(sup_csv, pair.superiorized_trace);
  write_file(basic_path, basic_csv.str());
  write_file(sup_path, sup_csv.str());

  json report{{"config_echo", config_echo(cfg)},
              {"x0", setup.x0.vector()},
              {"basic", to_json(pair.basic, setup.structure, setup.instance)},
              {"superiorized",
               to_json(pair.superiorized, setup.structure, setup.instance)},
              {"sum_beta", pair.superiorized_trace.sum_beta()},
              {"traces",
               {{"basic", basic_path.filename().string()},
                {"superiorized", sup_path.filename().string()}}}};
  report["resilience"] = cfg.resilience ? resilience_section(cfg, setup, *cfg.resilience)
                                        : json(nullptr);
  report["runtime_ms"] = elapsed_ms(started);
  write_file(report_path, report.dump(2) + "\n");
  outcome.files = {basic_path, sup_path, report_path};

  if (!options.quiet) {
    auto row = [&log](const char* name, const json& r) {
      log << "  " << name << ": " << r["status"].get<std::string>();
      if (r["status"] == "defined") {
        log << "  K=" << r["K"] << "  proximity=" << r["proximity"]
            << "  target=" << r["target"];
      }
      log << '\n';
    };
    log << "experiment '" << cfg.label << "' (eps=" << cfg.eps
        << ", k_max=" << cfg.engine.k_max << ")\n";
    row("basic       ", report["basic"]);
    row("superiorized", report["superiorized"]);
    log << "  sum of beta_k: " << report["sum_beta"] << '\n';
    if (!report["resilience"].is_null()) {
      log << "  resilience: " << report["resilience"]["verdict"].get<std::string>()
          << '\n';
    }
    log << "  wrote " << basic_path.string() << ", " << sup_path.string() << ", "
        << report_path.string() << '\n';
  }
  outcome.report = std::move(report);
  return outcome;
}

RunOutcome run_probe(const ExperimentConfig& cfg, const RunOptions& options,
                     std::ostream& log) {
  const auto started = std::chrono::steady_clock::now();
  const ExperimentSetup setup = build_setup(cfg);
  ResilienceSettings res;
  if (cfg.resilience) {
    res = *cfg.resilience;
  } else {
    res.eps_grid = {cfg.eps};
    res.eps_prime = 2.0 * cfg.eps;
  }
  if (!(res.eps_prime > cfg.eps)) {
    throw ConfigError("field 'resilience.eps_prime': must be strictly greater than eps");
  }
  json report{{"config_echo", config_echo(cfg)},
              {"resilience", resilience_section(cfg, setup, res)}};
  report["runtime_ms"] = elapsed_ms(started);

  std::filesystem::create_directories(options.out_dir);
  const auto path = options.out_dir / (cfg.label + "_probe.json");
  write_file(path, report.dump(2) + "\n");

  if (!options.quiet) {
    const auto& r = report["resilience"];
    log << "probe '" << cfg.label << "': condition 1 eps_found="
        << r["condition1"]["eps_found"] << ", "
        << r["condition2"].size() << " condition-2 trials, verdict "
        << r["verdict"].get<std::string>() << '\n';
    if (!r["detail"].get<std::string>().empty()) {
      log << "  " << r["detail"].get<std::string>() << '\n';
    }
    log << "  wrote " << path.string() << '\n';
  }
  return {std::move(report), {path}};
}

}  // namespace superiorization
