#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "superiorization/experiment.hpp"

namespace superiorization {

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& field,
                       const std::string& message) {
  std::string where;
  if (node.IsDefined() && !node.Mark().is_null()) {
    where = " (line " + std::to_string(node.Mark().line + 1) + ")";
  }
  throw ConfigError("field '" + field + "'" + where + ": " + message);
}

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void check_keys(const YAML::Node& map, const std::string& field,
                const std::set<std::string>& allowed) {
  if (!map.IsMap()) fail(map, field, "expected a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (allowed.count(key) == 0) fail(kv.first, join(field, key), "unknown key");
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& field, const char* expected) {
  if (!node.IsScalar()) fail(node, field, std::string("expected ") + expected);
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, field, std::string("expected ") + expected + ", got '" +
                          node.Scalar() + "'");
  }
}

double real(const YAML::Node& node, const std::string& field) {
  const double v = scalar<double>(node, field, "a number");
  if (!std::isfinite(v)) fail(node, field, "must be finite");
  return v;
}

std::size_t count(const YAML::Node& node, const std::string& field) {
  const auto text = node.IsScalar() ? node.Scalar() : std::string();
  if (!text.empty() && text.front() == '-') {
    fail(node, field, "must be a nonnegative integer, got " + text);
  }
  return scalar<std::size_t>(node, field, "a nonnegative integer");
}

std::string text(const YAML::Node& node, const std::string& field) {
  return scalar<std::string>(node, field, "a string");
}

Vector real_list(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence()) fail(node, field, "expected a list of numbers");
  Vector out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(real(node[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

RowRelation relation(const YAML::Node& node, const std::string& field) {
  const auto name = text(node, field);
  const auto rel = parse_relation(name);
  if (!rel) fail(node, field, "expected 'eq' or 'le', got '" + name + "'");
  return *rel;
}

std::vector<Vector> read_csv(const std::filesystem::path& path,
                             const std::string& field) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("field '" + field + "': cannot open file " + path.string());
  }
  std::vector<Vector> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') {
      continue;
    }
    Vector row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) {
          throw std::invalid_argument(cell);
        }
      } catch (const std::exception&) {
        throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                          ": cannot parse '" + cell + "' as a number");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError(path.string() + ": no data rows");
  return rows;
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& file) {
  std::filesystem::path p(file);
  return p.is_absolute() ? p : base / p;
}

void parse_problem(const YAML::Node& node, const std::filesystem::path& base_dir,
                   ExperimentConfig& cfg) {
  const std::string field = "problem";
  if (!node) throw ConfigError("field 'problem': missing");
  check_keys(node, field,
             {"generate", "A", "b", "relation", "relations", "matrix_file",
              "rhs_file", "box", "initial_point", "start_scale"});
  ProblemSource& src = cfg.problem;

  const bool generated = static_cast<bool>(node["generate"]);
  const bool has_inline = static_cast<bool>(node["A"]);
  const bool has_file = static_cast<bool>(node["matrix_file"]);
  if (generated + has_inline + has_file != 1) {
    fail(node, field, "exactly one of 'generate', 'A', 'matrix_file' is required");
  }

  if (generated) {
    const auto g = node["generate"];
    const std::string gf = join(field, "generate");
    check_keys(g, gf, {"rows", "cols", "relation", "witness_scale", "slack"});
    GeneratedSystem sys;
    if (!g["rows"] || !g["cols"]) fail(g, gf, "'rows' and 'cols' are required");
    sys.rows = count(g["rows"], join(gf, "rows"));
    sys.cols = count(g["cols"], join(gf, "cols"));
    if (sys.rows < 1) fail(g["rows"], join(gf, "rows"), "must be >= 1");
    if (sys.cols < 1) fail(g["cols"], join(gf, "cols"), "must be >= 1");
    if (g["relation"]) sys.relation = relation(g["relation"], join(gf, "relation"));
    if (g["witness_scale"]) {
      sys.witness_scale = real(g["witness_scale"], join(gf, "witness_scale"));
    }
    if (g["slack"]) {
      sys.slack = real(g["slack"], join(gf, "slack"));
      if (sys.slack < 0.0) fail(g["slack"], join(gf, "slack"), "must be >= 0");
    }
    src.generate = sys;
  } else {
    if (has_inline) {
      const auto a = node["A"];
      if (!a.IsSequence()) fail(a, join(field, "A"), "expected a list of rows");
      for (std::size_t i = 0; i < a.size(); ++i) {
        src.matrix.push_back(
            real_list(a[i], join(field, "A") + "[" + std::to_string(i) + "]"));
      }
    } else {
      src.matrix_file = text(node["matrix_file"], join(field, "matrix_file"));
      src.matrix = read_csv(resolve(base_dir, src.matrix_file),
                            join(field, "matrix_file"));
    }
    if (node["b"] && node["rhs_file"]) {
      fail(node, field, "give either 'b' or 'rhs_file', not both");
    }
    if (node["b"]) {
      src.rhs = real_list(node["b"], join(field, "b"));
    } else if (node["rhs_file"]) {
      src.rhs_file = text(node["rhs_file"], join(field, "rhs_file"));
      for (const auto& row :
           read_csv(resolve(base_dir, src.rhs_file), join(field, "rhs_file"))) {
        src.rhs.insert(src.rhs.end(), row.begin(), row.end());
      }
    } else {
      fail(node, field, "'b' or 'rhs_file' is required");
    }
    const std::size_t rows = src.matrix.size();
    if (node["relation"] && node["relations"]) {
      fail(node, field, "give either 'relation' or 'relations', not both");
    }
    if (node["relations"]) {
      const auto rels = node["relations"];
      if (!rels.IsSequence()) fail(rels, join(field, "relations"), "expected a list");
      for (std::size_t i = 0; i < rels.size(); ++i) {
        src.relations.push_back(relation(
            rels[i], join(field, "relations") + "[" + std::to_string(i) + "]"));
      }
    } else {
      const RowRelation rel = node["relation"]
                                  ? relation(node["relation"], join(field, "relation"))
                                  : RowRelation::Equality;
      src.relations.assign(rows, rel);
    }
  }

  if (node["box"]) {
    const auto b = node["box"];
    const std::string bf = join(field, "box");
    check_keys(b, bf, {"lower", "upper"});
    if (!b["lower"] || !b["upper"]) fail(b, bf, "'lower' and 'upper' are required");
    src.box = Box{real_list(b["lower"], join(bf, "lower")),
                  real_list(b["upper"], join(bf, "upper"))};
  }
  if (node["initial_point"]) {
    cfg.initial_point = real_list(node["initial_point"], join(field, "initial_point"));
  }
  if (node["start_scale"]) {
    cfg.start_scale = real(node["start_scale"], join(field, "start_scale"));
    if (!(cfg.start_scale >= 0.0)) {
      fail(node["start_scale"], join(field, "start_scale"), "must be >= 0");
    }
  }
}

void parse_engine(const YAML::Node& node, SuperiorizationConfig& engine) {
  const std::string field = "engine";
  check_keys(node, field,
             {"N", "a", "M_max", "k_max", "strategy", "h", "gradient_tolerance"});
  if (node["N"]) {
    engine.n_stages = count(node["N"], "engine.N");
    if (engine.n_stages < 1) fail(node["N"], "engine.N", "must be >= 1");
  }
  if (node["a"]) {
    engine.decay_base = real(node["a"], "engine.a");
    if (!(engine.decay_base > 0.0 && engine.decay_base < 1.0)) {
      std::ostringstream msg;
      msg << "must lie in the open interval (0,1), got " << engine.decay_base;
      fail(node["a"], "engine.a", msg.str());
    }
  }
  if (node["M_max"]) {
    engine.max_candidates_per_stage = count(node["M_max"], "engine.M_max");
    if (engine.max_candidates_per_stage < 1) {
      fail(node["M_max"], "engine.M_max", "must be >= 1");
    }
  }
  if (node["k_max"]) {
    engine.k_max = count(node["k_max"], "engine.k_max");
    if (engine.k_max < 1) fail(node["k_max"], "engine.k_max", "must be >= 1");
  }
  if (node["strategy"]) {
    const auto name = text(node["strategy"], "engine.strategy");
    const auto s = parse_strategy(name);
    if (!s) {
      fail(node["strategy"], "engine.strategy",
           "expected 'gradient' or 'componentwise', got '" + name + "'");
    }
    engine.strategy = *s;
  }
  if (node["h"]) {
    engine.finite_difference_step = real(node["h"], "engine.h");
    if (!(engine.finite_difference_step > 0.0)) {
      fail(node["h"], "engine.h", "must be > 0");
    }
  }
  if (node["gradient_tolerance"]) {
    engine.gradient_tolerance =
        real(node["gradient_tolerance"], "engine.gradient_tolerance");
    if (engine.gradient_tolerance < 0.0) {
      fail(node["gradient_tolerance"], "engine.gradient_tolerance", "must be >= 0");
    }
  }
}

void parse_target(const YAML::Node& node, TargetFunctionSpec& target) {
  const std::string field = "target";
  check_keys(node, field, {"kind", "weights"});
  if (node["kind"]) {
    const auto name = text(node["kind"], "target.kind");
    const auto kind = parse_target_kind(name);
    if (!kind) {
      fail(node["kind"], "target.kind",
           "expected squared_norm, weighted_l1 or total_variation_1d, got '" +
               name + "'");
    }
    target.kind = *kind;
  }
  if (node["weights"]) {
    if (target.kind != TargetKind::WeightedL1) {
      fail(node["weights"], "target.weights", "only valid for weighted_l1");
    }
    target.weights = real_list(node["weights"], "target.weights");
  } else if (target.kind == TargetKind::WeightedL1) {
    fail(node, field, "weighted_l1 requires 'weights'");
  }
}

void parse_resilience(const YAML::Node& node, double eps,
                      ResilienceSettings& res) {
  const std::string field = "resilience";
  check_keys(node, field, {"eps_grid", "eps_prime", "trials", "c", "rho", "starts"});
  res.eps_grid = node["eps_grid"] ? real_list(node["eps_grid"], "resilience.eps_grid")
                                  : Vector{eps};
  if (res.eps_grid.empty()) {
    fail(node["eps_grid"], "resilience.eps_grid", "must not be empty");
  }
  for (double e : res.eps_grid) {
    if (e < 0.0) fail(node["eps_grid"], "resilience.eps_grid", "entries must be >= 0");
  }
  res.eps_prime = node["eps_prime"] ? real(node["eps_prime"], "resilience.eps_prime")
                                    : 2.0 * eps;
  if (!(res.eps_prime > eps)) {
    fail(node["eps_prime"], "resilience.eps_prime",
         "must be strictly greater than eps");
  }
  if (node["trials"]) {
    res.trials = count(node["trials"], "resilience.trials");
    if (res.trials < 1) fail(node["trials"], "resilience.trials", "must be >= 1");
  }
  if (node["c"]) {
    res.c = real(node["c"], "resilience.c");
    if (res.c < 0.0) fail(node["c"], "resilience.c", "must be >= 0");
  }
  if (node["rho"]) {
    res.rho = real(node["rho"], "resilience.rho");
    if (!(res.rho > 0.0 && res.rho < 1.0)) {
      fail(node["rho"], "resilience.rho", "must lie in the open interval (0,1)");
    }
  }
  if (node["starts"]) {
    res.starts = count(node["starts"], "resilience.starts");
    if (res.starts < 1) fail(node["starts"], "resilience.starts", "must be >= 1");
  }
}

// Messages of the form "name: detail" from the library validators.
[[noreturn]] void rethrow_as_field(const std::string& section,
                                   const std::invalid_argument& e) {
  const std::string what = e.what();
  const auto colon = what.find(':');
  if (colon == std::string::npos) throw ConfigError("field '" + section + "': " + what);
  throw ConfigError("field '" + join(section, what.substr(0, colon)) + "'" +
                    what.substr(colon));
}

}  // namespace

std::size_t ExperimentConfig::dimension() const {
  if (problem.generate) return problem.generate->cols;
  return problem.matrix.empty() ? 0 : problem.matrix.front().size();
}

ExperimentConfig parse_config(const std::string& source,
                              const std::filesystem::path& base_dir,
                              const std::string& default_label) {
  YAML::Node root;
  try {
    root = YAML::Load(source);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("parse error at line " + std::to_string(e.mark.line + 1) +
                      ", column " + std::to_string(e.mark.column + 1) + ": " +
                      e.msg);
  }
  if (!root.IsMap()) throw ConfigError("config: expected a mapping at top level");
  check_keys(root, "",
             {"label", "seed", "problem", "algorithm", "target", "engine", "eps",
              "resilience"});

  ExperimentConfig cfg;
  cfg.label = default_label;
  if (root["label"]) cfg.label = text(root["label"], "label");
  if (root["seed"]) cfg.seed = scalar<std::uint64_t>(root["seed"], "seed",
                                                     "a nonnegative integer");
  parse_problem(root["problem"], base_dir, cfg);
  if (root["algorithm"]) {
    const auto name = text(root["algorithm"], "algorithm");
    const auto alg = parse_algorithm(name);
    if (!alg) {
      fail(root["algorithm"], "algorithm",
           "expected 'sequential' or 'simultaneous', got '" + name + "'");
    }
    cfg.algorithm = *alg;
  }
  if (root["target"]) parse_target(root["target"], cfg.target);
  if (root["engine"]) parse_engine(root["engine"], cfg.engine);
  if (root["eps"]) {
    cfg.eps = real(root["eps"], "eps");
    if (cfg.eps < 0.0) fail(root["eps"], "eps", "must be >= 0");
  }
  if (root["resilience"]) {
    cfg.resilience.emplace();
    parse_resilience(root["resilience"], cfg.eps, *cfg.resilience);
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path(), path.stem().string());
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.label.empty() ||
      cfg.label.find_first_of("/\\") != std::string::npos) {
    throw ConfigError("field 'label': must be a nonempty file-name-safe string");
  }
  try {
    cfg.engine.validate();
  } catch (const std::invalid_argument& e) {
    rethrow_as_field("engine", e);
  }
  const std::size_t dim = cfg.dimension();
  try {
    if (!cfg.problem.generate) {
      LinearFeasibilityProblem check(cfg.problem.matrix, cfg.problem.rhs,
                                     cfg.problem.relations, cfg.problem.box);
    } else if (cfg.problem.box) {
      const auto& box = *cfg.problem.box;
      if (box.lower.size() != dim || box.upper.size() != dim) {
        throw std::invalid_argument("box: bounds must have one entry per column");
      }
      for (std::size_t j = 0; j < dim; ++j) {
        if (!(box.lower[j] <= box.upper[j])) {
          throw std::invalid_argument("box: lower exceeds upper at index " +
                                      std::to_string(j));
        }
      }
    }
  } catch (const std::invalid_argument& e) {
    rethrow_as_field("problem", e);
  }
  try {
    cfg.target.validate(dim);
  } catch (const std::invalid_argument& e) {
    rethrow_as_field("target", e);
  }
  if (cfg.initial_point) {
    if (cfg.initial_point->size() != dim) {
      throw ConfigError("field 'problem.initial_point': expected " +
                        std::to_string(dim) + " entries");
    }
    if (cfg.problem.box && !cfg.problem.box->contains(*cfg.initial_point)) {
      throw ConfigError("field 'problem.initial_point': lies outside the box");
    }
  }
  if (!(cfg.eps >= 0.0)) throw ConfigError("field 'eps': must be >= 0");
  if (cfg.resilience && !(cfg.resilience->eps_prime > cfg.eps)) {
    throw ConfigError("field 'resilience.eps_prime': must be strictly greater than eps");
  }
}

}  // namespace superiorization
