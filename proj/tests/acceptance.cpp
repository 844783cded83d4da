// Acceptance criteria 1-8, one PASS/FAIL line each. Exit status is nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "superiorization/experiment.hpp"
#include "suite.hpp"

using namespace superiorization;
namespace fs = std::filesystem;

namespace {

// Tolerances pinned by the acceptance criteria.
constexpr double kSumBetaSlack = 1e-9;
constexpr double kStageRelative = 1e-12;
constexpr double kFrozenRelative = 1e-8;
constexpr double kGradientRelative = 1e-5;
constexpr double kIdempotence = 1e-10;
constexpr double kSkeletonSeconds = 1.0;
constexpr double kSuiteSeconds = 30.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string first_failure;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) first_failure = what;
    pass = false;
  }
};

Point gaussian_point(std::mt19937_64& rng, std::size_t dim, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  Vector v(dim);
  for (double& x : v) x = g(rng);
  return Point(std::move(v));
}

// Criterion 1: with every candidate rejected the superiorized sequence is the
// basic sequence. The supplied gradient points uphill, so each candidate raises
// phi, and M_max = 1 leaves no second try.
Outcome skeleton_fidelity() {
  Outcome out;
  const auto start = Clock::now();
  std::size_t compared = 0;
  std::size_t rejected = 0;
  for (std::uint64_t seed = 101; seed <= 110; ++seed) {
    const auto rel = seed % 2 ? RowRelation::Equality : RowRelation::LessOrEqual;
    const auto system = random_consistent_system(15, 8, rel, seed, 1.0, 0.5);
    const auto problem = make_instance("skeleton", system);
    auto structure = make_linear_structure(8, {});
    structure.target_gradient = [](const Point& x) {
      Vector g(x.vector());
      for (double& v : g) v *= -2.0;
      return g;
    };
    SuperiorizationConfig cfg;
    cfg.max_candidates_per_stage = 1;
    std::mt19937_64 rng(seed);
    const Point x0 = gaussian_point(rng, 8, 5.0);
    const auto alg = seed % 3 ? sequential_projections() : simultaneous_projections();
    BasicSequence basic = iterate_basic(structure, alg, problem, x0);
    SuperiorizedSequence sup = superiorized_iterate(structure, alg, problem, x0, cfg);
    for (int k = 0; k < 120; ++k) {
      out.require(basic.next() == sup.next(),
                  "seed " + std::to_string(seed) + " differs at k=" + std::to_string(k));
      ++compared;
    }
    for (const auto& row : sup.trace().iterations) {
      for (const auto& stage : row.stages) rejected += stage.accepted ? 0 : 1;
    }
  }
  out.require(rejected > 0, "no candidate was rejected");
  const double elapsed = seconds_since(start);
  out.require(elapsed < kSkeletonSeconds, "runtime " + std::to_string(elapsed) + " s");
  out.detail = "10 problems x 120 iterates, " + std::to_string(compared) +
               " exact matches, " + std::to_string(rejected) + " rejected stages, " +
               std::to_string(elapsed) + " s";
  return out;
}

struct EngineRun {
  std::string name;
  double decay_base;
  IterationTrace trace;
};

// Every engine run used by criteria 2 and 3: the 20 suite members plus 40
// randomized configurations.
std::vector<EngineRun> engine_runs() {
  std::vector<EngineRun> runs;
  for (std::size_t i = 0; i < suite::kMembers; ++i) {
    const auto m = suite::member(i);
    const auto pair = run_pair(m.structure, sequential_projections(), m.instance, m.x0,
                               suite::kEps, suite::engine());
    runs.push_back({"suite " + std::to_string(m.seed), suite::engine().decay_base,
                    pair.superiorized_trace});
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> decay(0.3, 0.999);
  std::uniform_int_distribution<std::size_t> stages(1, 8);
  std::uniform_int_distribution<std::size_t> dims(2, 12);
  for (int r = 0; r < 40; ++r) {
    const std::size_t dim = dims(rng);
    SuperiorizationConfig cfg;
    cfg.decay_base = decay(rng);
    cfg.n_stages = stages(rng);
    cfg.strategy = r % 2 ? CandidateStrategy::ComponentwiseSearch
                         : CandidateStrategy::GradientDirection;
    const auto kind = static_cast<TargetKind>(r % 3);
    std::uniform_real_distribution<double> w(0.0, 2.0);
    Vector weights;
    if (kind == TargetKind::WeightedL1) {
      weights.resize(dim);
      for (double& v : weights) v = w(rng);
    }
    const TargetFunctionSpec target{kind, weights};
    std::optional<Box> box;
    if (r % 4 == 3) box = Box{Vector(dim, -2.0), Vector(dim, 2.0)};
    const auto system = random_consistent_system(2 * dim, dim, RowRelation::LessOrEqual,
                                                 500 + r, 1.0, 0.5);
    const LinearFeasibilityProblem boxed(
        [&] {
          std::vector<Vector> rows;
          for (std::size_t i = 0; i < system.rows(); ++i) {
            rows.emplace_back(system.row(i).begin(), system.row(i).end());
          }
          return rows;
        }(),
        [&] {
          Vector b;
          for (std::size_t i = 0; i < system.rows(); ++i) b.push_back(system.rhs(i));
          return b;
        }(),
        std::vector<RowRelation>(system.rows(), RowRelation::LessOrEqual), box);
    const auto structure = make_linear_structure(dim, target, box);
    Point x0 = gaussian_point(rng, dim, 4.0);
    if (box) x0 = box->clamp(x0);
    const auto alg = r % 3 ? sequential_projections() : simultaneous_projections();
    auto seq = superiorized_iterate(structure, alg, make_instance("random", boxed), x0, cfg);
    for (int k = 0; k < 300; ++k) seq.next();
    runs.push_back({"random " + std::to_string(r), cfg.decay_base, seq.trace()});
  }
  return runs;
}

// Criterion 2.
Outcome bounded_perturbations(const std::vector<EngineRun>& runs) {
  Outcome out;
  std::size_t stages = 0;
  for (const auto& run : runs) {
    const double sum = run.trace.sum_beta();
    out.require(sum <= 1.0 / (1.0 - run.decay_base) + kSumBetaSlack,
                run.name + ": sum of beta exceeds 1/(1-a)");
    for (const auto& row : run.trace.iterations) {
      for (const auto& stage : row.stages) {
        ++stages;
        out.require(stage.step_norm <=
                        stage.gamma * (1.0 + kStageRelative) + stage.rounding_allowance,
                    run.name + ": stage step exceeds gamma at k=" + std::to_string(row.k));
        out.require(stage.gamma <= stage.gamma_consumed * (1.0 + kStageRelative),
                    run.name + ": gamma exceeds consumed gamma");
      }
    }
    out.require(verify_trace_boundedness(run.trace, run.decay_base),
                run.name + ": verify_trace_boundedness");
  }
  out.require(runs.size() >= 50, "fewer than 50 runs");
  out.detail = std::to_string(runs.size()) + " runs, " + std::to_string(stages) + " stages";
  return out;
}

// Criterion 3.
Outcome target_monotonicity(const std::vector<EngineRun>& runs) {
  Outcome out;
  std::size_t checked = 0;
  for (const auto& run : runs) {
    for (const auto& row : run.trace.iterations) {
      if (row.stages.empty()) continue;
      double current = row.target;
      for (const auto& stage : row.stages) {
        out.require(stage.target_before == current && stage.target_after <= current,
                    run.name + ": stage raised phi at k=" + std::to_string(row.k));
        current = stage.target_after;
      }
      out.require(current <= row.target,
                  run.name + ": phi(x^{k,N}) > phi(x^{k,0}) at k=" + std::to_string(row.k));
      ++checked;
    }
  }
  out.detail = std::to_string(checked) + " outer iterations over " +
               std::to_string(runs.size()) + " runs";
  return out;
}

// Criterion 4.
Outcome epsilon_output_contract() {
  Outcome out;
  TargetedProblemStructure s;
  s.dimension = 1;
  s.in_omega = [](const Point&) { return true; };
  s.in_delta = s.in_omega;
  s.proximity = [](const ProblemInstance&, const Point& x) { return x[0]; };
  s.target = [](const Point& x) { return x[0]; };
  const ProblemInstance problem("trace", 0);

  auto run = [&](const std::vector<double>& values, double eps, std::size_t k_max) {
    std::size_t i = 0;
    GeneratorSequence seq([&] { return Point{values[std::min(i++, values.size() - 1)]}; });
    return epsilon_output(s, problem, eps, seq, k_max);
  };

  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> length(1, 60);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> values(length(rng));
    for (double& v : values) v = unit(rng) < 0.1 ? 0.0 : std::exp(-8.0 * unit(rng));
    const std::size_t k_max = 1 + length(rng);
    std::vector<double> grid(4);
    for (double& e : grid) e = unit(rng) < 0.1 ? 0.0 : std::exp(-8.0 * unit(rng));
    std::sort(grid.begin(), grid.end());

    std::optional<std::size_t> previous;
    bool previous_defined = false;
    for (double eps : grid) {
      std::optional<std::size_t> expected;
      for (std::size_t k = 0; k <= k_max; ++k) {
        if (values[std::min(k, values.size() - 1)] <= eps) {
          expected = k;
          break;
        }
      }
      const auto got = run(values, eps, k_max);
      out.require(got.index == expected && got.defined() == expected.has_value(),
                  "trace " + std::to_string(t) + ": wrong first crossing");
      out.require(got.defined() || got.iterations_examined == k_max + 1,
                  "trace " + std::to_string(t) + ": wrong examined count");
      if (previous_defined) {
        out.require(got.defined() && *got.index <= *previous,
                    "trace " + std::to_string(t) + ": larger eps gave a larger K");
      }
      previous_defined = got.defined();
      previous = got.index;
    }
  }
  out.detail = "1000 traces x 4 eps values";
  return out;
}

// Criterion 5.
Outcome superiorization_benefit() {
  Outcome out;
  const auto start = Clock::now();
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < suite::kMembers; ++i) {
    const auto m = suite::member(i);
    const auto pair = run_pair(m.structure, sequential_projections(), m.instance, m.x0,
                               suite::kEps, suite::engine());
    const std::string name = "member " + std::to_string(m.seed);
    if (!pair.basic.defined() || !pair.superiorized.defined()) {
      out.require(false, name + ": output undefined within k_max");
      continue;
    }
    const double basic = m.structure.target(*pair.basic.point);
    const double sup = m.structure.target(*pair.superiorized.point);
    out.require(sup <= basic, name + ": phi(superiorized) > phi(basic)");
    const auto& frozen = suite::kFrozen[i];
    const double err_basic = std::abs(basic - frozen.basic) / std::abs(frozen.basic);
    const double err_sup =
        std::abs(sup - frozen.superiorized) / std::abs(frozen.superiorized);
    out.require(err_basic <= kFrozenRelative && err_sup <= kFrozenRelative,
                name + ": differs from the frozen values");
    worst_ratio = std::max(worst_ratio, sup / basic);
  }
  const double elapsed = seconds_since(start);
  out.require(elapsed < kSuiteSeconds, "runtime " + std::to_string(elapsed) + " s");
  std::ostringstream d;
  d << "20 members, max phi(sup)/phi(basic) = " << worst_ratio << ", " << elapsed << " s";
  out.detail = d.str();
  return out;
}

// Replays x^{k+1} = P(x^k + beta_k v^k) from the draws recorded by a fresh
// PerturbedSequence and returns the first k with residual <= eps.
std::optional<std::size_t> replay(const suite::Member& m, const Point& start,
                                  const PerturbationSpec& spec, std::uint64_t seed,
                                  double eps, std::size_t k_max) {
  const auto& system = m.instance.payload<LinearFeasibilityProblem>();
  PerturbedSequence seq(m.structure, sequential_projections(), m.instance, start, spec, seed);
  Point x = seq.next();
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (residual_proximity(system, x) <= eps) return k;
    if (k == k_max) break;
    seq.next();
    const auto& p = seq.perturbations().back();
    x = sequential_projection_step(system, displaced(x, p.beta_k, p.v_k));
  }
  return std::nullopt;
}

// Criterion 6.
Outcome resilience_consistency() {
  Outcome out;
  constexpr std::size_t kStarts = 10;
  constexpr std::size_t kTrials = 50;
  constexpr std::uint64_t kPerturbationSeed = 20240;
  const double eps = suite::kEps;
  const double eps_prime = 2.0 * eps;
  std::size_t geometric_defined = 0;
  for (std::size_t i = 0; i < suite::kMembers; ++i) {
    const auto m = suite::member(i);
    const std::string name = "member " + std::to_string(m.seed);
    const auto starts = random_starts(m.structure, kStarts, 5.0, 2000 + m.seed);
    const auto alg = sequential_projections();

    const auto c1 = probe_condition1(m.structure, alg, m.instance, {eps}, starts,
                                     suite::kMaxIterations);
    out.require(c1.all_defined, name + ": condition 1 fails at eps");

    const auto zero = probe_condition2(m.structure, alg, m.instance, eps, eps_prime, kStarts,
                                       suite::kMaxIterations, PerturbationSpec{0.0, 0.9, 0},
                                       starts);
    for (const auto& trial : zero) {
      BasicSequence basic = iterate_basic(m.structure, alg, m.instance,
                                          starts[trial.start_index]);
      const auto direct =
          epsilon_output(m.structure, m.instance, eps_prime, basic, suite::kMaxIterations);
      out.require(trial.defined == direct.defined() && trial.index == direct.index,
                  name + ": zero-perturbation trial disagrees with the basic sequence");
      out.require(!c1.all_defined || trial.defined,
                  name + ": zero-perturbation trial undefined although condition 1 holds");
    }

    const PerturbationSpec spec{0.1, 0.9, kPerturbationSeed};
    const auto trials = probe_condition2(m.structure, alg, m.instance, eps, eps_prime,
                                         kTrials, suite::kMaxIterations, spec, starts);
    for (const auto& trial : trials) {
      const auto oracle = replay(m, starts[trial.start_index], spec, trial.seed, eps_prime,
                                 suite::kMaxIterations);
      out.require(trial.defined, name + ": geometric trial undefined, seed " +
                                     std::to_string(trial.seed));
      out.require(trial.index == oracle, name + ": trial disagrees with direct simulation");
      if (trial.defined) ++geometric_defined;
    }
  }
  out.detail = std::to_string(geometric_defined) + "/" +
               std::to_string(suite::kMembers * kTrials) +
               " geometric trials defined at eps' = 2 eps";
  return out;
}

// Criterion 7.
Outcome numerical_hygiene() {
  Outcome out;
  std::mt19937_64 rng(77);
  constexpr std::size_t kDim = 10;
  std::uniform_real_distribution<double> w(0.1, 3.0);
  Vector weights(kDim);
  for (double& v : weights) v = w(rng);
  double worst = 0.0;
  for (const TargetFunctionSpec& spec :
       {TargetFunctionSpec{TargetKind::SquaredNorm, {}},
        TargetFunctionSpec{TargetKind::WeightedL1, weights},
        TargetFunctionSpec{TargetKind::TotalVariation1D, {}}}) {
    for (int i = 0; i < 100; ++i) {
      const Point x = gaussian_point(rng, kDim, 2.0);
      const Vector analytic = target_gradient_value(spec, x);
      Vector numeric(kDim);
      constexpr double h = 1e-6;
      for (std::size_t j = 0; j < kDim; ++j) {
        Vector up(x.vector()), down(x.vector());
        up[j] += h;
        down[j] -= h;
        numeric[j] =
            (target_value(spec, Point(up)) - target_value(spec, Point(down))) / (2.0 * h);
      }
      const double err = distance(analytic, numeric) / std::max(norm(analytic), 1e-12);
      worst = std::max(worst, err);
      out.require(err <= kGradientRelative,
                  std::string(to_string(spec.kind)) + ": gradient mismatch");
    }
  }

  double worst_projection = 0.0;
  std::normal_distribution<double> g(0.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    Vector a(kDim);
    for (double& v : a) v = g(rng);
    const double b = g(rng);
    const auto rel = i % 2 ? RowRelation::Equality : RowRelation::LessOrEqual;
    const Point once = project_row(a, b, rel, gaussian_point(rng, kDim, 5.0));
    const Point twice = project_row(a, b, rel, once);
    const double d = distance(once.coords(), twice.coords());
    worst_projection = std::max(worst_projection, d);
    out.require(d <= kIdempotence, "projection not idempotent");
  }
  std::ostringstream d;
  d << "worst gradient error " << worst << ", worst projection drift " << worst_projection;
  out.detail = d.str();
  return out;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Criterion 8.
Outcome reproducibility() {
  Outcome out;
  const fs::path demo = fs::path(SUPERIORIZATION_SOURCE_DIR) / "configs" / "demo.yaml";
  const fs::path root = fs::temp_directory_path() / "superiorization_acceptance";
  std::ostringstream log;
  std::size_t bytes = 0;
  try {
    for (const char* run : {"first", "second"}) {
      fs::remove_all(root / run);
      fs::create_directories(root / run);
      run_experiment(load_config(demo), {root / run, true}, log);
    }
    for (const char* file : {"demo_basic.csv", "demo_sup.csv"}) {
      const std::string a = slurp(root / "first" / file);
      const std::string b = slurp(root / "second" / file);
      out.require(!a.empty() && a == b, std::string(file) + " differs between runs");
      bytes += a.size();
    }
  } catch (const std::exception& e) {
    out.require(false, e.what());
  }
  out.detail = "2 runs, " + std::to_string(bytes) + " bytes of CSV compared";
  return out;
}

}  // namespace

int main() {
  const std::vector<EngineRun> runs = engine_runs();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"skeleton fidelity under universal rejection", skeleton_fidelity},
      {"bounded perturbations", [&] { return bounded_perturbations(runs); }},
      {"within-iteration target monotonicity", [&] { return target_monotonicity(runs); }},
      {"epsilon-output contract", epsilon_output_contract},
      {"superiorization benefit on the fixed suite", superiorization_benefit},
      {"resilience probe consistency", resilience_consistency},
      {"numerical hygiene", numerical_hygiene},
      {"reproducibility of the demo traces", reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.first_failure = std::string("exception: ") + e.what();
    }
    std::printf("criterion %zu: %s  %s (%s)%s%s\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first, o.detail.c_str(), o.pass ? "" : " first failure: ",
                o.first_failure.c_str());
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
