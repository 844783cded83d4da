#include "superiorization/resilience.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "superiorization/engine.hpp"

namespace superiorization {

void PerturbationSpec::validate() const {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("c: must be a nonnegative finite number");
  }
  if (!(rho > 0.0 && rho < 1.0)) {
    throw std::invalid_argument("rho: must lie in the open interval (0,1)");
  }
}

double PerturbationSpec::beta(std::size_t k) const {
  return c * std::pow(rho, static_cast<double>(k));
}

double PerturbationSpec::series_bound() const { return c / (1.0 - rho); }

namespace {

Vector sample_unit_ball(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector v(dim);
  for (double& x : v) x = gauss(rng);
  const double n = norm(v);
  const double radius = std::pow(unit(rng), 1.0 / static_cast<double>(dim));
  if (n == 0.0) return Vector(dim, 0.0);
  for (double& x : v) x *= radius / n;
  while (norm(v) > 1.0) {
    for (double& x : v) x *= 1.0 - 0x1p-52;
  }
  return v;
}

}  // namespace

PerturbedSequence::PerturbedSequence(TargetedProblemStructure structure,
                                     BasicAlgorithm algorithm,
                                     ProblemInstance problem, Point x0,
                                     PerturbationSpec spec,
                                     std::uint64_t trial_seed)
    : structure_(std::move(structure)),
      algorithm_(std::move(algorithm)),
      problem_(std::move(problem)),
      spec_(spec),
      rng_(trial_seed),
      start_(std::move(x0)) {
  structure_.validate();
  spec_.validate();
  require_same_dimension(structure_.dimension, start_.dimension(), "x0");
  if (!structure_.in_omega(start_)) {
    throw DomainViolation("initial point is not in Omega");
  }
}

Point PerturbedSequence::next() {
  if (!current_) {
    current_.emplace(start_);
    return *current_;
  }
  PerturbationRecord record;
  record.k = k_;
  record.beta_k = spec_.beta(k_);
  record.v_k = sample_unit_ball(rng_, structure_.dimension);
  Point perturbed = displaced(*current_, record.beta_k, record.v_k);
  if (!structure_.in_delta(perturbed)) {
    if (!structure_.clamp_to_delta) {
      throw DomainViolation("perturbed point left Delta and no clamp is available");
    }
    perturbed = structure_.clamp_to_delta(perturbed);
    record.clamped = true;
  }
  perturbations_.push_back(std::move(record));
  ++k_;
  current_.emplace(apply_step(structure_, algorithm_, problem_, perturbed, k_));
  return *current_;
}

Condition1Record probe_condition1(const TargetedProblemStructure& structure,
                                  const BasicAlgorithm& algorithm,
                                  const ProblemInstance& problem,
                                  std::vector<double> eps_grid,
                                  const std::vector<Point>& starts,
                                  std::size_t k_max) {
  if (eps_grid.empty()) throw std::invalid_argument("eps_grid: must be nonempty");
  if (starts.empty()) throw std::invalid_argument("starts: must be nonempty");
  std::sort(eps_grid.begin(), eps_grid.end());

  Condition1Record record;
  record.starts_tested = starts.size();
  for (double eps : eps_grid) {
    EpsilonCoverage coverage{eps, 0};
    for (const Point& start : starts) {
      BasicSequence seq = iterate_basic(structure, algorithm, problem, start);
      if (epsilon_output(structure, problem, eps, seq, k_max).defined()) {
        ++coverage.defined_starts;
      }
    }
    record.coverage.push_back(coverage);
    if (coverage.defined_starts == starts.size()) {
      record.eps_found = eps;
      record.all_defined = true;
      break;
    }
  }
  return record;
}

Condition2Trial run_condition2_trial(const TargetedProblemStructure& structure,
                                     const BasicAlgorithm& algorithm,
                                     const ProblemInstance& problem, double eps,
                                     double eps_prime, std::size_t k_max,
                                     const PerturbationSpec& spec,
                                     std::uint64_t trial_seed, const Point& start,
                                     std::size_t start_index) {
  if (!(eps_prime > eps)) {
    throw std::invalid_argument("eps_prime: must be strictly greater than eps");
  }
  PerturbedSequence seq(structure, algorithm, problem, start, spec, trial_seed);
  const EpsilonOutputResult out =
      epsilon_output(structure, problem, eps_prime, seq, k_max);

  Condition2Trial trial;
  trial.eps = eps;
  trial.eps_prime = eps_prime;
  trial.seed = trial_seed;
  trial.start_index = start_index;
  trial.start = start.vector();
  trial.defined = out.defined();
  trial.index = out.index;
  for (const auto& p : seq.perturbations()) {
    trial.sum_beta += p.beta_k;
    if (p.clamped) ++trial.clamp_count;
  }
  return trial;
}

std::vector<Condition2Trial> probe_condition2(
    const TargetedProblemStructure& structure, const BasicAlgorithm& algorithm,
    const ProblemInstance& problem, double eps, double eps_prime,
    std::size_t trials, std::size_t k_max, const PerturbationSpec& spec,
    const std::vector<Point>& starts) {
  if (!(eps_prime > eps)) {
    throw std::invalid_argument("eps_prime: must be strictly greater than eps");
  }
  if (trials < 1) throw std::invalid_argument("trials: must be >= 1");
  if (starts.empty()) throw std::invalid_argument("starts: must be nonempty");
  spec.validate();
  std::vector<Condition2Trial> out;
  out.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t s = t % starts.size();
    out.push_back(run_condition2_trial(structure, algorithm, problem, eps,
                                       eps_prime, k_max, spec, spec.seed + t,
                                       starts[s], s));
  }
  return out;
}

ResilienceReport assess_resilience(const TargetedProblemStructure& structure,
                                   const BasicAlgorithm& algorithm,
                                   const ProblemInstance& problem,
                                   const std::vector<double>& eps_grid,
                                   double eps, double eps_prime,
                                   std::size_t trials, std::size_t k_max,
                                   const PerturbationSpec& spec,
                                   const std::vector<Point>& starts) {
  ResilienceReport report;
  report.condition1 =
      probe_condition1(structure, algorithm, problem, eps_grid, starts, k_max);
  report.condition2 = probe_condition2(structure, algorithm, problem, eps,
                                       eps_prime, trials, k_max, spec, starts);
  report.condition1_holds_at_eps =
      report.condition1.eps_found && *report.condition1.eps_found <= eps;

  std::ostringstream detail;
  detail.precision(17);
  if (!report.condition1.eps_found) {
    report.verdict = Verdict::CounterexampleFound;
    detail << "condition 1: no eps in the grid has a defined output from every "
              "start within k_max = "
           << k_max;
    report.detail = detail.str();
    return report;
  }
  if (!report.condition1_holds_at_eps) return report;
  for (const auto& trial : report.condition2) {
    if (trial.defined) continue;
    report.verdict = Verdict::CounterexampleFound;
    report.counterexample = trial;
    detail << "condition 2: output undefined within k_max = " << k_max
           << " for seed " << trial.seed << ", eps " << trial.eps
           << ", eps_prime " << trial.eps_prime << ", c " << spec.c << ", rho "
           << spec.rho << ", start #" << trial.start_index << " (";
    for (std::size_t j = 0; j < trial.start.size(); ++j) {
      detail << (j ? ", " : "") << trial.start[j];
    }
    detail << ")";
    report.detail = detail.str();
    break;
  }
  return report;
}

bool verify_trace_boundedness(const IterationTrace& trace, double decay_base) {
  constexpr double kSumTolerance = 1e-9;
  constexpr double kRelative = 1e-12;
  if (!(decay_base > 0.0 && decay_base < 1.0)) return false;
  double sum = 0.0;
  for (const auto& row : trace.iterations) {
    if (!(row.beta >= 0.0)) return false;
    sum += row.beta;
    if (row.beta > 0.0 && !row.perturbation.empty()) {
      if (norm(row.perturbation) / row.beta > 1.0 + kRelative) return false;
    }
    double consumed = 0.0;
    for (const auto& stage : row.stages) {
      if (stage.step_norm > stage.gamma * (1.0 + kRelative) + stage.rounding_allowance) {
        return false;
      }
      consumed += stage.gamma_consumed;
    }
    if (!row.stages.empty() &&
        row.beta > consumed * (1.0 + kRelative) + row.rounding_allowance) {
      return false;
    }
  }
  return sum <= 1.0 / (1.0 - decay_base) + kSumTolerance;
}

std::vector<Point> random_starts(const TargetedProblemStructure& structure,
                                 std::size_t count, double scale,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Point> starts;
  starts.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Vector v(structure.dimension);
    for (double& x : v) x = scale * gauss(rng);
    Point p(std::move(v));
    if (!structure.in_omega(p) && structure.clamp_to_delta) {
      p = structure.clamp_to_delta(p);
    }
    if (!structure.in_omega(p)) {
      throw DomainViolation("random start could not be placed in Omega");
    }
    starts.push_back(std::move(p));
  }
  return starts;
}

}  // namespace superiorization
