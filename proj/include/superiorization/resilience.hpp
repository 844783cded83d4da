#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "superiorization/core.hpp"
#include "superiorization/trace.hpp"

namespace superiorization {

/// beta_k = c * rho^k with v^k uniform in the unit ball.
struct PerturbationSpec {
  double c = 0.1;
  double rho = 0.9;
  std::uint64_t seed = 0;

  /// c >= 0 (c = 0 gives the unperturbed sequence), 0 < rho < 1.
  void validate() const;
  double beta(std::size_t k) const;
  /// c / (1 - rho)
  double series_bound() const;
};

struct PerturbationRecord {
  std::size_t k = 0;
  double beta_k = 0.0;
  Vector v_k;
  bool clamped = false;
};

/**
 * x^{k+1} = P_T(x^k + beta_k v^k) with the perturbed point clamped into
 * Delta whenever it leaves it.
 */
class PerturbedSequence final : public PointSequence {
 public:
  PerturbedSequence(TargetedProblemStructure structure, BasicAlgorithm algorithm,
                    ProblemInstance problem, Point x0, PerturbationSpec spec,
                    std::uint64_t trial_seed);

  Point next() override;
  const std::vector<PerturbationRecord>& perturbations() const {
    return perturbations_;
  }

 private:
  TargetedProblemStructure structure_;
  BasicAlgorithm algorithm_;
  ProblemInstance problem_;
  PerturbationSpec spec_;
  std::mt19937_64 rng_;
  Point start_;
  std::optional<Point> current_;
  std::size_t k_ = 0;
  std::vector<PerturbationRecord> perturbations_;
};

struct EpsilonCoverage {
  double eps = 0.0;
  std::size_t defined_starts = 0;
};

struct Condition1Record {
  std::optional<double> eps_found;
  std::size_t starts_tested = 0;
  bool all_defined = false;
  /// One entry per grid value examined, ascending.
  std::vector<EpsilonCoverage> coverage;
};

struct Condition2Trial {
  double eps = 0.0;
  double eps_prime = 0.0;
  std::uint64_t seed = 0;
  std::size_t start_index = 0;
  Vector start;
  bool defined = false;
  std::optional<std::size_t> index;
  std::size_t clamp_count = 0;
  double sum_beta = 0.0;
};

enum class Verdict { ConsistentWithResilience, CounterexampleFound };

struct ResilienceReport {
  Condition1Record condition1;
  std::vector<Condition2Trial> condition2;
  bool condition1_holds_at_eps = false;
  Verdict verdict = Verdict::ConsistentWithResilience;
  /// Reproducing configuration for a counterexample; empty otherwise.
  std::string detail;
  std::optional<Condition2Trial> counterexample;
};

/**
 * Scans eps_grid in ascending order and reports the smallest eps for which
 * every start has a defined epsilon-output within k_max iterations.
 */
Condition1Record probe_condition1(const TargetedProblemStructure& structure,
                                  const BasicAlgorithm& algorithm,
                                  const ProblemInstance& problem,
                                  std::vector<double> eps_grid,
                                  const std::vector<Point>& starts,
                                  std::size_t k_max);

/// Trial t starts from starts[t % starts.size()] and draws v^k from the
/// seed spec.seed + t.
Condition2Trial run_condition2_trial(const TargetedProblemStructure& structure,
                                     const BasicAlgorithm& algorithm,
                                     const ProblemInstance& problem, double eps,
                                     double eps_prime, std::size_t k_max,
                                     const PerturbationSpec& spec,
                                     std::uint64_t trial_seed, const Point& start,
                                     std::size_t start_index = 0);

std::vector<Condition2Trial> probe_condition2(
    const TargetedProblemStructure& structure, const BasicAlgorithm& algorithm,
    const ProblemInstance& problem, double eps, double eps_prime,
    std::size_t trials, std::size_t k_max, const PerturbationSpec& spec,
    const std::vector<Point>& starts);

/// Runs both probes and forms a verdict. An Undefined result is always
/// qualified by k_max: it is a counterexample candidate, not a proof.
ResilienceReport assess_resilience(const TargetedProblemStructure& structure,
                                   const BasicAlgorithm& algorithm,
                                   const ProblemInstance& problem,
                                   const std::vector<double>& eps_grid,
                                   double eps, double eps_prime,
                                   std::size_t trials, std::size_t k_max,
                                   const PerturbationSpec& spec,
                                   const std::vector<Point>& starts);

/// Sum of beta_k within 1/(1-a) (+1e-9), every aggregate perturbation of norm
/// at most beta_k, and every stage step within its gamma.
bool verify_trace_boundedness(const IterationTrace& trace, double decay_base);

/// Starts drawn from N(0, scale^2) per coordinate, clamped into Delta.
std::vector<Point> random_starts(const TargetedProblemStructure& structure,
                                 std::size_t count, double scale,
                                 std::uint64_t seed);

}  // namespace superiorization
