#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "superiorization/core.hpp"
#include "superiorization/trace.hpp"

namespace superiorization {

enum class CandidateStrategy { GradientDirection, ComponentwiseSearch };

std::string_view to_string(CandidateStrategy strategy);
/// Accepts "gradient" and "componentwise"; nullopt otherwise.
std::optional<CandidateStrategy> parse_strategy(std::string_view name);

struct SuperiorizationConfig {
  std::size_t n_stages = 5;
  double decay_base = 0.995;
  CandidateStrategy strategy = CandidateStrategy::GradientDirection;
  std::size_t max_candidates_per_stage = 20;
  std::size_t k_max = 10000;
  double finite_difference_step = 1e-6;
  double gradient_tolerance = 1e-12;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Counters of the skeleton. ell starts at -1 and is incremented before
/// every use of gamma, for the whole run.
struct StageState {
  std::size_t k = 0;
  std::size_t n = 0;
  std::int64_t ell = -1;
};

/// gamma_ell = a^ell, 0 < a < 1.
double gamma(std::int64_t ell, double decay_base);

/// Normalized negative gradient of the target at x, or the zero vector when
/// the gradient norm is at or below cfg.gradient_tolerance.
Vector propose_gradient_direction(const TargetedProblemStructure& structure,
                                  const Point& x,
                                  const SuperiorizationConfig& cfg = {});

/// Central finite-difference gradient of the target with step h.
Vector finite_difference_gradient(const TargetedProblemStructure& structure,
                                  const Point& x, double h);

/// +e1, -e1, +e2, -e2, ... indexed by attempt; nullopt once attempt >= 2J.
std::optional<Vector> propose_componentwise(
    const TargetedProblemStructure& structure, const Point& x,
    std::size_t attempt);

struct StageResult {
  Point point;
  StageState state;
  StageRecord record;
};

/**
 * One stage x^{k,n} -> x^{k,n+1}. Tries at most max_candidates_per_stage
 * provisional candidates z = x + gamma_ell v, incrementing ell for each, and
 * accepts the first z in Delta with target(z) <= target(x). If none is
 * accepted the point is returned unchanged.
 */
StageResult perturb_stage(const TargetedProblemStructure& structure,
                          const Point& x_kn, StageState state,
                          const SuperiorizationConfig& cfg);

/**
 * The superiorized version of a basic algorithm: x^{k+1} = P_T S x^k where
 * S is N perturbation stages. Emits x^0, x^1, ... lazily.
 */
class SuperiorizedSequence final : public PointSequence {
 public:
  SuperiorizedSequence(TargetedProblemStructure structure,
                       BasicAlgorithm algorithm, ProblemInstance problem,
                       Point x0, SuperiorizationConfig cfg);

  Point next() override;

  const IterationTrace& trace() const { return trace_; }
  const StageState& state() const { return state_; }

 private:
  TargetedProblemStructure structure_;
  BasicAlgorithm algorithm_;
  ProblemInstance problem_;
  SuperiorizationConfig cfg_;
  Point start_;
  std::optional<Point> current_;
  StageState state_;
  IterationTrace trace_;
};

SuperiorizedSequence superiorized_iterate(
    const TargetedProblemStructure& structure, const BasicAlgorithm& algorithm,
    const ProblemInstance& problem, const Point& x0,
    const SuperiorizationConfig& cfg);

struct PairResult {
  EpsilonOutputResult basic;
  EpsilonOutputResult superiorized;
  IterationTrace basic_trace;
  IterationTrace superiorized_trace;
};

/// Epsilon-outputs of the basic and superiorized sequences from the same x0,
/// both truncated at cfg.k_max.
PairResult run_pair(const TargetedProblemStructure& structure,
                    const BasicAlgorithm& algorithm,
                    const ProblemInstance& problem, const Point& x0,
                    double eps, const SuperiorizationConfig& cfg);

}  // namespace superiorization
