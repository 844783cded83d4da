#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "superiorization/point.hpp"

namespace superiorization {

/// One stage n of the superiorizing operator inside outer iteration k.
struct StageRecord {
  std::size_t n = 0;
  /// gamma of the accepted candidate, or of the last rejected one.
  double gamma = 0.0;
  /// Sum of every gamma consumed by this stage, accepted or not.
  double gamma_consumed = 0.0;
  std::size_t candidates = 0;
  bool accepted = false;
  /// ||x^{k,n+1} - x^{k,n}||
  double step_norm = 0.0;
  /// Worst-case rounding in step_norm: forming x + gamma v and subtracting x
  /// back can each be off by half an ulp of the larger operand.
  double rounding_allowance = 0.0;
  double target_before = 0.0;
  double target_after = 0.0;
  std::int64_t ell_after = -1;
};

/**
 * Record for an emitted iterate x^k. The perturbation fields describe what
 * was applied to x^k before the next basic step, so the last record of a
 * truncated run carries beta = 0 and no stages.
 */
struct IterationRecord {
  std::size_t k = 0;
  double proximity = 0.0;
  double target = 0.0;
  std::int64_t ell = -1;
  /// ||x^{k,N} - x^k||
  double beta = 0.0;
  /// Rounding allowance of beta against the summed stage gammas.
  double rounding_allowance = 0.0;
  /// x^{k,N} - x^k, empty when nothing was applied.
  Vector perturbation;
  bool clamped = false;
  std::vector<StageRecord> stages;
};

struct IterationTrace {
  std::vector<IterationRecord> iterations;

  double sum_beta() const {
    double s = 0.0;
    for (const auto& r : iterations) s += r.beta;
    return s;
  }
};

}  // namespace superiorization
