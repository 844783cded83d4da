#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "superiorization/core.hpp"

namespace superiorization {

enum class RowRelation { Equality, LessOrEqual };

std::string_view to_string(RowRelation relation);
/// "eq"/"equality" and "le"/"less_equal"; nullopt otherwise.
std::optional<RowRelation> parse_relation(std::string_view name);

struct Box {
  Vector lower;
  Vector upper;

  bool contains(std::span<const double> x) const;
  Point clamp(const Point& x) const;
};

/**
 * Rows <a_i, x> = b_i or <a_i, x> <= b_i, with an optional box that defines
 * both Omega and Delta. A is dense and row-major.
 */
class LinearFeasibilityProblem {
 public:
  LinearFeasibilityProblem(std::vector<Vector> rows, Vector rhs,
                           std::vector<RowRelation> relations,
                           std::optional<Box> box = std::nullopt);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t i) const { return rows_[i]; }
  double rhs(std::size_t i) const { return rhs_[i]; }
  RowRelation relation(std::size_t i) const { return relations_[i]; }
  const std::optional<Box>& box() const { return box_; }

 private:
  std::vector<Vector> rows_;
  Vector rhs_;
  std::vector<RowRelation> relations_;
  std::optional<Box> box_;
  std::size_t cols_ = 0;
};

/// Euclidean norm of the row violations.
double residual_proximity(const LinearFeasibilityProblem& problem,
                          const Point& x);

/// Orthogonal projection onto the hyperplane or half-space of one row.
Point project_row(std::span<const double> a, double b, RowRelation relation,
                  const Point& x);

/// One Kaczmarz sweep over the rows in index order, then box clamping.
Point sequential_projection_step(const LinearFeasibilityProblem& problem,
                                 const Point& x);

/// Cimmino step: mean of all row projections of x, then box clamping.
Point simultaneous_projection_step(const LinearFeasibilityProblem& problem,
                                   const Point& x);

enum class TargetKind { SquaredNorm, WeightedL1, TotalVariation1D };

std::string_view to_string(TargetKind kind);
std::optional<TargetKind> parse_target_kind(std::string_view name);

struct TargetFunctionSpec {
  TargetKind kind = TargetKind::SquaredNorm;
  /// WeightedL1 only; nonnegative and finite.
  Vector weights;

  void validate(std::size_t dimension) const;
};

double target_value(const TargetFunctionSpec& spec, const Point& x);
/// Gradient, or the subgradient with 0 at kinks for the nonsmooth kinds.
Vector target_gradient_value(const TargetFunctionSpec& spec, const Point& x);

/// Problem instance with a LinearFeasibilityProblem payload.
ProblemInstance make_instance(std::string id, LinearFeasibilityProblem problem);

/**
 * Structure over R^J (or over the box, when one is given) with residual
 * proximity and the given target. The analytic gradient is attached.
 */
TargetedProblemStructure make_linear_structure(std::size_t dimension,
                                               const TargetFunctionSpec& target,
                                               std::optional<Box> box = std::nullopt);

BasicAlgorithm sequential_projections();
BasicAlgorithm simultaneous_projections();

enum class AlgorithmKind { Sequential, Simultaneous };
std::string_view to_string(AlgorithmKind kind);
std::optional<AlgorithmKind> parse_algorithm(std::string_view name);
BasicAlgorithm make_algorithm(AlgorithmKind kind);

/**
 * Random consistent system: A and a witness point drawn from N(0,1), the
 * witness scaled by witness_scale. Equality rows use b = A w; LessOrEqual
 * rows use b = A w + s with s uniform on [0, slack).
 */
LinearFeasibilityProblem random_consistent_system(std::size_t rows,
                                                  std::size_t cols,
                                                  RowRelation relation,
                                                  std::uint64_t seed,
                                                  double witness_scale = 1.0,
                                                  double slack = 0.0);

}  // namespace superiorization
