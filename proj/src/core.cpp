#include "superiorization/core.hpp"

#include <cmath>

namespace superiorization {

NonFiniteIterate::NonFiniteIterate(std::size_t k, const std::string& detail)
    : std::runtime_error("non-finite iterate at iteration " +
                         std::to_string(k) + ": " + detail),
      iteration_(k) {}

void TargetedProblemStructure::validate() const {
  if (dimension == 0) {
    throw std::invalid_argument("TargetedProblemStructure: dimension must be >= 1");
  }
  if (!in_omega || !in_delta || !proximity || !target) {
    throw std::invalid_argument(
        "TargetedProblemStructure: in_omega, in_delta, proximity and target are "
        "required");
  }
}

double TargetedProblemStructure::evaluate_proximity(
    const ProblemInstance& problem, const Point& x) const {
  require_same_dimension(dimension, x.dimension(), "proximity");
  const double value = proximity(problem, x);
  if (std::isnan(value) || value < 0.0) {
    throw DomainViolation("proximity of problem '" + problem.id() +
                          "' returned a negative or NaN value");
  }
  return value;
}

double TargetedProblemStructure::evaluate_target(const Point& x) const {
  require_same_dimension(dimension, x.dimension(), "target");
  return target(x);
}

Point apply_step(const TargetedProblemStructure& structure,
                 const BasicAlgorithm& algorithm,
                 const ProblemInstance& problem, const Point& x,
                 std::size_t k) {
  std::optional<Point> out;
  try {
    out.emplace(algorithm.step(problem, x));
  } catch (const std::domain_error& e) {
    if (dynamic_cast<const DomainViolation*>(&e) != nullptr) throw;
    throw NonFiniteIterate(k, e.what());
  }
  if (!structure.in_omega(*out)) {
    throw DomainViolation("basic algorithm '" + algorithm.name +
                          "' produced a point outside Omega at iteration " +
                          std::to_string(k));
  }
  return std::move(*out);
}

BasicSequence::BasicSequence(TargetedProblemStructure structure,
                             BasicAlgorithm algorithm, ProblemInstance problem,
                             Point x0)
    : structure_(std::move(structure)),
      algorithm_(std::move(algorithm)),
      problem_(std::move(problem)),
      start_(std::move(x0)) {
  structure_.validate();
  require_same_dimension(structure_.dimension, start_.dimension(), "x0");
  if (!structure_.in_omega(start_)) {
    throw DomainViolation("initial point is not in Omega");
  }
}

Point BasicSequence::next() {
  const std::size_t k = current_ ? k_ + 1 : 0;
  Point next_point = current_ ? apply_step(structure_, algorithm_, problem_, *current_, k)
                              : start_;
  IterationRecord row;
  row.k = k;
  row.proximity = structure_.evaluate_proximity(problem_, next_point);
  row.target = structure_.evaluate_target(next_point);
  trace_.iterations.push_back(std::move(row));
  k_ = k;
  current_.emplace(std::move(next_point));
  return *current_;
}

BasicSequence iterate_basic(const TargetedProblemStructure& structure,
                            const BasicAlgorithm& algorithm,
                            const ProblemInstance& problem, const Point& x0) {
  return BasicSequence(structure, algorithm, problem, x0);
}

EpsilonOutputResult epsilon_output(const TargetedProblemStructure& structure,
                                   const ProblemInstance& problem, double eps,
                                   PointSequence& sequence, std::size_t k_max) {
  if (!(eps >= 0.0)) {
    throw std::invalid_argument("epsilon_output: eps must be nonnegative");
  }
  if (k_max == 0) {
    throw std::invalid_argument("epsilon_output: k_max must be positive");
  }
  EpsilonOutputResult result;
  for (std::size_t k = 0; k <= k_max; ++k) {
    Point x = sequence.next();
    ++result.iterations_examined;
    if (structure.evaluate_proximity(problem, x) <= eps) {
      result.status = OutputStatus::Defined;
      result.index = k;
      result.point.emplace(std::move(x));
      return result;
    }
  }
  return result;
}

}  // namespace superiorization
