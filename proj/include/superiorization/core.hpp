#pragma once

#include <any>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "superiorization/point.hpp"
#include "superiorization/trace.hpp"

namespace superiorization {

/// A point left the set an operator or predicate is declared on.
class DomainViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterate became non-finite; carries the offending iteration index.
class NonFiniteIterate : public std::runtime_error {
 public:
  NonFiniteIterate(std::size_t k, const std::string& detail);
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

/**
 * A problem T from the problem set. The payload is whatever the concrete
 * proximity and basic operator need (for instance a linear system); it is
 * shared and immutable, so copies are cheap.
 */
class ProblemInstance {
 public:
  template <typename Payload>
  ProblemInstance(std::string id, Payload payload)
      : id_(std::move(id)),
        payload_(std::make_shared<const std::any>(std::move(payload))) {}

  const std::string& id() const { return id_; }

  template <typename Payload>
  const Payload& payload() const {
    const auto* p = std::any_cast<Payload>(payload_.get());
    if (p == nullptr) {
      throw std::invalid_argument("ProblemInstance '" + id_ +
                                  "': payload has an unexpected type");
    }
    return *p;
  }

  template <typename Payload>
  bool holds() const {
    return std::any_cast<Payload>(payload_.get()) != nullptr;
  }

 private:
  std::string id_;
  std::shared_ptr<const std::any> payload_;
};

/**
 * The quadruple (Omega, problem set, proximity, target) over R^J together
 * with the enclosing set Delta. Omega and Delta are membership predicates;
 * every point of Omega must also be in Delta.
 *
 * target_gradient and clamp_to_delta are optional. Without an analytic
 * gradient the engine falls back to finite differences; clamp_to_delta is
 * only needed by the resilience probe to keep Eq.-(1)-style perturbed points
 * inside Delta.
 */
struct TargetedProblemStructure {
  std::size_t dimension = 0;
  std::function<bool(const Point&)> in_omega;
  std::function<bool(const Point&)> in_delta;
  std::function<double(const ProblemInstance&, const Point&)> proximity;
  std::function<double(const Point&)> target;
  std::function<Vector(const Point&)> target_gradient;
  std::function<Point(const Point&)> clamp_to_delta;

  /// Throws std::invalid_argument if a required member is missing.
  void validate() const;

  bool has_gradient() const { return static_cast<bool>(target_gradient); }

  /// proximity(T, x) with dimension and sign checks.
  double evaluate_proximity(const ProblemInstance& problem,
                            const Point& x) const;
  double evaluate_target(const Point& x) const;
};

/// The operator family P_T : Delta -> Omega.
struct BasicAlgorithm {
  std::string name;
  std::function<Point(const ProblemInstance&, const Point&)> step;
};

/// An unbounded, lazily evaluated sequence of iterates.
class PointSequence {
 public:
  virtual ~PointSequence() = default;
  /// Returns x^0 on the first call, x^1 on the second, and so on.
  virtual Point next() = 0;
};

/// Wraps a callable producing successive points.
class GeneratorSequence final : public PointSequence {
 public:
  explicit GeneratorSequence(std::function<Point()> generator)
      : generator_(std::move(generator)) {}
  Point next() override { return generator_(); }

 private:
  std::function<Point()> generator_;
};

/// (P_T)^k x0 for k = 0, 1, 2, ...; records one trace row per emitted point.
class BasicSequence final : public PointSequence {
 public:
  BasicSequence(TargetedProblemStructure structure, BasicAlgorithm algorithm,
                ProblemInstance problem, Point x0);

  Point next() override;
  const IterationTrace& trace() const { return trace_; }

 private:
  TargetedProblemStructure structure_;
  BasicAlgorithm algorithm_;
  ProblemInstance problem_;
  std::optional<Point> current_;
  Point start_;
  std::size_t k_ = 0;
  IterationTrace trace_;
};

/// Rejects x0 outside Omega with DomainViolation.
BasicSequence iterate_basic(const TargetedProblemStructure& structure,
                            const BasicAlgorithm& algorithm,
                            const ProblemInstance& problem, const Point& x0);

/// Applies P_T and enforces that the result lies in Omega.
Point apply_step(const TargetedProblemStructure& structure,
                 const BasicAlgorithm& algorithm,
                 const ProblemInstance& problem, const Point& x,
                 std::size_t k);

enum class OutputStatus { Defined, Undefined };

struct EpsilonOutputResult {
  OutputStatus status = OutputStatus::Undefined;
  std::optional<Point> point;
  std::optional<std::size_t> index;
  std::size_t iterations_examined = 0;

  bool defined() const { return status == OutputStatus::Defined; }
};

/**
 * The epsilon-output O(T, eps, R): the first x^K with proximity <= eps.
 * Indices 0..k_max are examined; if none qualifies the result is Undefined
 * with iterations_examined = k_max + 1.
 */
EpsilonOutputResult epsilon_output(const TargetedProblemStructure& structure,
                                   const ProblemInstance& problem, double eps,
                                   PointSequence& sequence, std::size_t k_max);

}  // namespace superiorization
