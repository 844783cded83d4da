#include "superiorization/problems.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace superiorization {

std::string_view to_string(RowRelation relation) {
  return relation == RowRelation::Equality ? "eq" : "le";
}

std::optional<RowRelation> parse_relation(std::string_view name) {
  if (name == "eq" || name == "equality") return RowRelation::Equality;
  if (name == "le" || name == "less_equal") return RowRelation::LessOrEqual;
  return std::nullopt;
}

bool Box::contains(std::span<const double> x) const {
  if (x.size() != lower.size()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lower[j] || x[j] > upper[j]) return false;
  }
  return true;
}

Point Box::clamp(const Point& x) const {
  require_same_dimension(lower.size(), x.dimension(), "Box::clamp");
  Vector out(x.vector());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = std::clamp(out[j], lower[j], upper[j]);
  }
  return Point(std::move(out));
}

LinearFeasibilityProblem::LinearFeasibilityProblem(
    std::vector<Vector> rows, Vector rhs, std::vector<RowRelation> relations,
    std::optional<Box> box)
    : rows_(std::move(rows)),
      rhs_(std::move(rhs)),
      relations_(std::move(relations)),
      box_(std::move(box)) {
  if (rows_.empty()) throw std::invalid_argument("A: needs at least one row");
  cols_ = rows_.front().size();
  if (cols_ == 0) throw std::invalid_argument("A: needs at least one column");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() != cols_) {
      throw std::invalid_argument("A: row " + std::to_string(i) + " has " +
                                  std::to_string(rows_[i].size()) +
                                  " entries, expected " + std::to_string(cols_));
    }
    bool nonzero = false;
    for (double v : rows_[i]) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("A: row " + std::to_string(i) +
                                    " has a non-finite entry");
      }
      nonzero = nonzero || v != 0.0;
    }
    if (!nonzero) {
      throw std::invalid_argument("A: row " + std::to_string(i) + " is zero");
    }
  }
  if (rhs_.size() != rows_.size()) {
    throw std::invalid_argument("b: length " + std::to_string(rhs_.size()) +
                                " does not match the " +
                                std::to_string(rows_.size()) + " rows of A");
  }
  for (double v : rhs_) {
    if (!std::isfinite(v)) throw std::invalid_argument("b: non-finite entry");
  }
  if (relations_.size() != rows_.size()) {
    throw std::invalid_argument("relations: expected one per row of A");
  }
  if (box_) {
    if (box_->lower.size() != cols_ || box_->upper.size() != cols_) {
      throw std::invalid_argument("box: bounds must have one entry per column");
    }
    for (std::size_t j = 0; j < cols_; ++j) {
      if (!(box_->lower[j] <= box_->upper[j])) {
        throw std::invalid_argument("box: lower[" + std::to_string(j) +
                                    "] exceeds upper[" + std::to_string(j) + "]");
      }
    }
  }
}

double residual_proximity(const LinearFeasibilityProblem& problem,
                          const Point& x) {
  require_same_dimension(problem.cols(), x.dimension(), "residual_proximity");
  double sum = 0.0;
  for (std::size_t i = 0; i < problem.rows(); ++i) {
    double r = dot(problem.row(i), x.coords()) - problem.rhs(i);
    if (problem.relation(i) == RowRelation::LessOrEqual) r = std::max(0.0, r);
    sum += r * r;
  }
  return std::sqrt(sum);
}

namespace {

void project_in_place(std::span<const double> a, double b, RowRelation relation,
                      Vector& x) {
  const double excess = dot(a, x) - b;
  if (relation == RowRelation::LessOrEqual && excess <= 0.0) return;
  const double factor = excess / dot(a, a);
  for (std::size_t j = 0; j < x.size(); ++j) x[j] -= factor * a[j];
}

Point finish(const LinearFeasibilityProblem& problem, Vector x) {
  Point out(std::move(x));
  if (problem.box()) return problem.box()->clamp(out);
  return out;
}

}  // namespace

Point project_row(std::span<const double> a, double b, RowRelation relation,
                  const Point& x) {
  require_same_dimension(a.size(), x.dimension(), "project_row");
  if (dot(a, a) == 0.0) throw std::invalid_argument("project_row: zero row");
  Vector out(x.vector());
  project_in_place(a, b, relation, out);
  return Point(std::move(out));
}

Point sequential_projection_step(const LinearFeasibilityProblem& problem,
                                 const Point& x) {
  require_same_dimension(problem.cols(), x.dimension(), "sequential step");
  Vector out(x.vector());
  for (std::size_t i = 0; i < problem.rows(); ++i) {
    project_in_place(problem.row(i), problem.rhs(i), problem.relation(i), out);
  }
  return finish(problem, std::move(out));
}

Point simultaneous_projection_step(const LinearFeasibilityProblem& problem,
                                   const Point& x) {
  require_same_dimension(problem.cols(), x.dimension(), "simultaneous step");
  Vector mean(x.dimension(), 0.0);
  Vector projected;
  for (std::size_t i = 0; i < problem.rows(); ++i) {
    projected = x.vector();
    project_in_place(problem.row(i), problem.rhs(i), problem.relation(i),
                     projected);
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += projected[j];
  }
  const double inv = 1.0 / static_cast<double>(problem.rows());
  for (double& v : mean) v *= inv;
  return finish(problem, std::move(mean));
}

std::string_view to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::SquaredNorm:
      return "squared_norm";
    case TargetKind::WeightedL1:
      return "weighted_l1";
    case TargetKind::TotalVariation1D:
      return "total_variation_1d";
  }
  return "unknown";
}

std::optional<TargetKind> parse_target_kind(std::string_view name) {
  if (name == "squared_norm") return TargetKind::SquaredNorm;
  if (name == "weighted_l1") return TargetKind::WeightedL1;
  if (name == "total_variation_1d") return TargetKind::TotalVariation1D;
  return std::nullopt;
}

void TargetFunctionSpec::validate(std::size_t dimension) const {
  if (kind != TargetKind::WeightedL1) return;
  if (weights.size() != dimension) {
    throw std::invalid_argument("weights: expected " + std::to_string(dimension) +
                                " entries, got " + std::to_string(weights.size()));
  }
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("weights: must be nonnegative and finite");
    }
  }
}

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

double target_value(const TargetFunctionSpec& spec, const Point& x) {
  const auto c = x.coords();
  switch (spec.kind) {
    case TargetKind::SquaredNorm:
      return dot(c, c);
    case TargetKind::WeightedL1: {
      require_same_dimension(spec.weights.size(), c.size(), "weighted_l1");
      double s = 0.0;
      for (std::size_t j = 0; j < c.size(); ++j) s += spec.weights[j] * std::abs(c[j]);
      return s;
    }
    case TargetKind::TotalVariation1D: {
      double s = 0.0;
      for (std::size_t j = 0; j + 1 < c.size(); ++j) s += std::abs(c[j + 1] - c[j]);
      return s;
    }
  }
  throw std::invalid_argument("target_value: unknown kind");
}

Vector target_gradient_value(const TargetFunctionSpec& spec, const Point& x) {
  const auto c = x.coords();
  Vector g(c.size(), 0.0);
  switch (spec.kind) {
    case TargetKind::SquaredNorm:
      for (std::size_t j = 0; j < c.size(); ++j) g[j] = 2.0 * c[j];
      return g;
    case TargetKind::WeightedL1:
      require_same_dimension(spec.weights.size(), c.size(), "weighted_l1");
      for (std::size_t j = 0; j < c.size(); ++j) g[j] = spec.weights[j] * sign(c[j]);
      return g;
    case TargetKind::TotalVariation1D:
      // d/dx_j |x_{j+1} - x_j| = -s_j, d/dx_{j+1} = +s_j
      for (std::size_t j = 0; j + 1 < c.size(); ++j) {
        const double s = sign(c[j + 1] - c[j]);
        g[j] -= s;
        g[j + 1] += s;
      }
      return g;
  }
  throw std::invalid_argument("target_gradient_value: unknown kind");
}

ProblemInstance make_instance(std::string id, LinearFeasibilityProblem problem) {
  return ProblemInstance(std::move(id), std::move(problem));
}

TargetedProblemStructure make_linear_structure(std::size_t dimension,
                                               const TargetFunctionSpec& target,
                                               std::optional<Box> box) {
  target.validate(dimension);
  TargetedProblemStructure s;
  s.dimension = dimension;
  if (box) {
    auto shared = std::make_shared<const Box>(std::move(*box));
    s.in_omega = [shared](const Point& x) { return shared->contains(x.coords()); };
    s.clamp_to_delta = [shared](const Point& x) { return shared->clamp(x); };
  } else {
    s.in_omega = [dimension](const Point& x) { return x.dimension() == dimension; };
    s.clamp_to_delta = [](const Point& x) { return x; };
  }
  s.in_delta = s.in_omega;
  s.proximity = [](const ProblemInstance& problem, const Point& x) {
    return residual_proximity(problem.payload<LinearFeasibilityProblem>(), x);
  };
  s.target = [target](const Point& x) { return target_value(target, x); };
  s.target_gradient = [target](const Point& x) {
    return target_gradient_value(target, x);
  };
  return s;
}

BasicAlgorithm sequential_projections() {
  return {"sequential", [](const ProblemInstance& problem, const Point& x) {
            return sequential_projection_step(
                problem.payload<LinearFeasibilityProblem>(), x);
          }};
}

BasicAlgorithm simultaneous_projections() {
  return {"simultaneous", [](const ProblemInstance& problem, const Point& x) {
            return simultaneous_projection_step(
                problem.payload<LinearFeasibilityProblem>(), x);
          }};
}

std::string_view to_string(AlgorithmKind kind) {
  return kind == AlgorithmKind::Sequential ? "sequential" : "simultaneous";
}

std::optional<AlgorithmKind> parse_algorithm(std::string_view name) {
  if (name == "sequential") return AlgorithmKind::Sequential;
  if (name == "simultaneous") return AlgorithmKind::Simultaneous;
  return std::nullopt;
}

BasicAlgorithm make_algorithm(AlgorithmKind kind) {
  return kind == AlgorithmKind::Sequential ? sequential_projections()
                                           : simultaneous_projections();
}

LinearFeasibilityProblem random_consistent_system(std::size_t rows,
                                                  std::size_t cols,
                                                  RowRelation relation,
                                                  std::uint64_t seed,
                                                  double witness_scale,
                                                  double slack) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vector> a(rows, Vector(cols));
  for (auto& row : a) {
    for (double& v : row) v = gauss(rng);
  }
  Vector witness(cols);
  for (double& v : witness) v = witness_scale * gauss(rng);
  Vector b(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    b[i] = dot(a[i], witness);
    if (relation == RowRelation::LessOrEqual) b[i] += slack * unit(rng);
  }
  return LinearFeasibilityProblem(std::move(a), std::move(b),
                                  std::vector<RowRelation>(rows, relation));
}

}  // namespace superiorization
