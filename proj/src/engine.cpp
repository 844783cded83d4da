#include "superiorization/engine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace superiorization {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon();

double rounding_allowance(double origin_norm, double step) {
  return 2.0 * kUnitRoundoff * (origin_norm + step);
}

}  // namespace

std::string_view to_string(CandidateStrategy strategy) {
  switch (strategy) {
    case CandidateStrategy::GradientDirection:
      return "gradient";
    case CandidateStrategy::ComponentwiseSearch:
      return "componentwise";
  }
  return "unknown";
}

std::optional<CandidateStrategy> parse_strategy(std::string_view name) {
  if (name == "gradient") return CandidateStrategy::GradientDirection;
  if (name == "componentwise") return CandidateStrategy::ComponentwiseSearch;
  return std::nullopt;
}

void SuperiorizationConfig::validate() const {
  if (n_stages < 1) throw std::invalid_argument("N: must be >= 1");
  if (!(decay_base > 0.0 && decay_base < 1.0)) {
    throw std::invalid_argument("a: must lie in the open interval (0,1), got " +
                                std::to_string(decay_base));
  }
  if (max_candidates_per_stage < 1) {
    throw std::invalid_argument("M_max: must be >= 1");
  }
  if (k_max < 1) throw std::invalid_argument("k_max: must be >= 1");
  if (!(finite_difference_step > 0.0) || !std::isfinite(finite_difference_step)) {
    throw std::invalid_argument("h: must be a positive finite number");
  }
  if (!(gradient_tolerance >= 0.0)) {
    throw std::invalid_argument("gradient_tolerance: must be nonnegative");
  }
}

double gamma(std::int64_t ell, double decay_base) {
  if (!(decay_base > 0.0 && decay_base < 1.0)) {
    throw std::invalid_argument("gamma: decay base must lie in (0,1)");
  }
  if (ell < 0) throw std::invalid_argument("gamma: ell must be nonnegative");
  return std::pow(decay_base, static_cast<double>(ell));
}

Vector finite_difference_gradient(const TargetedProblemStructure& structure,
                                  const Point& x, double h) {
  Vector probe(x.vector());
  Vector grad(x.dimension());
  for (std::size_t j = 0; j < probe.size(); ++j) {
    const double xj = probe[j];
    probe[j] = xj + h;
    const double up = structure.target(Point(probe));
    probe[j] = xj - h;
    const double down = structure.target(Point(probe));
    probe[j] = xj;
    grad[j] = (up - down) / (2.0 * h);
  }
  return grad;
}

Vector propose_gradient_direction(const TargetedProblemStructure& structure,
                                  const Point& x,
                                  const SuperiorizationConfig& cfg) {
  require_same_dimension(structure.dimension, x.dimension(), "gradient");
  Vector g = structure.has_gradient()
                 ? structure.target_gradient(x)
                 : finite_difference_gradient(structure, x,
                                              cfg.finite_difference_step);
  require_same_dimension(x.dimension(), g.size(), "gradient");
  for (double gj : g) {
    if (!std::isfinite(gj)) {
      throw std::domain_error("target gradient is not finite at the current point");
    }
  }
  const double g_norm = norm(g);
  if (g_norm <= cfg.gradient_tolerance) return Vector(g.size(), 0.0);
  for (double& gj : g) gj = -gj / g_norm;
  // Rounding may leave ||v|| a few ulps above 1.
  while (norm(g) > 1.0) {
    for (double& gj : g) gj *= 1.0 - 0x1p-52;
  }
  return g;
}

std::optional<Vector> propose_componentwise(
    const TargetedProblemStructure& structure, const Point& x,
    std::size_t attempt) {
  require_same_dimension(structure.dimension, x.dimension(), "componentwise");
  const std::size_t dim = x.dimension();
  if (attempt >= 2 * dim) return std::nullopt;
  Vector v(dim, 0.0);
  v[attempt / 2] = (attempt % 2 == 0) ? 1.0 : -1.0;
  return v;
}

StageResult perturb_stage(const TargetedProblemStructure& structure,
                          const Point& x_kn, StageState state,
                          const SuperiorizationConfig& cfg) {
  StageRecord record;
  record.n = state.n;
  const double target_x = structure.evaluate_target(x_kn);
  record.target_before = target_x;
  record.target_after = target_x;

  Vector gradient_direction;
  if (cfg.strategy == CandidateStrategy::GradientDirection) {
    gradient_direction = propose_gradient_direction(structure, x_kn, cfg);
  }

  std::optional<Point> accepted;
  for (std::size_t m = 0; m < cfg.max_candidates_per_stage; ++m) {
    std::optional<Vector> v;
    if (cfg.strategy == CandidateStrategy::GradientDirection) {
      v = gradient_direction;
    } else {
      v = propose_componentwise(structure, x_kn, m);
      if (!v) break;
    }
    ++state.ell;
    const double step = gamma(state.ell, cfg.decay_base);
    ++record.candidates;
    record.gamma = step;
    record.gamma_consumed += step;

    Point z = displaced(x_kn, step, *v);
    if (!structure.in_delta(z)) continue;
    const double target_z = structure.evaluate_target(z);
    if (target_z <= target_x) {
      record.accepted = true;
      record.target_after = target_z;
      record.step_norm = distance(z.coords(), x_kn.coords());
      record.rounding_allowance = rounding_allowance(norm(x_kn.coords()), step);
      accepted.emplace(std::move(z));
      break;
    }
  }

  record.ell_after = state.ell;
  ++state.n;
  if (accepted) return {std::move(*accepted), state, record};
  return {x_kn, state, record};
}

SuperiorizedSequence::SuperiorizedSequence(TargetedProblemStructure structure,
                                           BasicAlgorithm algorithm,
                                           ProblemInstance problem, Point x0,
                                           SuperiorizationConfig cfg)
    : structure_(std::move(structure)),
      algorithm_(std::move(algorithm)),
      problem_(std::move(problem)),
      cfg_(cfg),
      start_(std::move(x0)) {
  structure_.validate();
  cfg_.validate();
  require_same_dimension(structure_.dimension, start_.dimension(), "x0");
  if (!structure_.in_omega(start_)) {
    throw DomainViolation("initial point is not in Omega");
  }
}

Point SuperiorizedSequence::next() {
  // State is committed only after every evaluation below has succeeded.
  std::optional<Point> next_point;
  StageState state = state_;
  IterationRecord finished;
  if (current_) {
    const Point& x_k = *current_;
    finished = trace_.iterations.back();
    state.k = finished.k;
    state.n = 0;
    Point x_kn = x_k;
    while (state.n < cfg_.n_stages) {
      StageResult stage = perturb_stage(structure_, x_kn, state, cfg_);
      finished.stages.push_back(stage.record);
      state = stage.state;
      x_kn = std::move(stage.point);
    }
    finished.ell = state.ell;
    finished.perturbation = difference(x_kn.coords(), x_k.coords());
    finished.beta = norm(finished.perturbation);
    finished.rounding_allowance = rounding_allowance(norm(x_k.coords()), 0.0);
    for (const auto& stage : finished.stages) {
      finished.rounding_allowance += stage.rounding_allowance;
    }
    next_point.emplace(
        apply_step(structure_, algorithm_, problem_, x_kn, finished.k + 1));
  } else {
    next_point.emplace(start_);
  }

  IterationRecord row;
  row.k = current_ ? finished.k + 1 : 0;
  row.proximity = structure_.evaluate_proximity(problem_, *next_point);
  row.target = structure_.evaluate_target(*next_point);
  row.ell = state.ell;

  if (current_) trace_.iterations.back() = std::move(finished);
  trace_.iterations.push_back(std::move(row));
  state_ = state;
  current_ = std::move(next_point);
  return *current_;
}

SuperiorizedSequence superiorized_iterate(
    const TargetedProblemStructure& structure, const BasicAlgorithm& algorithm,
    const ProblemInstance& problem, const Point& x0,
    const SuperiorizationConfig& cfg) {
  return SuperiorizedSequence(structure, algorithm, problem, x0, cfg);
}

PairResult run_pair(const TargetedProblemStructure& structure,
                    const BasicAlgorithm& algorithm,
                    const ProblemInstance& problem, const Point& x0,
                    double eps, const SuperiorizationConfig& cfg) {
  cfg.validate();
  BasicSequence basic = iterate_basic(structure, algorithm, problem, x0);
  SuperiorizedSequence sup =
      superiorized_iterate(structure, algorithm, problem, x0, cfg);
  PairResult result;
  result.basic = epsilon_output(structure, problem, eps, basic, cfg.k_max);
  result.superiorized = epsilon_output(structure, problem, eps, sup, cfg.k_max);
  result.basic_trace = basic.trace();
  result.superiorized_trace = sup.trace();
  return result;
}

}  // namespace superiorization
