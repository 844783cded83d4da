#pragma once

#include <cstddef>
#include <memory>
#include <random>
#include <vector>

#include "superiorization/core.hpp"
#include "superiorization/engine.hpp"
#include "superiorization/problems.hpp"

namespace testing {

using namespace superiorization;

/// One-dimensional structure whose proximity is the coordinate itself, so a
/// sequence of points doubles as a sequence of proximity values.
inline TargetedProblemStructure proximity_trace_structure() {
  TargetedProblemStructure s;
  s.dimension = 1;
  s.in_omega = [](const Point&) { return true; };
  s.in_delta = s.in_omega;
  s.proximity = [](const ProblemInstance&, const Point& x) { return x[0]; };
  s.target = [](const Point& x) { return x[0]; };
  return s;
}

/// Emits the given proximity values, then repeats the last one forever.
inline GeneratorSequence trace_sequence(std::vector<double> values) {
  auto data = std::make_shared<std::vector<double>>(std::move(values));
  auto i = std::make_shared<std::size_t>(0);
  return GeneratorSequence([data, i] {
    const std::size_t at = std::min(*i, data->size() - 1);
    ++*i;
    return Point{(*data)[at]};
  });
}

inline ProblemInstance dummy_instance() { return ProblemInstance("dummy", 0); }

/// Linear structure over R^J; for non-linear payloads the proximity falls
/// back to ||x|| so operators that ignore the problem can still be driven.
inline TargetedProblemStructure plain_structure(std::size_t dim,
                                                TargetFunctionSpec target = {}) {
  auto s = make_linear_structure(dim, target);
  s.proximity = [](const ProblemInstance& t, const Point& x) {
    if (t.holds<LinearFeasibilityProblem>()) {
      return residual_proximity(t.payload<LinearFeasibilityProblem>(), x);
    }
    return norm(x.coords());
  };
  return s;
}

inline BasicAlgorithm identity_algorithm() {
  return {"identity", [](const ProblemInstance&, const Point& x) { return x; }};
}

inline Point random_point(std::mt19937_64& rng, std::size_t dim, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vector v(dim);
  for (double& x : v) x = g(rng);
  return Point(std::move(v));
}

}  // namespace testing
