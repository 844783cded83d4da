#include "superiorization/point.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace superiorization {

Point::Point(Vector coords) : coords_(std::move(coords)) {
  if (coords_.empty()) {
    throw std::invalid_argument("Point: dimension must be at least 1");
  }
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    if (!std::isfinite(coords_[j])) {
      throw std::domain_error("Point: coordinate " + std::to_string(j) +
                              " is not finite");
    }
  }
}

Point::Point(std::initializer_list<double> coords) : Point(Vector(coords)) {}

double dot(std::span<const double> x, std::span<const double> y) {
  require_same_dimension(x.size(), y.size(), "dot");
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * y[j];
  return s;
}

double norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double distance(std::span<const double> x, std::span<const double> y) {
  require_same_dimension(x.size(), y.size(), "distance");
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - y[j];
    s += d * d;
  }
  return std::sqrt(s);
}

Point displaced(const Point& x, double scale,
                std::span<const double> direction) {
  require_same_dimension(x.dimension(), direction.size(), "displaced");
  Vector out(x.vector());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += scale * direction[j];
  return Point(std::move(out));
}

Vector difference(std::span<const double> x, std::span<const double> y) {
  require_same_dimension(x.size(), y.size(), "difference");
  Vector out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] - y[j];
  return out;
}

void require_same_dimension(std::size_t expected, std::size_t actual,
                            const char* what) {
  if (expected != actual) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(expected) + " vs " +
                                std::to_string(actual) + ")");
  }
}

}  // namespace superiorization
