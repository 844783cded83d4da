#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace superiorization {

/// Plain J-vector used for directions, gradients and perturbations.
using Vector = std::vector<double>;

/**
 * An element of the ambient space R^J. Every coordinate is finite and the
 * dimension is at least one; construction throws otherwise, so a Point in
 * hand is always a valid iterate.
 */
class Point {
 public:
  explicit Point(Vector coords);
  Point(std::initializer_list<double> coords);

  std::size_t dimension() const { return coords_.size(); }
  double operator[](std::size_t j) const { return coords_[j]; }
  std::span<const double> coords() const { return coords_; }
  const Vector& vector() const { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  Vector coords_;
};

double dot(std::span<const double> x, std::span<const double> y);
double norm(std::span<const double> x);
double distance(std::span<const double> x, std::span<const double> y);

/// x + scale * direction, as a Point (throws if the result is not finite).
Point displaced(const Point& x, double scale, std::span<const double> direction);

/// x - y componentwise.
Vector difference(std::span<const double> x, std::span<const double> y);

/// Throws std::invalid_argument unless the two sizes agree.
void require_same_dimension(std::size_t expected, std::size_t actual,
                            const char* what);

}  // namespace superiorization
