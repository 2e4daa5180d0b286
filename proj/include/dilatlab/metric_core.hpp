#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "dilatlab/errors.hpp"

namespace dilatlab {

/// A point in chart coordinates.
using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Builds a point from an initializer list; convenience for tests and tables.
Point make_point(std::initializer_list<double> coords);

bool is_finite(const Point& p);

/// Axis-aligned box in chart coordinates.
struct Box {
  Point lo;
  Point hi;

  std::size_t dim() const { return static_cast<std::size_t>(lo.size()); }
  bool contains(const Point& p) const;
  Box intersect(const Box& other) const;
  static Box cube(std::size_t dim, double half_width);
  static Box around(const Point& center, const Point& half_widths);
};

using DistanceFn = std::function<double(const Point&, const Point&)>;
/// Returns a box guaranteed to contain the closed ball B(center, radius).
using BallBoxFn = std::function<Box(const Point&, double)>;

/// A metric on a single chart. Handles are cheap to copy and safe to share
/// across threads as long as the wrapped callables are pure.
struct MetricSpace {
  std::size_t dim = 0;
  DistanceFn distance;
  Box chart_box;
  BallBoxFn ball_box;  // optional sampling hint

  Box sampling_box(const Point& center, double radius) const;
};

MetricSpace euclidean_space(std::size_t dim, double chart_half_width = 10.0);

/// Finite pointed metric space: symmetric zero-diagonal distance matrix plus
/// a marked base index.
class FinitePointedSpace {
 public:
  FinitePointedSpace() = default;
  /// Validates shape, symmetry, zero diagonal, nonnegativity, and base range.
  FinitePointedSpace(Matrix dmat, std::size_t base);

  std::size_t size() const { return static_cast<std::size_t>(dmat_.rows()); }
  std::size_t base() const { return base_; }
  const Matrix& dmat() const { return dmat_; }
  double operator()(std::size_t i, std::size_t j) const { return dmat_(i, j); }

  /// Largest triangle-inequality violation over all triples (0 when metric).
  double triangle_defect() const;
  /// max_i min_{j != i} d(i, j); 0 for singletons.
  double sampling_density() const;
  /// max_i d(base, i)
  double radius() const;

  FinitePointedSpace subspace(std::span<const std::size_t> indices, std::size_t base_pos) const;

  friend bool operator==(const FinitePointedSpace& a, const FinitePointedSpace& b) {
    return a.base_ == b.base_ && a.dmat_.rows() == b.dmat_.rows() && a.dmat_ == b.dmat_;
  }

 private:
  Matrix dmat_ = Matrix::Zero(1, 1);
  std::size_t base_ = 0;
};

struct SamplingConfig {
  std::uint64_t seed = 0;
  /// Candidates examined per requested point before giving up.
  std::size_t budget_factor = 200;
};

/// k-th point of the Halton sequence in [0,1)^dim (radical inverse in the
/// first dim primes). Index 0 is skipped by callers since it is the origin.
Point halton(std::uint64_t index, std::size_t dim);

/// Deterministic low-discrepancy sample of `count` points inside the closed
/// metric ball. Candidates are Halton points in the sampling box, starting at
/// index 1 + seed * 7919.
std::vector<Point> sample_ball(const MetricSpace& space, const Point& center, double radius,
                               std::size_t count, const SamplingConfig& cfg = {});

FinitePointedSpace restrict_to(const MetricSpace& space, std::span<const Point> pts,
                               std::size_t base_index);

/// Same as restrict_to, but locates `base` among `pts` (exact match).
FinitePointedSpace restrict_to(const MetricSpace& space, std::span<const Point> pts,
                               const Point& base);

FinitePointedSpace rescale(const FinitePointedSpace& fs, double factor);

/// d_a(x, y) = d(x, y)^a, 0 < a <= 1.
MetricSpace snowflake_distance(const MetricSpace& space, double a);

}  // namespace dilatlab
