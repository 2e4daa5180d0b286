#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "dilatlab/vector_field.hpp"

namespace dilatlab {

/// Ordered adapted frame X_1..X_n with bracket degrees. Layer dims nu_j count
/// the fields of degree <= j; m = nu_1 is the rank of the distribution.
class Frame {
 public:
  Frame() = default;
  /// Validates: n fields of equal dimension n, degrees nondecreasing starting
  /// at 1 without gaps.
  Frame(std::vector<VectorField> fields, std::vector<int> degrees, Box chart_box,
        double injectivity_radius = 0.5);

  std::size_t dim() const { return fields_.size(); }
  std::size_t distribution_rank() const { return layer_dims_.front(); }
  std::size_t step() const { return layer_dims_.size(); }
  const std::vector<VectorField>& fields() const { return fields_; }
  const std::vector<int>& degrees() const { return degrees_; }
  const std::vector<std::size_t>& layer_dims() const { return layer_dims_; }
  const Box& chart_box() const { return chart_box_; }
  double injectivity_radius() const { return injectivity_radius_; }

  /// Columns X_i(x).
  Matrix matrix_at(const Point& x) const;
  /// sum_i a_i X_i(x)
  Point combine(const Eigen::VectorXd& a, const Point& x) const;
  /// Coordinate-wise a_i * eps^{deg X_i}.
  Eigen::VectorXd scale(double eps, const Eigen::VectorXd& a) const;

  /// Copy with replaced degrees and no validation; for negative tests.
  Frame with_degrees(std::vector<int> degrees) const;

 private:
  std::vector<VectorField> fields_;
  std::vector<int> degrees_;
  std::vector<std::size_t> layer_dims_;
  Box chart_box_;
  double injectivity_radius_ = 0.5;
};

struct AdaptedFrameOptions {
  std::size_t max_word_length = 6;
  /// Singular values below rank_tol * sigma_max count as zero.
  double rank_tol = 1e-8;
  Box chart_box = Box::cube(0, 0.0);  // empty means cube of half-width 10
  double injectivity_radius = 0.5;
};

/// Numerical rank via SVD.
std::size_t numerical_rank(const Matrix& m, double rel_tol = 1e-8);

/// Greedy adapted frame: right-nested brackets [X_{i1},[X_{i2},...]] are
/// enumerated by word length, then lexicographically, and kept when they raise
/// the rank at every probe.
Frame build_adapted_frame(const std::vector<VectorField>& generators, const std::vector<Point>& probes,
                          const AdaptedFrameOptions& opt = {});

/// Degree of each given field with respect to the bracket filtration of the
/// generators: the least j with X(y) in V^j(y) at every probe.
std::vector<int> derive_degrees(const std::vector<VectorField>& generators,
                                const std::vector<VectorField>& fields, const std::vector<Point>& probes,
                                const AdaptedFrameOptions& opt = {});

struct FlowOptions {
  std::size_t steps = 256;
};

/// Time-1 flow of sum a_i X_i starting at x, fixed-step RK4.
Point flow_exp(const Frame& frame, const Eigen::VectorXd& a, const Point& x, const FlowOptions& opt = {});

struct NewtonOptions {
  std::size_t max_iterations = 50;
  double tol = 1e-12;
  double fd_step = 1e-6;
  FlowOptions flow;
};

struct ChartSolution {
  Eigen::VectorXd coords;
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// Coordinates of the first kind: solves flow_exp(frame, y, w) = z by Newton
/// with a central-difference Jacobian.
ChartSolution chart_inverse_solve(const Frame& frame, const Point& w, const Point& z,
                                  const NewtonOptions& opt = {});
Eigen::VectorXd chart_inverse(const Frame& frame, const Point& w, const Point& z, const NewtonOptions& opt = {});

struct CompositionResult {
  Eigen::VectorXd P;
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// P with exp(sum a_i X_i)(x) = exp(sum P_i X_i)(exp(sum b_i X_i)(x)).
CompositionResult compose_P(const Frame& frame, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                            const Point& x, const NewtonOptions& opt = {});

}  // namespace dilatlab
