#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dilatlab/frame.hpp"

namespace dilatlab {

/// Piecewise-constant controls on [0,1]: row j drives segment j with
/// velocity sum_k controls(j,k) X_k over the degree-1 fields.
struct HorizontalPath {
  Matrix controls;
  Point start;

  std::size_t segments() const { return static_cast<std::size_t>(controls.rows()); }
  /// Length for an orthonormal horizontal frame: (1/N) sum_j |u_j|.
  double length() const;
};

/// Endpoint of a horizontal path, RK4 with `substeps` steps per segment.
Point path_endpoint(const Frame& frame, const HorizontalPath& path, std::size_t substeps = 2);

struct CcOptions {
  std::size_t segments = 64;
  std::size_t starts = 8;
  std::size_t stages = 5;
  double rho_factor = 10.0;
  /// First-stage penalty, divided by the squared chart offset |y - x|^2.
  double rho_scale = 100.0;
  std::size_t substeps = 2;
  std::size_t max_iterations = 400;
  /// Endpoint residual required of the returned path.
  double feasibility_tol = 1e-6;
  std::uint64_t seed = 0;
};

struct CcResult {
  double length = 0.0;
  double endpoint_residual = 0.0;
  std::size_t best_start = 0;
  /// Length per start (infinity where the start did not reach the endpoint).
  std::vector<double> start_lengths;
  HorizontalPath path;
};

/// Carnot-Caratheodory distance by direct transcription: energy of N
/// piecewise-constant controls plus a quadratic endpoint penalty, minimized
/// by BFGS under penalty continuation from several deterministic starts, then
/// projected onto the endpoint constraint. The returned length belongs to an
/// actual horizontal path and is therefore an upper bound.
CcResult cc_distance_solve(const Frame& frame, const Point& x, const Point& y, const CcOptions& opt = {});
double cc_distance(const Frame& frame, const Point& x, const Point& y, const CcOptions& opt = {});

}  // namespace dilatlab
