#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace dilatlab {

/// eps_k = start * 2^{-(k-1)}, k = 1..count. The default is 2^{-1} .. 2^{-12}.
std::vector<double> geometric_schedule(double start = 0.5, std::size_t count = 12);

/// Throws InvalidArgument unless the schedule is strictly decreasing in (0,1].
void validate_schedule(const std::vector<double>& eps);

struct ConvergenceConfig {
  /// Final successive difference must fall below this (absolute, after scaling).
  double tol = 1e-3;
  /// Differences at or below this are treated as numerical noise and count as
  /// decreasing.
  double noise_floor = 1e-10;
  /// Required contraction per step of successive differences over the tail.
  double min_ratio = 1.2;
  std::size_t tail = 4;
};

/// Extrapolated limit of an eps-indexed vector sequence.
struct LimitEstimate {
  std::vector<double> eps;
  std::vector<Eigen::VectorXd> values;
  /// Successive differences (norm), diffs[0] = 0.
  std::vector<double> diffs;
  Eigen::VectorXd extrapolated;
  double error = 0.0;
  bool converged = false;
  /// True when a Neville table entry was chosen.
  bool richardson = false;
  /// True when the linear-recurrence tail sum was chosen.
  bool recurrence = false;

  double scalar() const { return extrapolated[0]; }
};

/// Extrapolated limit of a sequence sampled along a decreasing schedule.
/// Candidates are the last value (error: the last difference), the entries
/// of a Neville table that removes the eps and eps^2 terms, admitted where
/// the differences shrink at the matching rate, and the tail sum of a linear
/// recurrence d_{k+1} = M d_k fitted to the differences. Each candidate's
/// error is its change from the previous step; the smallest error wins, so
/// entries before the rounding-dominated end of the schedule can be chosen.
LimitEstimate extrapolate(const std::vector<double>& eps, const std::vector<Eigen::VectorXd>& values,
                          const ConvergenceConfig& cfg = {});

LimitEstimate extrapolate_scalar(const std::vector<double>& eps, const std::vector<double>& values,
                                 const ConvergenceConfig& cfg = {});

/// Tail test on successive differences: the last one is at the noise floor,
/// or the largest of the tail - 1 before it exceeds it by min_ratio^(tail-1).
bool tail_decreasing(const std::vector<double>& diffs, const ConvergenceConfig& cfg);

}  // namespace dilatlab
