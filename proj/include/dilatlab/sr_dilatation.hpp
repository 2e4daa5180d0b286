#pragma once

#include <string>
#include <vector>

#include "dilatlab/dilatation.hpp"
#include "dilatlab/frame.hpp"
#include "dilatlab/limits.hpp"

namespace dilatlab {

/// delta^x_eps(exp(sum a_i X_i)(x)) = exp(sum eps^{deg X_i} a_i X_i)(x), with
/// the coefficients a recovered by chart_inverse. `space` supplies the CC
/// distance (exact for Heisenberg, the transcription solver otherwise).
DilatationStructure sr_dilatation(const Frame& frame, MetricSpace space, std::string name,
                                  const NewtonOptions& newton = {});

struct OrderCheckOptions {
  std::vector<std::size_t> steps = {4, 8, 16};
  std::size_t reference_steps = 1024;
  /// Residuals at or below this count as converged to rounding.
  double floor = 1e-12;
  double min_ratio = 8.0;
  NewtonOptions newton;
};

/// A2 against the integrator: for each step count N, the composite
/// dil_N(eps, x, dil_N(mu, x, u)) is compared with the fine-step
/// dil(eps mu, x, u). Passes when every doubling of N shrinks the residual by
/// min_ratio or the residual sits at the floor. The table holds (1/N, residual).
Report check_A2_order(const Frame& frame, const std::vector<std::pair<Point, Point>>& samples,
                      const std::vector<std::pair<double, double>>& eps_mu, const OrderCheckOptions& opt = {});

struct NormalFrameOptions {
  std::vector<double> eps_schedule;  // empty means the default 2^{-1..12}
  ConvergenceConfig convergence;
  NewtonOptions newton;
};

/// Numerical check of the two normal-frame limits:
///  (a) (1/eps) d(exp(sum eps^{deg} a_i X_i)(y), y) -> A(y, a) in (0, inf);
///  (b) eps^{-deg X_i} P_i(eps^{deg} a, eps^{deg} b, x) converges.
/// Metrics record min/max of A over the probes (uniformity proxy).
Report check_normal_frame(const Frame& frame, const DistanceFn& distance, const std::vector<Point>& probes,
                          const std::vector<Eigen::VectorXd>& coeffs, const NormalFrameOptions& opt = {});

}  // namespace dilatlab
