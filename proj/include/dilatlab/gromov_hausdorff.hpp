#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dilatlab/limits.hpp"
#include "dilatlab/metric_core.hpp"

namespace dilatlab {

/// Index pairs (i in A, j in B).
struct Correspondence {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  /// max over pairs of pairs of |dA(i,k) - dB(j,l)|.
  double distortion(const FinitePointedSpace& a, const FinitePointedSpace& b) const;
};

struct GhOptions {
  std::size_t size_limit = 7;
};

struct GhResult {
  double distance = 0.0;  // half the optimal distortion
  Correspondence witness;
};

/// Exact pointed Gromov-Hausdorff distance between small finite spaces: half
/// the least distortion over correspondences that contain the base pair.
GhResult gh_pointed_exact_witness(const FinitePointedSpace& a, const FinitePointedSpace& b,
                                  const GhOptions& opt = {});
double gh_pointed_exact(const FinitePointedSpace& a, const FinitePointedSpace& b,
                        const GhOptions& opt = {});

/// Cheap lower bound valid for any sizes: half the largest of the base-radius
/// gap and the Hausdorff gaps between the value sets of base distances and of
/// all pairwise distances.
double gh_lower_bound(const FinitePointedSpace& a, const FinitePointedSpace& b);

/// Approximate isometry test on already-rescaled spaces: is there a relation
/// containing the base pair whose domain is b-dense in A, whose image is
/// b-dense in B, and whose distortion is at most b?
bool approx_isometry_check(const FinitePointedSpace& a, const FinitePointedSpace& b, double bound,
                           const GhOptions& opt = {});

struct ProfilePoint {
  double eps = 1.0;
  FinitePointedSpace space;
};

struct ProfileCurve {
  std::vector<ProfilePoint> samples;
  /// Largest sampling density over the samples.
  double density = 0.0;
};

/// eps -> [B(x, eps) sample, d / eps, x]. The center is always the first
/// sample point and the base.
ProfileCurve metric_profile(const MetricSpace& space, const Point& x, const std::vector<double>& eps_schedule,
                            std::size_t count, const SamplingConfig& cfg = {});

struct LimitVerdict {
  bool converged = false;
  double residual = 0.0;
  /// GH distance between consecutive samples; steps[0] compares samples 0 and 1.
  std::vector<double> steps;
};

/// Converged iff GH between consecutive samples never increases (beyond a
/// 1e-12 floor) and the last one is below tol.
LimitVerdict profile_continuity_at_zero(const ProfileCurve& curve, double tol, const GhOptions& opt = {});

}  // namespace dilatlab
