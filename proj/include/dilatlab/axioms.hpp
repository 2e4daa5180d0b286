#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "dilatlab/dilatation.hpp"
#include "dilatlab/limits.hpp"

namespace dilatlab {

struct AxiomOptions {
  /// Empty means ds.default_schedule().
  std::vector<double> eps_schedule;
  ConvergenceConfig convergence;
  /// Identity residuals are measured in chart coordinates, relative to
  /// 1 + |x| + |y|.
  double identity_tol = 1e-9;
  double continuity_step = 1e-6;
  double continuity_tol = 1e-3;
  double degeneracy_dx = 1e-6;
  double degeneracy_d = 1e-2;
  /// Tolerance for comparisons between extrapolated tangent operations; the
  /// limit errors are added on top.
  double limit_tol = 1e-6;
};

/// Worst limit error and convergence seen by the lazily evaluated tangent
/// operations. Shared by copies of a TangentData.
class LimitTracker {
 public:
  void record(const LimitEstimate& est);
  double max_error() const;
  bool all_converged() const;
  std::size_t count() const;

 private:
  mutable std::mutex m_;
  double max_error_ = 0.0;
  bool all_converged_ = true;
  std::size_t count_ = 0;
};

/// Tangent objects at `center`. Each call evaluates an eps-limit.
struct TangentData {
  Point center;
  std::function<double(const Point&, const Point&)> dx;
  std::function<Point(const Point&, const Point&)> delta_op;
  std::function<Point(const Point&, const Point&)> sigma_op;
  std::function<Point(const Point&)> inv_op;
  std::shared_ptr<LimitTracker> tracker = std::make_shared<LimitTracker>();
};

Report check_A0_A1(const DilatationStructure& ds, const std::vector<std::pair<Point, Point>>& samples,
                   const AxiomOptions& opt = {});

std::vector<std::pair<double, double>> default_eps_mu_pairs();

Report check_A2(const DilatationStructure& ds, const std::vector<std::pair<Point, Point>>& samples,
                const std::vector<std::pair<double, double>>& eps_mu, const AxiomOptions& opt = {});

/// (1/eps) d(dil(eps,x,u), dil(eps,x,v)) along the schedule.
LimitEstimate dx_limit(const DilatationStructure& ds, const Point& x, const Point& u, const Point& v,
                       const AxiomOptions& opt = {});

struct DxEstimate {
  TangentData tangent;  // only dx is set
  std::vector<Point> sample;
  Matrix dx;
  Matrix error;
  LimitEstimate worst;
  bool degenerate = false;
  Report report;
};

/// d^x on all pairs of {x} + sample. The report covers convergence,
/// symmetry, the triangle inequality within three limit errors, and the
/// degeneracy flag.
DxEstimate estimate_dx(const DilatationStructure& ds, const Point& x, const std::vector<Point>& sample,
                       const AxiomOptions& opt = {});

/// Delta^x_eps(u,v) = dil(1/eps, dil(eps,x,u), dil(eps,x,v)). Throws
/// DomainViolation when an intermediate point leaves the chart box.
LimitEstimate estimate_delta(const DilatationStructure& ds, const Point& x, const Point& u, const Point& v,
                             const AxiomOptions& opt = {});

/// Sigma^x_eps(u,v) = dil(1/eps, x, dil(eps, dil(eps,x,u), v)).
LimitEstimate estimate_sigma(const DilatationStructure& ds, const Point& x, const Point& u, const Point& v,
                             const AxiomOptions& opt = {});

/// dx, Delta, Sigma and inv(u) = Delta(u, x) as lazily extrapolated limits.
TangentData derive_sigma_inv(const DilatationStructure& ds, const Point& x, const AxiomOptions& opt = {});

/// Neutral element and inverse laws: Sigma(x,v) = v, inv(x) = x,
/// Delta(u,u) = x, Delta(u, Sigma(u,v)) = v, Sigma(u, Delta(u,v)) = v.
Report check_inverse_laws(const TangentData& td, const std::vector<std::pair<Point, Point>>& pairs,
                          const AxiomOptions& opt = {});

/// Associativity, left invariance of dx, dilatations as automorphisms, and
/// the cone property, on cyclic triples of `samples`.
Report check_conical_group(const TangentData& td, const DilatationStructure& ds, const std::vector<Point>& samples,
                           const std::vector<double>& mus, const AxiomOptions& opt = {});

struct ConeOptions {
  std::size_t count = 10;
  SamplingConfig sampling;
  /// Allowed increase between consecutive sup values.
  double noise_floor = 1e-12;
  /// Inner schedule for d^x; empty means ds.default_schedule().
  AxiomOptions axioms;
};

/// (1/eps) sup |d(u,v) - d^x(u,v)| over samples in B(x, eps) together with x.
/// The table holds (eps, sup); passes when the sequence is nonincreasing up
/// to noise_floor plus the limit errors of the pairs attaining the sups.
Report check_tangent_cone(const DilatationStructure& ds, const Point& x, const std::vector<double>& eps_schedule,
                          const ConeOptions& opt = {});

struct ProfileOptions {
  std::size_t count = 6;
  SamplingConfig sampling;
  double noise_floor = 1e-12;
  AxiomOptions axioms;
};

/// GH distance between (sample, (1/mu) d(dil(mu,x,.), dil(mu,x,.)), x) and
/// (sample, d^x, x) on a sample of the unit d^x ball. Passes when the GH
/// sequence is nonincreasing and its last value is within the sampling
/// density of the d^x sample.
Report check_profile_theorem(const DilatationStructure& ds, const Point& x, const std::vector<double>& mu_schedule,
                             const ProfileOptions& opt = {});

/// Sampled base point with three companions in its technical ball.
struct Tuple {
  Point x, u, v, w;
};

std::vector<Tuple> sample_tuples(const DilatationStructure& ds, std::size_t count, double center_radius,
                                 const SamplingConfig& cfg = {});

struct SuiteOptions {
  std::vector<std::string> checks = {"a0a1", "a2", "a3", "a4", "sigma", "conical"};
  std::size_t samples = 20;
  std::uint64_t seed = 0;
  double center_radius = 0.5;
  std::vector<std::pair<double, double>> eps_mu;
  std::vector<double> mus = {0.5, 0.25};
  /// Schedules for cone and profile (empty: 2^{-1..10} and 2^{-1..8}).
  std::vector<double> cone_schedule;
  std::vector<double> profile_schedule;
  std::size_t cone_count = 10;
  std::size_t profile_count = 6;
  AxiomOptions axioms;
};

struct SuiteResult {
  std::vector<Report> reports;
  Verdict verdict = Verdict::Pass;
  double max_residual = 0.0;
};

/// Names accepted by run_suite in execution order.
const std::vector<std::string>& suite_check_names();

/// The axiom-level suite. Checks run in the order given.
SuiteResult run_suite(const DilatationStructure& ds, const SuiteOptions& opt = {});

}  // namespace dilatlab
