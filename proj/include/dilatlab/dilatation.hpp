#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dilatlab/metric_core.hpp"

namespace dilatlab {

using DilatationFn = std::function<Point(double eps, const Point& x, const Point& y)>;

/// (X, d, delta) with domain constants 1 < B < A. The domains U(x), V_eps(x),
/// W_eps(x) are not materialized; the harness samples inside
/// B_d(x, working_radius), the radius within which points count as
/// "sufficiently close" for this structure.
struct DilatationStructure {
  std::string name;
  MetricSpace space;
  DilatationFn dil;
  double A = 3.0;
  double B = 2.0;
  double working_radius = 1.0;
  /// Suites sample base points near here.
  Point origin;
  /// The default schedule is (2^{-k})^schedule_power; snowflake structures
  /// use a so that the underlying base dilatations see 2^{-k}.
  double schedule_power = 1.0;
  /// dil(eps, x, .) stretches chart coordinates by at most eps^{-dil_degree}
  /// for eps > 1; sets the rounding allowance of identity and limit checks.
  double dil_degree = 1.0;

  Point operator()(double eps, const Point& x, const Point& y) const { return dil(eps, x, y); }
  /// Radius for the A4 technical condition: (A - 1)/4 of the working ball.
  double technical_radius() const { return 0.25 * (A - 1.0) * working_radius; }
  /// Throws InvalidArgument unless 1 < B < A and the callables are set.
  void validate() const;
  std::vector<double> default_schedule(std::size_t count = 12) const;
  /// Chart-coordinate rounding expected after undoing dil(eps, x, .): a few
  /// ulps magnified by eps^{-dil_degree}.
  double rounding_allowance(double eps, double scale) const;
};

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

/// One row of an eps-indexed table; also the fixed CSV layout.
struct TableRow {
  double eps = 0.0;
  double value = 0.0;
  double diff = 0.0;
  double extrapolated = 0.0;
  double error = 0.0;
};

struct Failure {
  std::string what;
  double residual = 0.0;
};

/// Outcome of one check: verdict, worst residual, itemized failures, and an
/// eps table for plotting.
struct Report {
  std::string check;
  std::string structure;
  Verdict verdict = Verdict::Pass;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::vector<Failure> failures;
  std::vector<TableRow> table;
  std::map<std::string, double> metrics;

  bool passed() const { return verdict == Verdict::Pass; }
  void fail(std::string what, double residual);
  /// Records an unresolved item; the verdict becomes Inconclusive unless it
  /// already is Fail.
  void inconclusive(std::string what, double residual);
  /// Records the residual and fails when it exceeds tol.
  void expect_below(const std::string& what, double residual, double tol);
  /// Worst verdict wins; failures are appended, tables and metrics kept.
  void merge(const Report& other);
};

}  // namespace dilatlab
