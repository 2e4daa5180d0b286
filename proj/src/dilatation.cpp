#include "dilatlab/dilatation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dilatlab/errors.hpp"
#include "dilatlab/limits.hpp"

namespace dilatlab {

void DilatationStructure::validate() const {
  if (!dil || !space.distance) throw Error(ErrorKind::InvalidArgument, name + ": dilatation or distance unset");
  if (!(A > 1.0 && B > 1.0 && B < A)) throw Error(ErrorKind::InvalidArgument, name + ": need 1 < B < A");
  if (!(working_radius > 0.0)) throw Error(ErrorKind::InvalidArgument, name + ": working radius must be positive");
  if (!(schedule_power > 0.0 && schedule_power <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, name + ": schedule power must lie in (0,1]");
  }
}

std::vector<double> DilatationStructure::default_schedule(std::size_t count) const {
  std::vector<double> eps = geometric_schedule(0.5, count);
  if (schedule_power != 1.0) {
    for (double& e : eps) e = std::pow(e, schedule_power);
  }
  return eps;
}

double DilatationStructure::rounding_allowance(double eps, double scale) const {
  return 64.0 * std::numeric_limits<double>::epsilon() * scale * std::pow(std::min(eps, 1.0), -dil_degree);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

void Report::fail(std::string what, double residual) {
  failures.push_back({std::move(what), residual});
  verdict = Verdict::Fail;
}

void Report::inconclusive(std::string what, double residual) {
  failures.push_back({std::move(what), residual});
  if (verdict != Verdict::Fail) verdict = Verdict::Inconclusive;
}

void Report::expect_below(const std::string& what, double residual, double tol) {
  if (std::isfinite(residual)) max_residual = std::max(max_residual, residual);
  if (!(residual <= tol)) fail(what, residual);
}

void Report::merge(const Report& other) {
  if (other.verdict == Verdict::Fail || (other.verdict == Verdict::Inconclusive && verdict == Verdict::Pass)) {
    verdict = other.verdict;
  }
  max_residual = std::max(max_residual, other.max_residual);
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
  if (table.empty()) table = other.table;
  for (const auto& [k, v] : other.metrics) metrics.emplace(k, v);
}

}  // namespace dilatlab
