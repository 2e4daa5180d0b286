#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "dilatlab/errors.hpp"
#include "dilatlab/limits.hpp"

using namespace dilatlab;

TEST_CASE("geometric schedule") {
  auto eps = geometric_schedule();
  REQUIRE(eps.size() == 12);
  CHECK(eps.front() == 0.5);
  CHECK(eps.back() == std::ldexp(1.0, -12));
  CHECK_NOTHROW(validate_schedule(eps));
  CHECK_THROWS_AS(validate_schedule({}), Error);
  CHECK_THROWS_AS(validate_schedule({0.5, 0.5}), Error);
  CHECK_THROWS_AS(validate_schedule({1.5, 0.5}), Error);
  CHECK_THROWS_AS(validate_schedule({0.5, 0.0}), Error);
}

TEST_CASE("constant sequence converges with zero error") {
  auto eps = geometric_schedule();
  std::vector<double> v(eps.size(), 3.25);
  auto est = extrapolate_scalar(eps, v);
  CHECK(est.converged);
  CHECK(est.scalar() == 3.25);
  CHECK(est.error == 0.0);
}

TEST_CASE("first-order sequence is extrapolated to the limit") {
  auto eps = geometric_schedule();
  std::vector<double> v;
  for (double e : eps) v.push_back(2.0 + 0.7 * e + 0.3 * e * e);
  auto est = extrapolate_scalar(eps, v);
  CHECK(est.converged);
  CHECK(est.richardson);
  CHECK(std::abs(est.scalar() - 2.0) < 1e-7);
  // The reported error bounds the true one.
  CHECK(std::abs(est.scalar() - 2.0) <= est.error + 1e-15);
}

TEST_CASE("second-order sequence is removed by the second table level") {
  auto eps = geometric_schedule();
  std::vector<double> v;
  for (double e : eps) v.push_back(1.0 + e * e);
  auto est = extrapolate_scalar(eps, v);
  CHECK(est.richardson);
  CHECK(est.converged);
  CHECK(std::abs(est.scalar() - 1.0) < 1e-14);
}

TEST_CASE("mixed orders") {
  auto eps = geometric_schedule();
  std::vector<double> v;
  for (double e : eps) v.push_back(-0.5 + 0.3 * e - 2.0 * e * e + 5.0 * e * e * e);
  auto est = extrapolate_scalar(eps, v);
  CHECK(est.converged);
  CHECK(std::abs(est.scalar() + 0.5) < 1e-9);
  CHECK(std::abs(est.scalar() + 0.5) <= est.error + 1e-15);
}

TEST_CASE("rounding noise at the end of the schedule is avoided") {
  // First-order sequence whose last samples carry noise growing like 1/e^2.
  auto eps = geometric_schedule();
  std::vector<double> v;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const double e = eps[k];
    v.push_back(1.0 + 0.2 * e + 0.1 * e * e + (k % 2 ? 1.0 : -1.0) * 1e-16 / (e * e));
  }
  auto est = extrapolate_scalar(eps, v);
  CHECK(std::abs(est.scalar() - 1.0) < 1e-8);
  CHECK(std::abs(est.scalar() - 1.0) <= est.error + 1e-15);
  CHECK(std::abs(est.scalar() - 1.0) < std::abs(2.0 * v.back() - v[v.size() - 2] - 1.0));
}

TEST_CASE("oscillating sequence does not converge") {
  auto eps = geometric_schedule();
  std::vector<double> v;
  for (std::size_t k = 0; k < eps.size(); ++k) v.push_back(k % 2 ? 1.0 : 1.5);
  CHECK_FALSE(extrapolate_scalar(eps, v).converged);
}

TEST_CASE("slowly growing sequence does not converge") {
  auto eps = geometric_schedule();
  std::vector<double> v;
  for (double e : eps) v.push_back(std::log(1.0 / e));
  CHECK_FALSE(extrapolate_scalar(eps, v).converged);
}

TEST_CASE("vector limits") {
  auto eps = geometric_schedule(0.5, 14);
  std::vector<Eigen::VectorXd> v;
  for (double e : eps) v.push_back(Eigen::Vector2d(1.0 + e, -2.0 + 3.0 * e));
  auto est = extrapolate(eps, v);
  CHECK(est.converged);
  CHECK((est.extrapolated - Eigen::Vector2d(1.0, -2.0)).norm() < 1e-12);
  CHECK_THROWS_AS(extrapolate({0.5}, {Eigen::Vector2d(0, 0)}), Error);
}

TEST_CASE("tail test") {
  ConvergenceConfig cfg;
  CHECK(tail_decreasing({0, 1, 0.5, 0.25, 0.125}, cfg));
  CHECK_FALSE(tail_decreasing({0, 1, 1, 1, 1}, cfg));
  CHECK(tail_decreasing({0, 1, 1, 1, 1e-12}, cfg));
  // A difference sequence that dips near zero and recovers still counts.
  CHECK(tail_decreasing({0, 1, 0.5, 1e-3, 0.1}, cfg));
}

TEST_CASE("rotating first-order error is removed by the recurrence fit") {
  // v(e) = L + e R(ln e) w, the error of complex-power dilatations.
  auto eps = geometric_schedule();
  const Eigen::Vector2d lim(0.5, -1.0), w(0.3, 0.2);
  std::vector<Eigen::VectorXd> v;
  for (double e : eps) {
    const double t = std::log(e);
    v.push_back(lim + e * Eigen::Vector2d(std::cos(t) * w[0] - std::sin(t) * w[1], std::sin(t) * w[0] + std::cos(t) * w[1]));
  }
  auto est = extrapolate(eps, v);
  CHECK(est.converged);
  CHECK(est.recurrence);
  CHECK((est.extrapolated - lim).norm() < 1e-10);
  CHECK((est.extrapolated - lim).norm() <= est.error + 1e-15);
}
