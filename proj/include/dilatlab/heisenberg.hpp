#pragma once

#include "dilatlab/frame.hpp"
#include "dilatlab/metric_core.hpp"

namespace dilatlab {

/// Closed-form Heisenberg group in exponential coordinates:
/// (u.v)_3 = u_3 + v_3 + (u_1 v_2 - u_2 v_1)/2.
namespace heisenberg_group {

Point mul(const Point& u, const Point& v);
Point inv(const Point& u);
/// (e u_1, e u_2, e^2 u_3)
Point dilate(double eps, const Point& u);

/// Exact CC distance from the origin for the orthonormal frame {X_1, X_2}:
/// the minimizer is a circular arc whose turning angle phi solves
/// z / r^2 = (phi - sin phi) / (8 sin^2(phi/2)), r = |(p_1, p_2)|, z = p_3.
double norm(const Point& p);
/// norm(p^{-1} q)
double distance(const Point& p, const Point& q);

}  // namespace heisenberg_group

/// Left-invariant frame X_1 = (1, 0, -x_2/2), X_2 = (0, 1, x_1/2),
/// X_3 = (0, 0, 1) with degrees (1, 1, 2). Exponential coordinates are
/// global, so the injectivity radius is unbounded.
Frame heisenberg_frame();

/// Generators X_1, X_2 only.
std::vector<VectorField> heisenberg_generators();

/// R^3 with the exact CC distance and a sampling hint that bounds CC balls.
MetricSpace heisenberg_space();

struct HeisenbergModel {
  Frame frame;
  MetricSpace space;
  /// Group law oracle for tests and reports.
  Point operator()(const Point& u, const Point& v) const { return heisenberg_group::mul(u, v); }
};

HeisenbergModel heisenberg();

}  // namespace dilatlab
