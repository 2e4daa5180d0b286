#include "dilatlab/heisenberg.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace dilatlab {

namespace heisenberg_group {

Point mul(const Point& u, const Point& v) {
  return make_point({u[0] + v[0], u[1] + v[1], u[2] + v[2] + 0.5 * (u[0] * v[1] - u[1] * v[0])});
}

Point inv(const Point& u) { return -u; }

Point dilate(double eps, const Point& u) { return make_point({eps * u[0], eps * u[1], eps * eps * u[2]}); }

namespace {

// phi - sin(phi), accurate for small phi.
double phi_minus_sin(double phi) {
  if (phi < 1e-2) {
    const double p2 = phi * phi;
    return phi * p2 / 6.0 * (1.0 - p2 / 20.0 * (1.0 - p2 / 42.0 * (1.0 - p2 / 72.0)));
  }
  return phi - std::sin(phi);
}

}  // namespace

double norm(const Point& p) {
  const double r = std::hypot(p[0], p[1]);
  const double z = std::abs(p[2]);
  if (z == 0.0) return r;
  if (r == 0.0) return 2.0 * std::sqrt(std::numbers::pi * z);
  // sin^2(phi/2) / (phi - sin phi) decreases from +inf to 0 on (0, 2 pi);
  // find where it equals r^2 / (8 z).
  const double target = r * r / (8.0 * z);
  double lo = 0.0;
  double hi = 2.0 * std::numbers::pi;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double s = std::sin(0.5 * mid);
    if (s * s / phi_minus_sin(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double phi = 0.5 * (lo + hi);
  if (phi < std::numbers::pi) return r * phi / (2.0 * std::sin(0.5 * phi));
  return phi * std::sqrt(2.0 * z / phi_minus_sin(phi));
}

double distance(const Point& p, const Point& q) { return norm(mul(inv(p), q)); }

}  // namespace heisenberg_group

std::vector<VectorField> heisenberg_generators() {
  constexpr std::size_t n = 3;
  PolyField x1{Polynomial::constant(n, 1.0), Polynomial(n), Polynomial::variable(n, 1, -0.5)};
  PolyField x2{Polynomial(n), Polynomial::constant(n, 1.0), Polynomial::variable(n, 0, 0.5)};
  return {VectorField::from_polynomials(std::move(x1)), VectorField::from_polynomials(std::move(x2))};
}

Frame heisenberg_frame() {
  auto fields = heisenberg_generators();
  fields.push_back(VectorField::coordinate(3, 2));
  return Frame(std::move(fields), {1, 1, 2}, Box::cube(3, 100.0), std::numeric_limits<double>::infinity());
}

MetricSpace heisenberg_space() {
  MetricSpace s;
  s.dim = 3;
  s.distance = [](const Point& p, const Point& q) { return heisenberg_group::distance(p, q); };
  s.chart_box = Box::cube(3, 10.0);
  s.ball_box = [](const Point& c, double r) {
    // Horizontal displacement is at most r; the vertical one is the area
    // between a curve of length r and its chord (at most r^2 / 2 pi, the
    // half-disc) plus the left-translation shear.
    const double vertical = r * r / (2.0 * std::numbers::pi) + 0.5 * r * std::hypot(c[0], c[1]);
    return Box::around(c, make_point({r, r, vertical}));
  };
  return s;
}

HeisenbergModel heisenberg() { return HeisenbergModel{heisenberg_frame(), heisenberg_space()}; }

}  // namespace dilatlab
