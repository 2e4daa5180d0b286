#include "dilatlab/example_structures.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "dilatlab/errors.hpp"
#include "dilatlab/heisenberg.hpp"
#include "dilatlab/sr_dilatation.hpp"

namespace dilatlab {

DilatationStructure euclidean(std::size_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "euclidean needs n >= 1");
  DilatationStructure ds;
  ds.name = "euclidean" + std::to_string(n);
  ds.space = euclidean_space(n);
  ds.dil = [](double eps, const Point& x, const Point& y) { return Point(x + eps * (y - x)); };
  ds.origin = Point::Zero(static_cast<Eigen::Index>(n));
  return ds;
}

DiffeoPair identity_diffeo(std::size_t n) {
  DiffeoPair dp;
  dp.name = "identity";
  dp.dim = n;
  dp.phi = [](const Point& x) { return x; };
  dp.phi_inv = [](const Point& y) { return y; };
  dp.dphi = [n](const Point&) { return Matrix(Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))); };
  dp.inverse_domain = Box::cube(n, 1e3);
  dp.pullback_ball_box = [n](const Point& c, double r) {
    return Box::around(c, Point::Constant(static_cast<Eigen::Index>(n), r));
  };
  return dp;
}

DiffeoPair shear_quadratic() {
  DiffeoPair dp;
  dp.name = "shear";
  dp.dim = 2;
  dp.phi = [](const Point& x) { return make_point({x[0], x[1] + x[0] * x[0]}); };
  dp.phi_inv = [](const Point& y) { return make_point({y[0], y[1] - y[0] * y[0]}); };
  dp.dphi = [](const Point& x) {
    Matrix m(2, 2);
    m << 1.0, 0.0, 2.0 * x[0], 1.0;
    return m;
  };
  dp.inverse_domain = Box::cube(2, 1e3);
  // |y_1 - c_1| <= r, and |y_2 - c_2| <= r + |y_1^2 - c_1^2| <= r + r (2|c_1| + r).
  dp.pullback_ball_box = [](const Point& c, double r) {
    return Box::around(c, make_point({r, r + r * (2.0 * std::abs(c[0]) + r)}));
  };
  return dp;
}

DiffeoPair tanh_perturbation() {
  DiffeoPair dp;
  dp.name = "tanh";
  dp.dim = 2;
  dp.phi = [](const Point& x) { return make_point({x[0], x[1] + 0.5 * std::tanh(x[0])}); };
  dp.phi_inv = [](const Point& y) { return make_point({y[0], y[1] - 0.5 * std::tanh(y[0])}); };
  dp.dphi = [](const Point& x) {
    const double c = 1.0 / std::cosh(x[0]);
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.5 * c * c, 1.0;
    return m;
  };
  dp.inverse_domain = Box::cube(2, 1e3);
  // tanh is 1-Lipschitz.
  dp.pullback_ball_box = [](const Point& c, double r) { return Box::around(c, make_point({r, 1.5 * r})); };
  return dp;
}

DilatationStructure riemannian_diffeo(const DiffeoPair& dp, int variant) {
  if (variant != 1 && variant != 2) throw Error(ErrorKind::InvalidArgument, "variant must be 1 or 2");
  DilatationStructure ds;
  ds.name = "riemannian-" + dp.name + (variant == 2 ? "-v2" : "");
  ds.origin = Point::Zero(static_cast<Eigen::Index>(dp.dim));
  if (variant == 1) {
    ds.space.dim = dp.dim;
    ds.space.chart_box = Box::cube(dp.dim, 10.0);
    ds.space.distance = [phi = dp.phi](const Point& x, const Point& y) { return (phi(x) - phi(y)).norm(); };
    ds.space.ball_box = dp.pullback_ball_box;
    ds.dil = [](double eps, const Point& x, const Point& y) { return Point(x + eps * (y - x)); };
  } else {
    ds.space = euclidean_space(dp.dim);
    ds.dil = [dp](double eps, const Point& x, const Point& y) {
      const Point fx = dp.phi(x);
      const Point target = fx + eps * (dp.phi(y) - fx);
      if (!is_finite(target) || !dp.inverse_domain.contains(target)) {
        throw Error(ErrorKind::ChartEscape, "phi inverse evaluated outside its domain");
      }
      return dp.phi_inv(target);
    };
  }
  return ds;
}

DilatationStructure snowflake_structure(const DilatationStructure& base, double a) {
  if (!(a > 0.0 && a <= 1.0)) throw Error(ErrorKind::InvalidArgument, "snowflake exponent must lie in (0,1]");
  if (a == 1.0) return base;
  DilatationStructure ds = base;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", a);
  ds.name = "snowflake-" + std::string(buf) + (base.name == "euclidean2" ? "" : "-" + base.name);
  ds.space = snowflake_distance(base.space, a);
  ds.dil = [dil = base.dil, inv_a = 1.0 / a](double eps, const Point& x, const Point& y) {
    return dil(std::pow(eps, inv_a), x, y);
  };
  ds.working_radius = std::pow(base.working_radius, a);
  ds.schedule_power = base.schedule_power * a;
  ds.dil_degree = base.dil_degree / a;
  return ds;
}

DilatationStructure complex_dilatation(double theta) {
  DilatationStructure ds;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", theta);
  ds.name = "complex-" + std::string(buf);
  ds.space = euclidean_space(2);
  ds.origin = Point::Zero(2);
  ds.dil = [theta](double eps, const Point& x, const Point& y) {
    const double ang = theta * std::log(eps);
    const double c = std::cos(ang), s = std::sin(ang);
    const double w0 = y[0] - x[0], w1 = y[1] - x[1];
    return make_point({x[0] + eps * (c * w0 - s * w1), x[1] + eps * (s * w0 + c * w1)});
  };
  return ds;
}

WarpedHeisenberg warped_heisenberg() {
  auto y1 = VectorField{};
  y1.dim = 3;
  y1.eval = [](const Point& y) { return make_point({1.0, std::cos(y[0]), -0.5 * (y[1] - std::sin(y[0]))}); };
  y1.jacobian = [](const Point& y) {
    Matrix m = Matrix::Zero(3, 3);
    m(1, 0) = -std::sin(y[0]);
    m(2, 0) = 0.5 * std::cos(y[0]);
    m(2, 1) = -0.5;
    return m;
  };
  auto y2 = VectorField{};
  y2.dim = 3;
  y2.eval = [](const Point& y) { return make_point({0.0, 1.0, 0.5 * y[0]}); };
  y2.jacobian = [](const Point&) {
    Matrix m = Matrix::Zero(3, 3);
    m(2, 0) = 0.5;
    return m;
  };
  WarpedHeisenberg w;
  w.frame = Frame({y1, y2, VectorField::coordinate(3, 2)}, {1, 1, 2}, Box::cube(3, 100.0),
                  std::numeric_limits<double>::infinity());
  w.psi = [](const Point& x) { return make_point({x[0], x[1] + std::sin(x[0]), x[2]}); };
  w.psi_inv = [](const Point& y) { return make_point({y[0], y[1] - std::sin(y[0]), y[2]}); };
  w.space.dim = 3;
  w.space.chart_box = Box::cube(3, 10.0);
  w.space.distance = [inv = w.psi_inv](const Point& p, const Point& q) {
    return heisenberg_group::distance(inv(p), inv(q));
  };
  w.space.ball_box = [base = heisenberg_space().ball_box, inv = w.psi_inv](const Point& c, double r) {
    // psi moves x_2 by at most |Delta x_1| <= r relative to the center.
    const Box b = base(inv(c), r);
    const Point half = (b.hi - b.lo) * 0.5;
    return Box::around(c, make_point({half[0], half[1] + half[0], half[2]}));
  };
  return w;
}

DilatationStructure heisenberg_structure() {
  DilatationStructure ds = sr_dilatation(heisenberg_frame(), heisenberg_space(), "heisenberg");
  ds.origin = Point::Zero(3);
  return ds;
}

}  // namespace dilatlab
