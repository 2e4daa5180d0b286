#include "dilatlab/vector_field.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dilatlab {

Polynomial Polynomial::constant(std::size_t nvars, double c) {
  Polynomial p(nvars);
  p.add_term(c, std::vector<int>(nvars, 0));
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t var, double coef) {
  Polynomial p(nvars);
  std::vector<int> e(nvars, 0);
  e.at(var) = 1;
  p.add_term(coef, std::move(e));
  return p;
}

Polynomial& Polynomial::add_term(double coef, std::vector<int> exps) {
  if (exps.size() != nvars_) throw Error(ErrorKind::InvalidArgument, "monomial arity mismatch");
  for (int e : exps)
    if (e < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent");
  terms_.push_back({coef, std::move(exps)});
  normalize();
  return *this;
}

void Polynomial::normalize() {
  std::map<std::vector<int>, double> merged;
  for (auto& t : terms_) merged[t.exps] += t.coef;
  terms_.clear();
  for (auto& [e, c] : merged)
    if (c != 0.0) terms_.push_back({c, e});
}

double Polynomial::operator()(const Point& x) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coef;
    for (std::size_t i = 0; i < nvars_; ++i) {
      for (int k = 0; k < t.exps[i]; ++k) v *= x[static_cast<Eigen::Index>(i)];
    }
    sum += v;
  }
  return sum;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  Polynomial d(nvars_);
  for (const auto& t : terms_) {
    if (t.exps[var] == 0) continue;
    auto e = t.exps;
    const double c = t.coef * e[var];
    --e[var];
    d.terms_.push_back({c, std::move(e)});
  }
  d.normalize();
  return d;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r(std::max(nvars_, o.nvars_));
  r.terms_ = terms_;
  r.terms_.insert(r.terms_.end(), o.terms_.begin(), o.terms_.end());
  r.normalize();
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r(std::max(nvars_, o.nvars_));
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      std::vector<int> e(r.nvars_, 0);
      for (std::size_t i = 0; i < r.nvars_; ++i) e[i] = a.exps[i] + b.exps[i];
      r.terms_.push_back({a.coef * b.coef, std::move(e)});
    }
  }
  r.normalize();
  return r;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coef *= s;
  r.normalize();
  return r;
}

VectorField VectorField::from_polynomials(PolyField components) {
  const std::size_t n = components.size();
  for (const auto& c : components) {
    if (c.nvars() != n && !c.is_zero()) throw Error(ErrorKind::InvalidArgument, "polynomial field arity mismatch");
  }
  // Zero polynomials may have been built without arity.
  for (auto& c : components)
    if (c.nvars() != n) c = Polynomial(n);

  // Jacobian entries are polynomials too.
  std::vector<Polynomial> jac(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) jac[i * n + j] = components[i].derivative(j);

  VectorField f;
  f.dim = n;
  f.eval = [components](const Point& x) {
    Point v(static_cast<Eigen::Index>(components.size()));
    for (std::size_t i = 0; i < components.size(); ++i) v[static_cast<Eigen::Index>(i)] = components[i](x);
    return v;
  };
  f.jacobian = [jac, n](const Point& x) {
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = jac[i * n + j](x);
    return m;
  };
  f.poly = std::move(components);
  return f;
}

VectorField VectorField::constant(const Point& value) {
  const auto n = static_cast<std::size_t>(value.size());
  PolyField comps;
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial p(n);
    if (value[static_cast<Eigen::Index>(i)] != 0.0) p = Polynomial::constant(n, value[static_cast<Eigen::Index>(i)]);
    comps.push_back(std::move(p));
  }
  return from_polynomials(std::move(comps));
}

VectorField VectorField::coordinate(std::size_t dim, std::size_t axis) {
  Point e = Point::Zero(static_cast<Eigen::Index>(dim));
  e[static_cast<Eigen::Index>(axis)] = 1.0;
  return constant(e);
}

Matrix VectorField::jacobian_at(const Point& x, double h) const {
  if (jacobian) return jacobian(x);
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Point xp = x, xm = x;
    const double step = h * (1.0 + std::abs(x[j]));
    xp[j] += step;
    xm[j] -= step;
    m.col(j) = (eval(xp) - eval(xm)) / (xp[j] - xm[j]);
  }
  return m;
}

namespace {

// D Y(x) . v by a central difference along v.
Point directional_derivative(const VectorField& y, const Point& x, const Point& v) {
  const double nv = v.norm();
  if (nv == 0.0) return Point::Zero(x.size());
  const double h = 1e-5 * (1.0 + x.norm());
  const Point dir = v / nv;
  return (y(x + h * dir) - y(x - h * dir)) * (nv / (2.0 * h));
}

}  // namespace

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  if (x.dim != y.dim) throw Error(ErrorKind::InvalidArgument, "lie_bracket: dimension mismatch");
  const std::size_t n = x.dim;
  if (x.poly && y.poly) {
    const PolyField& px = *x.poly;
    const PolyField& py = *y.poly;
    PolyField out;
    for (std::size_t i = 0; i < n; ++i) {
      Polynomial c(n);
      for (std::size_t j = 0; j < n; ++j) {
        c = c + px[j] * py[i].derivative(j) - py[j] * px[i].derivative(j);
      }
      out.push_back(std::move(c));
    }
    return VectorField::from_polynomials(std::move(out));
  }
  VectorField f;
  f.dim = n;
  if (x.jacobian && y.jacobian) {
    f.eval = [x, y](const Point& p) { return Point(y.jacobian(p) * x(p) - x.jacobian(p) * y(p)); };
  } else {
    f.eval = [x, y](const Point& p) {
      return Point(directional_derivative(y, p, x(p)) - directional_derivative(x, p, y(p)));
    };
  }
  return f;
}

}  // namespace dilatlab
