#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "dilatlab/metric_core.hpp"

namespace dilatlab {

/// Real polynomial in `nvars` variables, stored as a list of monomials with
/// merged exponents.
class Polynomial {
 public:
  struct Term {
    double coef = 0.0;
    std::vector<int> exps;
  };

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, double c);
  /// The coordinate function x_var.
  static Polynomial variable(std::size_t nvars, std::size_t var, double coef = 1.0);

  std::size_t nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Polynomial& add_term(double coef, std::vector<int> exps);
  double operator()(const Point& x) const;
  Polynomial derivative(std::size_t var) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;

 private:
  void normalize();

  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

using PolyField = std::vector<Polynomial>;

/// Smooth vector field on a chart. The polynomial form, when present, makes
/// brackets exact; the Jacobian, when present, replaces finite differences.
struct VectorField {
  std::size_t dim = 0;
  std::function<Point(const Point&)> eval;
  std::function<Matrix(const Point&)> jacobian;
  std::optional<PolyField> poly;

  Point operator()(const Point& x) const { return eval(x); }

  static VectorField from_polynomials(PolyField components);
  static VectorField constant(const Point& value);
  static VectorField coordinate(std::size_t dim, std::size_t axis);

  /// Analytic Jacobian if available, else central differences.
  Matrix jacobian_at(const Point& x, double h = 1e-6) const;
};

/// [X, Y] = DY X - DX Y. Exact for polynomial fields; uses analytic
/// Jacobians when both fields carry them; otherwise directional central
/// differences with step 1e-5 (1 + |x|).
VectorField lie_bracket(const VectorField& x, const VectorField& y);

}  // namespace dilatlab
