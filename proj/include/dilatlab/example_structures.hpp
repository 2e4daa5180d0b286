#pragma once

#include <functional>
#include <string>

#include "dilatlab/dilatation.hpp"
#include "dilatlab/frame.hpp"

namespace dilatlab {

/// R^n with the Euclidean distance and dil(eps,x,y) = x + eps (y - x).
DilatationStructure euclidean(std::size_t n);

/// A diffeomorphism of R^n with its inverse and Jacobian.
struct DiffeoPair {
  std::string name;
  std::size_t dim = 0;
  std::function<Point(const Point&)> phi;
  std::function<Point(const Point&)> phi_inv;
  std::function<Matrix(const Point&)> dphi;
  /// phi_inv is only evaluated inside this box (ChartEscape otherwise).
  Box inverse_domain;
  /// Box containing {y : |phi(y) - phi(c)| <= r}.
  BallBoxFn pullback_ball_box;
};

DiffeoPair identity_diffeo(std::size_t n);
/// phi(x) = (x_1, x_2 + x_1^2)
DiffeoPair shear_quadratic();
/// phi(x) = (x_1, x_2 + tanh(x_1) / 2)
DiffeoPair tanh_perturbation();

/// Variant 1: d(x,y) = |phi(x) - phi(y)| with affine dilatations.
/// Variant 2: Euclidean distance with dil(eps,x,y) = phi^{-1}(phi(x) + eps (phi(y) - phi(x))).
DilatationStructure riemannian_diffeo(const DiffeoPair& dp, int variant);

/// (X, d^a, delta_{eps^{1/a}}). a = 1 returns the base unchanged.
DilatationStructure snowflake_structure(const DilatationStructure& base, double a);

/// R^2 with dil(eps,x,y) = x + eps R(theta ln eps) (y - x).
DilatationStructure complex_dilatation(double theta);

/// The Heisenberg frame pushed forward by psi(x) = (x_1, x_2 + sin x_1, x_3),
/// with the transported exact distance. Its flows are not polynomial in
/// time, so RK4 error is visible.
struct WarpedHeisenberg {
  Frame frame;
  MetricSpace space;
  std::function<Point(const Point&)> psi;
  std::function<Point(const Point&)> psi_inv;
};
WarpedHeisenberg warped_heisenberg();

/// The induced dilatation structure of heisenberg_frame() with the exact
/// CC distance.
DilatationStructure heisenberg_structure();

}  // namespace dilatlab
