#include "dilatlab/metric_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace dilatlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SamplingExhausted: return "sampling-exhausted";
    case ErrorKind::SizeLimitExceeded: return "size-limit-exceeded";
    case ErrorKind::NotConverged: return "not-converged";
    case ErrorKind::DomainViolation: return "domain-violation";
    case ErrorKind::ChartEscape: return "chart-escape";
    case ErrorKind::NoConvergence: return "no-convergence";
    case ErrorKind::NotBracketGenerating: return "not-bracket-generating";
    case ErrorKind::NonRegular: return "non-regular";
    case ErrorKind::NoFeasiblePath: return "no-feasible-path";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

Point make_point(std::initializer_list<double> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) p[i++] = c;
  return p;
}

bool is_finite(const Point& p) { return p.allFinite(); }

bool Box::contains(const Point& p) const {
  if (p.size() != lo.size()) return false;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p[i] >= lo[i] && p[i] <= hi[i])) return false;
  }
  return true;
}

Box Box::intersect(const Box& other) const {
  return Box{lo.cwiseMax(other.lo), hi.cwiseMin(other.hi)};
}

Box Box::cube(std::size_t dim, double half_width) {
  const auto n = static_cast<Eigen::Index>(dim);
  return Box{Point::Constant(n, -half_width), Point::Constant(n, half_width)};
}

Box Box::around(const Point& center, const Point& half_widths) {
  return Box{center - half_widths, center + half_widths};
}

Box MetricSpace::sampling_box(const Point& center, double radius) const {
  if (!ball_box) return chart_box;
  return ball_box(center, radius).intersect(chart_box);
}

MetricSpace euclidean_space(std::size_t dim, double chart_half_width) {
  MetricSpace s;
  s.dim = dim;
  s.distance = [](const Point& x, const Point& y) { return (x - y).norm(); };
  s.chart_box = Box::cube(dim, chart_half_width);
  s.ball_box = [](const Point& c, double r) {
    return Box::around(c, Point::Constant(c.size(), r));
  };
  return s;
}

FinitePointedSpace::FinitePointedSpace(Matrix dmat, std::size_t base)
    : dmat_(std::move(dmat)), base_(base) {
  if (dmat_.rows() == 0 || dmat_.rows() != dmat_.cols()) {
    throw Error(ErrorKind::InvalidArgument, "distance matrix must be square and nonempty");
  }
  if (base_ >= size()) throw Error(ErrorKind::InvalidArgument, "base index out of range");
  for (Eigen::Index i = 0; i < dmat_.rows(); ++i) {
    if (dmat_(i, i) != 0.0) throw Error(ErrorKind::InvalidArgument, "nonzero diagonal");
    for (Eigen::Index j = 0; j < i; ++j) {
      if (!std::isfinite(dmat_(i, j)) || dmat_(i, j) < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "distances must be finite and nonnegative");
      }
      if (dmat_(i, j) != dmat_(j, i)) throw Error(ErrorKind::InvalidArgument, "asymmetric matrix");
    }
  }
}

double FinitePointedSpace::triangle_defect() const {
  double worst = 0.0;
  const auto n = dmat_.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        worst = std::max(worst, dmat_(i, k) - dmat_(i, j) - dmat_(j, k));
  return worst;
}

double FinitePointedSpace::sampling_density() const {
  const auto n = dmat_.rows();
  if (n < 2) return 0.0;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) nearest = std::min(nearest, dmat_(i, j));
    worst = std::max(worst, nearest);
  }
  return worst;
}

double FinitePointedSpace::radius() const {
  return dmat_.row(static_cast<Eigen::Index>(base_)).maxCoeff();
}

FinitePointedSpace FinitePointedSpace::subspace(std::span<const std::size_t> indices,
                                                std::size_t base_pos) const {
  const auto n = static_cast<Eigen::Index>(indices.size());
  Matrix sub(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      sub(i, j) = dmat_(static_cast<Eigen::Index>(indices[i]), static_cast<Eigen::Index>(indices[j]));
  return FinitePointedSpace(std::move(sub), base_pos);
}

namespace {

constexpr std::array<std::uint32_t, 16> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19,
                                                   23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::uint64_t index, std::uint32_t base) {
  double inv_base = 1.0 / base;
  double f = inv_base;
  double result = 0.0;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f *= inv_base;
  }
  return result;
}

}  // namespace

Point halton(std::uint64_t index, std::size_t dim) {
  if (dim > kPrimes.size()) throw Error(ErrorKind::InvalidArgument, "halton: dimension too large");
  Point p(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) p[static_cast<Eigen::Index>(i)] = radical_inverse(index, kPrimes[i]);
  return p;
}

std::vector<Point> sample_ball(const MetricSpace& space, const Point& center, double radius,
                               std::size_t count, const SamplingConfig& cfg) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "sample_ball: radius must be positive");
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "sample_ball: count must be >= 1");
  if (static_cast<std::size_t>(center.size()) != space.dim || !space.chart_box.contains(center)) {
    throw Error(ErrorKind::InvalidArgument, "sample_ball: center outside chart box");
  }
  const Box box = space.sampling_box(center, radius);
  const Point extent = box.hi - box.lo;
  const std::size_t budget = cfg.budget_factor * count;
  const std::uint64_t start = 1 + cfg.seed * 7919;

  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t k = 0; k < budget && out.size() < count; ++k) {
    Point cand = box.lo + halton(start + k, space.dim).cwiseProduct(extent);
    if (space.distance(center, cand) <= radius) out.push_back(std::move(cand));
  }
  if (out.size() < count) {
    throw Error(ErrorKind::SamplingExhausted,
                "found " + std::to_string(out.size()) + " of " + std::to_string(count) +
                    " points after " + std::to_string(budget) + " candidates");
  }
  return out;
}

FinitePointedSpace restrict_to(const MetricSpace& space, std::span<const Point> pts,
                               std::size_t base_index) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = space.distance(pts[i], pts[j]);
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return FinitePointedSpace(std::move(d), base_index);
}

FinitePointedSpace restrict_to(const MetricSpace& space, std::span<const Point> pts,
                               const Point& base) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].size() == base.size() && pts[i] == base) return restrict_to(space, pts, i);
  }
  throw Error(ErrorKind::InvalidArgument, "restrict: base is not among the points");
}

FinitePointedSpace rescale(const FinitePointedSpace& fs, double factor) {
  if (!(factor > 0.0)) throw Error(ErrorKind::InvalidArgument, "rescale: factor must be positive");
  if (factor == 1.0) return fs;
  return FinitePointedSpace(fs.dmat() * factor, fs.base());
}

MetricSpace snowflake_distance(const MetricSpace& space, double a) {
  if (!(a > 0.0 && a <= 1.0)) throw Error(ErrorKind::InvalidArgument, "snowflake exponent must lie in (0,1]");
  if (a == 1.0) return space;
  MetricSpace out = space;
  out.distance = [d = space.distance, a](const Point& x, const Point& y) {
    return std::pow(d(x, y), a);
  };
  if (space.ball_box) {
    out.ball_box = [bb = space.ball_box, a](const Point& c, double r) {
      return bb(c, std::pow(r, 1.0 / a));
    };
  }
  return out;
}

}  // namespace dilatlab
