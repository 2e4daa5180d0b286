#include "dilatlab/cc_distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "dilatlab/parallel.hpp"

namespace dilatlab {

double HorizontalPath::length() const {
  if (controls.rows() == 0) return 0.0;
  return controls.rowwise().norm().sum() / static_cast<double>(controls.rows());
}

namespace {

// Horizontal velocity field and its derivatives for fixed control u.
struct HorizontalDynamics {
  const Frame& frame;
  std::size_t m;
  std::size_t n;

  Point velocity(const Point& z, const Eigen::VectorXd& u) const {
    Point v = Point::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < m; ++k) v += u[static_cast<Eigen::Index>(k)] * frame.fields()[k](z);
    return v;
  }

  // d velocity / d[z, u] as an n x (n + m) block.
  Matrix derivative(const Point& z, const Eigen::VectorXd& u) const {
    const auto nn = static_cast<Eigen::Index>(n);
    Matrix d = Matrix::Zero(nn, nn + static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) {
      const auto& f = frame.fields()[k];
      const double c = u[static_cast<Eigen::Index>(k)];
      if (c != 0.0) d.leftCols(nn) += c * f.jacobian_at(z);
      d.col(nn + static_cast<Eigen::Index>(k)) = f(z);
    }
    return d;
  }
};

struct SegmentSensitivity {
  Matrix A;  // d z_out / d z_in
  Matrix B;  // d z_out / d u
};

// One segment of duration `dt` with RK4 substeps, differentiating the
// discrete scheme itself so the gradient is exact for the transcribed problem.
Point integrate_segment(const HorizontalDynamics& dyn, const Point& z0, const Eigen::VectorXd& u, double dt,
                        std::size_t substeps, SegmentSensitivity* sens) {
  const auto n = static_cast<Eigen::Index>(dyn.n);
  const auto m = static_cast<Eigen::Index>(dyn.m);
  const double h = dt / static_cast<double>(substeps);
  Point z = z0;
  Matrix P;
  if (sens) {
    P = Matrix::Zero(n, n + m);
    P.leftCols(n).setIdentity();
  }
  // Total derivative of a stage velocity given the stage input derivative.
  auto stage = [&](const Point& zs, const Matrix& dzs, Matrix* dk) {
    if (dk) {
      const Matrix D = dyn.derivative(zs, u);
      *dk = D.leftCols(n) * dzs;
      dk->rightCols(m) += D.rightCols(m);
    }
    return dyn.velocity(zs, u);
  };
  for (std::size_t s = 0; s < substeps; ++s) {
    Matrix dk1, dk2, dk3, dk4;
    const Point k1 = stage(z, P, sens ? &dk1 : nullptr);
    const Point z2 = z + 0.5 * h * k1;
    const Point k2 = stage(z2, sens ? Matrix(P + 0.5 * h * dk1) : P, sens ? &dk2 : nullptr);
    const Point z3 = z + 0.5 * h * k2;
    const Point k3 = stage(z3, sens ? Matrix(P + 0.5 * h * dk2) : P, sens ? &dk3 : nullptr);
    const Point z4 = z + h * k3;
    const Point k4 = stage(z4, sens ? Matrix(P + h * dk3) : P, sens ? &dk4 : nullptr);
    z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (sens) P += (h / 6.0) * (dk1 + 2.0 * dk2 + 2.0 * dk3 + dk4);
  }
  if (sens) {
    sens->A = P.leftCols(n);
    sens->B = P.rightCols(m);
  }
  return z;
}

class Transcription {
 public:
  Transcription(const Frame& frame, const Point& x, const Point& y, const CcOptions& opt)
      : dyn_{frame, frame.distribution_rank(), frame.dim()}, x_(x), y_(y), opt_(opt) {}

  std::size_t nvars() const { return opt_.segments * dyn_.m; }

  Eigen::VectorXd control(const Eigen::VectorXd& U, std::size_t j) const {
    return U.segment(static_cast<Eigen::Index>(j * dyn_.m), static_cast<Eigen::Index>(dyn_.m));
  }

  // Endpoint residual F(U) = z_N - y; optionally per-segment sensitivities.
  Point residual(const Eigen::VectorXd& U, std::vector<SegmentSensitivity>* sens) const {
    const double dt = 1.0 / static_cast<double>(opt_.segments);
    if (sens) sens->resize(opt_.segments);
    Point z = x_;
    for (std::size_t j = 0; j < opt_.segments; ++j) {
      z = integrate_segment(dyn_, z, control(U, j), dt, opt_.substeps, sens ? &(*sens)[j] : nullptr);
      if (!z.allFinite() || !dyn_.frame.chart_box().contains(z)) {
        throw Error(ErrorKind::ChartEscape, "horizontal path left the chart box");
      }
    }
    return z - y_;
  }

  double objective(const Eigen::VectorXd& U, double rho, Eigen::VectorXd* grad) const {
    const double invN = 1.0 / static_cast<double>(opt_.segments);
    std::vector<SegmentSensitivity> sens;
    const Point F = residual(U, grad ? &sens : nullptr);
    if (grad) {
      grad->resize(U.size());
      Eigen::VectorXd lambda = F;
      for (std::size_t j = opt_.segments; j-- > 0;) {
        grad->segment(static_cast<Eigen::Index>(j * dyn_.m), static_cast<Eigen::Index>(dyn_.m)) =
            2.0 * rho * sens[j].B.transpose() * lambda;
        lambda = sens[j].A.transpose() * lambda;
      }
      *grad += 2.0 * invN * U;
    }
    return invN * U.squaredNorm() + rho * F.squaredNorm();
  }

  Matrix endpoint_jacobian(const Eigen::VectorXd& U, Point* F) const {
    std::vector<SegmentSensitivity> sens;
    *F = residual(U, &sens);
    const auto n = static_cast<Eigen::Index>(dyn_.n);
    const auto m = static_cast<Eigen::Index>(dyn_.m);
    Matrix J(n, static_cast<Eigen::Index>(nvars()));
    Matrix G = Matrix::Identity(n, n);
    for (std::size_t j = opt_.segments; j-- > 0;) {
      J.middleCols(static_cast<Eigen::Index>(j) * m, m) = G * sens[j].B;
      G = G * sens[j].A;
    }
    return J;
  }

  const HorizontalDynamics& dynamics() const { return dyn_; }

 private:
  HorizontalDynamics dyn_;
  Point x_;
  Point y_;
  CcOptions opt_;
};

// Dense BFGS with Armijo backtracking.
Eigen::VectorXd bfgs(const Transcription& tr, Eigen::VectorXd U, double rho, std::size_t max_iter) {
  const auto nv = U.size();
  Eigen::VectorXd g;
  double f = tr.objective(U, rho, &g);
  Matrix H = Matrix::Identity(nv, nv);
  bool scaled = false;
  for (std::size_t it = 0; it < max_iter; ++it) {
    if (g.norm() <= 1e-12 * (1.0 + std::abs(f))) break;
    Eigen::VectorXd d = -H * g;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      H.setIdentity();
      d = -g;
      slope = -g.squaredNorm();
    }
    if (!scaled) {
      // First step: cap the trial move to a modest length.
      const double cap = 0.1 * (1.0 + U.norm());
      if (d.norm() > cap) d *= cap / d.norm();
      slope = g.dot(d);
    }
    double t = 1.0;
    Eigen::VectorXd Un, gn;
    double fn = f;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      Un = U + t * d;
      try {
        fn = tr.objective(Un, rho, &gn);
      } catch (const Error&) {
        continue;
      }
      if (fn <= f + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    const Eigen::VectorXd s = Un - U;
    const Eigen::VectorXd yv = gn - g;
    const double sy = s.dot(yv);
    if (sy > 1e-14 * s.norm() * yv.norm()) {
      if (!scaled) {
        H *= sy / yv.squaredNorm();
        scaled = true;
      }
      const double r = 1.0 / sy;
      const Eigen::VectorXd Hy = H * yv;
      H += (r * r * yv.dot(Hy) + r) * (s * s.transpose()) - r * (Hy * s.transpose() + s * Hy.transpose());
    }
    const double rel = std::abs(f - fn) / std::max(1e-300, std::abs(f));
    U = std::move(Un);
    g = std::move(gn);
    f = fn;
    if (rel < 1e-15) break;
  }
  return U;
}

// Minimum-norm Newton projection onto F(U) = 0.
std::optional<Eigen::VectorXd> restore(const Transcription& tr, Eigen::VectorXd U, double tol) {
  for (int it = 0; it < 30; ++it) {
    Point F;
    Matrix J;
    try {
      J = tr.endpoint_jacobian(U, &F);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (F.norm() <= tol) return U;
    const Matrix JJt = J * J.transpose();
    Eigen::LDLT<Matrix> ldlt(JJt);
    if (ldlt.info() != Eigen::Success || numerical_rank(JJt, 1e-14) < static_cast<std::size_t>(JJt.rows())) {
      return std::nullopt;
    }
    U -= J.transpose() * ldlt.solve(F);
  }
  Point F = tr.residual(U, nullptr);
  if (F.norm() <= tol) return U;
  return std::nullopt;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<Eigen::VectorXd> initial_controls(const Frame& frame, const Point& x, const Point& y,
                                              const CcOptions& opt) {
  const std::size_t m = frame.distribution_rank();
  const std::size_t N = opt.segments;
  const auto nn = static_cast<Eigen::Index>(frame.dim());
  const Matrix G = frame.matrix_at(x).leftCols(static_cast<Eigen::Index>(m));
  const Eigen::VectorXd straight = G.colPivHouseholderQr().solve(Point(y - x).head(nn));
  const double offset = (y - x).norm();
  const double amp0 = 2.0 * std::sqrt(std::numbers::pi * offset);

  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ opt.seed);
  constexpr double kAmp[] = {0.0, 1.0, 1.0, 0.5, 1.5, 1.0, 0.5, 1.5};
  std::vector<Eigen::VectorXd> starts;
  for (std::size_t s = 0; s < opt.starts; ++s) {
    // Random orthonormal pair in control space (degenerates to a line if m == 1).
    Eigen::VectorXd e1(static_cast<Eigen::Index>(m)), e2(static_cast<Eigen::Index>(m));
    for (auto& v : e1) v = uniform01(rng) - 0.5;
    for (auto& v : e2) v = uniform01(rng) - 0.5;
    if (m >= 2) {
      e1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
      e2 = e1;
      e1[0] = 1.0;
      e2[1] = 1.0;
    }
    e1.normalize();
    if (m >= 2) {
      e2 -= e2.dot(e1) * e1;
      e2.normalize();
    } else {
      e2.setZero();
    }
    const double phase = 2.0 * std::numbers::pi * uniform01(rng);
    const double orient = (s % 2 == 0) ? 1.0 : -1.0;
    const double amp = amp0 * kAmp[s % 8];
    Eigen::VectorXd U(static_cast<Eigen::Index>(N * m));
    for (std::size_t j = 0; j < N; ++j) {
      const double th = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(N) + phase;
      U.segment(static_cast<Eigen::Index>(j * m), static_cast<Eigen::Index>(m)) =
          straight + amp * (std::cos(th) * e1 + orient * std::sin(th) * e2);
    }
    starts.push_back(std::move(U));
  }
  return starts;
}

}  // namespace

Point path_endpoint(const Frame& frame, const HorizontalPath& path, std::size_t substeps) {
  HorizontalDynamics dyn{frame, frame.distribution_rank(), frame.dim()};
  const double dt = 1.0 / static_cast<double>(path.segments());
  Point z = path.start;
  for (std::size_t j = 0; j < path.segments(); ++j) {
    z = integrate_segment(dyn, z, path.controls.row(static_cast<Eigen::Index>(j)).transpose(), dt, substeps,
                          nullptr);
  }
  return z;
}

CcResult cc_distance_solve(const Frame& frame, const Point& x, const Point& y, const CcOptions& opt) {
  CcResult best;
  const std::size_t m = frame.distribution_rank();
  best.path.start = x;
  best.path.controls = Matrix::Zero(static_cast<Eigen::Index>(opt.segments), static_cast<Eigen::Index>(m));
  const double offset = (y - x).norm();
  if (offset == 0.0) {
    best.start_lengths.assign(opt.starts, 0.0);
    return best;
  }
  const Transcription tr(frame, x, y, opt);
  const auto starts = initial_controls(frame, x, y, opt);
  const double rho0 = opt.rho_scale / (offset * offset);
  const double restore_tol = 1e-12 * (1.0 + y.norm());

  std::vector<std::optional<Eigen::VectorXd>> solutions(starts.size());
  parallel_for(starts.size(), [&](std::size_t s) {
    Eigen::VectorXd U = starts[s];
    double rho = rho0;
    try {
      for (std::size_t stage = 0; stage < opt.stages; ++stage, rho *= opt.rho_factor) {
        U = bfgs(tr, U, rho, opt.max_iterations);
      }
    } catch (const Error&) {
      return;
    }
    solutions[s] = restore(tr, U, restore_tol);
  });

  best.start_lengths.assign(starts.size(), std::numeric_limits<double>::infinity());
  double best_len = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < starts.size(); ++s) {
    if (!solutions[s]) continue;
    const Eigen::VectorXd& U = *solutions[s];
    const double res = tr.residual(U, nullptr).norm();
    if (!(res < opt.feasibility_tol)) continue;
    HorizontalPath p;
    p.start = x;
    p.controls = Eigen::Map<const Matrix>(U.data(), static_cast<Eigen::Index>(m),
                                          static_cast<Eigen::Index>(opt.segments))
                     .transpose();
    const double len = p.length();
    best.start_lengths[s] = len;
    // Ties resolve to the lower start index.
    if (len < best_len) {
      best_len = len;
      best.length = len;
      best.endpoint_residual = res;
      best.best_start = s;
      best.path = std::move(p);
    }
  }
  if (!std::isfinite(best_len)) {
    throw Error(ErrorKind::NoFeasiblePath, "no start reached the endpoint within tolerance");
  }
  return best;
}

double cc_distance(const Frame& frame, const Point& x, const Point& y, const CcOptions& opt) {
  return cc_distance_solve(frame, x, y, opt).length;
}

}  // namespace dilatlab
