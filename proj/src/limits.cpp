#include "dilatlab/limits.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include "dilatlab/errors.hpp"

namespace dilatlab {

std::vector<double> geometric_schedule(double start, std::size_t count) {
  std::vector<double> eps(count);
  double e = start;
  for (auto& v : eps) {
    v = e;
    e *= 0.5;
  }
  return eps;
}

void validate_schedule(const std::vector<double>& eps) {
  if (eps.empty()) throw Error(ErrorKind::InvalidArgument, "empty eps schedule");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0 && eps[i] <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "eps schedule entries must lie in (0,1]");
    }
    if (i > 0 && !(eps[i] < eps[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "eps schedule must be strictly decreasing");
    }
  }
}

bool tail_decreasing(const std::vector<double>& diffs, const ConvergenceConfig& cfg) {
  // diffs[0] is a placeholder; real differences start at index 1. The last
  // difference must sit below the largest of the preceding tail - 1 ones by
  // min_ratio per step. Using the window maximum tolerates a difference
  // sequence that passes near zero when two error orders cancel.
  if (diffs.size() < 3) return true;
  const std::size_t last = diffs.size() - 1;
  if (diffs[last] <= cfg.noise_floor) return true;
  const std::size_t span = std::min<std::size_t>(cfg.tail > 1 ? cfg.tail - 1 : 1, last - 1);
  double window = 0.0;
  for (std::size_t k = last - span; k < last; ++k) window = std::max(window, diffs[k]);
  return window >= std::pow(cfg.min_ratio, static_cast<double>(span)) * diffs[last];
}

namespace {

// Limit of the sequence assuming the differences obey d_{k+1} = M d_k, with
// M fitted by least squares over the n + 1 steps ending at difference k.
// Empty when there are too few differences, one of them sits at the noise
// floor, or the fitted map does not contract.
std::optional<Eigen::VectorXd> recurrence_limit(const std::vector<Eigen::VectorXd>& values, std::size_t k,
                                                double floor) {
  const auto n = values[0].size();
  const std::size_t pairs = static_cast<std::size_t>(n) + 1;
  if (k < pairs + 1) return std::nullopt;
  Eigen::MatrixXd d0(n, static_cast<Eigen::Index>(pairs)), d1(n, static_cast<Eigen::Index>(pairs));
  for (std::size_t j = 0; j < pairs; ++j) {
    const std::size_t hi = k - pairs + 1 + j;  // d_hi = values[hi] - values[hi - 1]
    d0.col(static_cast<Eigen::Index>(j)) = values[hi - 1] - values[hi - 2];
    d1.col(static_cast<Eigen::Index>(j)) = values[hi] - values[hi - 1];
    if (d1.col(static_cast<Eigen::Index>(j)).norm() <= floor) return std::nullopt;
  }
  const Eigen::MatrixXd m = d0.transpose().completeOrthogonalDecomposition().solve(d1.transpose()).transpose();
  const Eigen::VectorXcd ev = m.eigenvalues();
  if (ev.cwiseAbs().maxCoeff() > 0.9) return std::nullopt;
  const Eigen::VectorXd dk = values[k] - values[k - 1];
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  return Eigen::VectorXd(values[k] + m * (id - m).partialPivLu().solve(dk));
}

}  // namespace

LimitEstimate extrapolate(const std::vector<double>& eps, const std::vector<Eigen::VectorXd>& values,
                          const ConvergenceConfig& cfg) {
  if (eps.size() != values.size() || eps.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "extrapolate needs at least two matching samples");
  }
  LimitEstimate est;
  est.eps = eps;
  est.values = values;
  const std::size_t n = values.size();
  est.diffs.assign(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) est.diffs[k] = (values[k] - values[k - 1]).norm();

  const double d_last = est.diffs[n - 1];
  est.extrapolated = values[n - 1];
  est.error = d_last;
  auto offer = [&est](const Eigen::VectorXd& v, double err, bool rich, bool rec) {
    if (!(err < est.error)) return;
    est.extrapolated = v;
    est.error = err;
    est.richardson = rich;
    est.recurrence = rec;
  };

  if (n >= 3 && d_last > cfg.noise_floor) {
    // Neville table in eps: level j removes the eps^j term. Level j at step
    // k is admitted when the level j-1 differences shrink like eps^j there.
    // Each entry's error is its change from the previous step, or the
    // previous change scaled down by the expected rate when that is larger,
    // so an accidental near-zero change is not trusted.
    constexpr std::size_t kLevels = 2;
    std::vector<std::vector<Eigen::VectorXd>> t(kLevels + 1);
    t[0] = values;
    for (std::size_t j = 1; j <= kLevels; ++j) {
      t[j].resize(n);
      for (std::size_t k = j; k < n; ++k) {
        const double r = eps[k - j] / eps[k];
        t[j][k] = t[j - 1][k] + (t[j - 1][k] - t[j - 1][k - 1]) / (r - 1.0);
      }
    }
    auto change = [&](std::size_t j, std::size_t k) { return (t[j][k] - t[j][k - 1]).norm(); };
    for (std::size_t j = 1; j <= kLevels; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const double lower = change(j - 1, k);
        const double upper = change(j - 1, k - 1);
        if (lower <= cfg.noise_floor) continue;
        const double expected = std::pow(eps[k] / eps[k - 1], static_cast<double>(j));
        if (std::abs(lower / std::max(upper, 1e-300) - expected) > 0.25 * expected) continue;
        double err = change(j, k);
        if (k >= j + 2) {
          err = std::max(err, change(j, k - 1) * std::pow(eps[k] / eps[k - 1], static_cast<double>(j + 1)));
        }
        offer(t[j][k], err, true, false);
      }
    }
    // Error terms that rotate with eps (eps^z for complex z) keep the size
    // ratio of the differences but defeat the table; a fitted linear
    // recurrence of the differences handles them.
    for (std::size_t k = 2; k < n; ++k) {
      const auto fit = recurrence_limit(values, k, 100.0 * cfg.noise_floor);
      const auto fit_prev = recurrence_limit(values, k - 1, 100.0 * cfg.noise_floor);
      if (fit && fit_prev) offer(*fit, (*fit - *fit_prev).norm(), false, true);
    }
  }
  est.converged = d_last < cfg.tol && tail_decreasing(est.diffs, cfg);
  return est;
}

LimitEstimate extrapolate_scalar(const std::vector<double>& eps, const std::vector<double>& values,
                                 const ConvergenceConfig& cfg) {
  std::vector<Eigen::VectorXd> v;
  v.reserve(values.size());
  for (double x : values) v.push_back(Eigen::VectorXd::Constant(1, x));
  return extrapolate(eps, v, cfg);
}

}  // namespace dilatlab
