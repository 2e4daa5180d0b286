#include "dilatlab/sr_dilatation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dilatlab {

DilatationStructure sr_dilatation(const Frame& frame, MetricSpace space, std::string name,
                                  const NewtonOptions& newton) {
  DilatationStructure ds;
  ds.name = std::move(name);
  ds.space = std::move(space);
  ds.dil_degree = frame.degrees().back();
  ds.dil = [frame, newton](double eps, const Point& x, const Point& y) {
    const Eigen::VectorXd a = chart_inverse(frame, x, y, newton);
    return flow_exp(frame, frame.scale(eps, a), x, newton.flow);
  };
  return ds;
}

Report check_A2_order(const Frame& frame, const std::vector<std::pair<Point, Point>>& samples,
                      const std::vector<std::pair<double, double>>& eps_mu, const OrderCheckOptions& opt) {
  auto dil_with = [&](std::size_t steps) {
    NewtonOptions n = opt.newton;
    n.flow.steps = steps;
    return [&frame, n](double eps, const Point& x, const Point& y) {
      return flow_exp(frame, frame.scale(eps, chart_inverse(frame, x, y, n)), x, n.flow);
    };
  };
  const auto ref = dil_with(opt.reference_steps);
  Report rep;
  rep.check = "a2-order";
  rep.tolerance = opt.floor;
  std::vector<double> res;
  for (std::size_t steps : opt.steps) {
    const auto dil = dil_with(steps);
    double worst = 0.0;
    for (const auto& [x, u] : samples) {
      const double s = 1.0 + x.norm() + u.norm();
      for (const auto& [e, m] : eps_mu) {
        worst = std::max(worst, (dil(e, x, dil(m, x, u)) - ref(e * m, x, u)).norm() / s);
      }
    }
    res.push_back(worst);
    rep.metrics["residual_" + std::to_string(steps)] = worst;
    rep.table.push_back({1.0 / static_cast<double>(steps), worst, 0.0, 0.0, 0.0});
  }
  for (std::size_t k = 1; k < res.size(); ++k) {
    const double ratio = res[k - 1] / std::max(res[k], 1e-300);
    rep.table[k].diff = ratio;
    if (res[k] > opt.floor && ratio < opt.min_ratio) {
      rep.fail("A2 residual shrank by " + std::to_string(ratio) + " from " + std::to_string(opt.steps[k - 1]) +
                   " to " + std::to_string(opt.steps[k]) + " steps",
               res[k]);
    }
  }
  rep.max_residual = res.empty() ? 0.0 : res.back();
  return rep;
}

Report check_normal_frame(const Frame& frame, const DistanceFn& distance, const std::vector<Point>& probes,
                          const std::vector<Eigen::VectorXd>& coeffs, const NormalFrameOptions& opt) {
  const std::vector<double> eps = opt.eps_schedule.empty() ? geometric_schedule() : opt.eps_schedule;
  validate_schedule(eps);
  Report rep;
  rep.check = "normal-frame";
  rep.tolerance = opt.convergence.tol;
  // Rescaling by eps^{-deg} magnifies chart rounding at the probe.
  auto rounding = [&](const Point& y) {
    return 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + y.norm()) *
           std::pow(eps.back(), -static_cast<double>(frame.degrees().back()));
  };

  // (a)
  double a_min = std::numeric_limits<double>::infinity();
  double a_max = 0.0;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    for (std::size_t c = 0; c < coeffs.size(); ++c) {
      std::vector<double> vals;
      for (double e : eps) {
        const Point moved = flow_exp(frame, frame.scale(e, coeffs[c]), probes[p], opt.newton.flow);
        vals.push_back(distance(moved, probes[p]) / e);
      }
      ConvergenceConfig cfg = opt.convergence;
      const double scale = std::max(1.0, std::abs(vals.front()));
      cfg.tol *= scale;
      cfg.noise_floor = std::max(cfg.noise_floor * scale, rounding(probes[p]));
      const LimitEstimate est = extrapolate_scalar(eps, vals, cfg);
      const std::string tag = "(a) probe " + std::to_string(p) + " coeff " + std::to_string(c);
      if (!est.converged) {
        rep.fail(tag + " diverges", est.diffs.back());
        continue;
      }
      const double A = est.scalar();
      if (!(A > 0.0) || !std::isfinite(A)) rep.fail(tag + " limit not in (0, inf)", A);
      a_min = std::min(a_min, A);
      a_max = std::max(a_max, A);
      rep.max_residual = std::max(rep.max_residual, est.error);
      if (p == 0 && c == 0) {
        for (std::size_t k = 0; k < eps.size(); ++k) {
          rep.table.push_back({eps[k], vals[k], est.diffs[k], est.scalar(), est.error});
        }
      }
    }
  }
  rep.metrics["a_min"] = std::isfinite(a_min) ? a_min : 0.0;
  rep.metrics["a_max"] = a_max;

  // (b) on all ordered pairs of coefficient vectors
  for (std::size_t p = 0; p < probes.size(); ++p) {
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (i == j) continue;
        std::vector<Eigen::VectorXd> vals;
        for (double e : eps) {
          const CompositionResult cr =
              compose_P(frame, frame.scale(e, coeffs[i]), frame.scale(e, coeffs[j]), probes[p], opt.newton);
          vals.push_back(frame.scale(1.0 / e, cr.P));
        }
        ConvergenceConfig cfg = opt.convergence;
        const double scale = std::max(1.0, vals.front().norm());
        cfg.tol *= scale;
        cfg.noise_floor = std::max(cfg.noise_floor * scale, rounding(probes[p]));
        const LimitEstimate est = extrapolate(eps, vals, cfg);
        if (!est.converged) {
          rep.fail("(b) probe " + std::to_string(p) + " pair " + std::to_string(i) + "," + std::to_string(j) +
                       " diverges",
                   est.diffs.back());
        }
        rep.max_residual = std::max(rep.max_residual, est.error);
      }
    }
  }
  return rep;
}

}  // namespace dilatlab
