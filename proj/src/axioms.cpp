#include "dilatlab/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dilatlab/errors.hpp"
#include "dilatlab/gromov_hausdorff.hpp"
#include "dilatlab/parallel.hpp"

namespace dilatlab {

namespace {

double chart_scale(const Point& x, const Point& y) { return 1.0 + x.norm() + y.norm(); }

std::vector<double> schedule_for(const DilatationStructure& ds, const AxiomOptions& opt) {
  std::vector<double> eps = opt.eps_schedule.empty() ? ds.default_schedule() : opt.eps_schedule;
  validate_schedule(eps);
  return eps;
}

ConvergenceConfig scaled(ConvergenceConfig cfg, double scale) {
  cfg.tol *= scale;
  cfg.noise_floor *= scale;
  return cfg;
}

// Limits built from dil(1/eps, ...) carry the magnified rounding of the
// smallest eps; differences below it are noise.
ConvergenceConfig limit_config(const DilatationStructure& ds, const ConvergenceConfig& base,
                               const std::vector<double>& eps, double scale) {
  ConvergenceConfig cfg = scaled(base, scale);
  cfg.noise_floor = std::max(cfg.noise_floor, ds.rounding_allowance(eps.back(), scale));
  return cfg;
}

void require_in_chart(const DilatationStructure& ds, const Point& p, const char* what) {
  if (!is_finite(p) || !ds.space.chart_box.contains(p)) {
    throw Error(ErrorKind::DomainViolation, std::string(what) + " left the chart box");
  }
}

// Per-sample partial reports merged in input order; metrics keep their
// largest value.
Report merge_in_order(std::string check, const DilatationStructure& ds, double tol, const std::vector<Report>& parts) {
  Report rep;
  rep.check = std::move(check);
  rep.structure = ds.name;
  rep.tolerance = tol;
  for (const auto& p : parts) {
    rep.merge(p);
    for (const auto& [k, v] : p.metrics) rep.metrics[k] = std::max(rep.metrics[k], v);
  }
  return rep;
}

std::string tag(const char* what, std::size_t i) { return std::string(what) + " sample " + std::to_string(i); }

}  // namespace

void LimitTracker::record(const LimitEstimate& est) {
  std::lock_guard<std::mutex> lock(m_);
  max_error_ = std::max(max_error_, est.error);
  all_converged_ = all_converged_ && est.converged;
  ++count_;
}

double LimitTracker::max_error() const {
  std::lock_guard<std::mutex> lock(m_);
  return max_error_;
}

bool LimitTracker::all_converged() const {
  std::lock_guard<std::mutex> lock(m_);
  return all_converged_;
}

std::size_t LimitTracker::count() const {
  std::lock_guard<std::mutex> lock(m_);
  return count_;
}

Report check_A0_A1(const DilatationStructure& ds, const std::vector<std::pair<Point, Point>>& samples,
                   const AxiomOptions& opt) {
  ds.validate();
  const std::vector<double> eps = schedule_for(ds, opt);
  const double tol = opt.identity_tol;
  std::vector<Report> parts(samples.size());

  parallel_for(samples.size(), [&](std::size_t i) {
    Report& r = parts[i];
    const auto& [x, y] = samples[i];
    const double s = chart_scale(x, y);
    try {
      r.expect_below(tag("dil(1,x,y) = y", i), (ds(1.0, x, y) - y).norm() / s, tol);
      std::vector<double> decay;
      for (double e : eps) {
        r.expect_below(tag("dil(eps,x,x) = x", i), (ds(e, x, x) - x).norm() / s, tol);
        const Point z = ds(e, x, y);
        r.expect_below(tag("dil(1/eps,x,dil(eps,x,y)) = y", i), (ds(1.0 / e, x, z) - y).norm() / s,
                       tol + ds.rounding_allowance(e, 1.0));
        decay.push_back(ds.space.distance(x, z));
      }

      // dil(eps,x,y) -> x: nonincreasing, and either already small or
      // extrapolating to zero.
      const double d0 = ds.space.distance(x, y);
      bool monotone = true;
      for (std::size_t k = 1; k < decay.size(); ++k) {
        if (decay[k] > decay[k - 1] * (1.0 + 1e-9) + 1e-14) monotone = false;
      }
      if (!monotone) r.fail(tag("d(x, dil(eps,x,y)) not decreasing", i), decay.back());
      if (decay.size() >= 3 && decay.back() > 1e-2 * d0) {
        const LimitEstimate est = extrapolate_scalar(eps, decay, scaled(opt.convergence, std::max(1.0, d0)));
        if (std::abs(est.scalar()) > 1e-6 * (1.0 + d0) + 3.0 * est.error) {
          r.fail(tag("d(x, dil(eps,x,y)) does not tend to 0", i), std::abs(est.scalar()));
        }
      }

      // Continuity in y and x by a small perturbation, at both schedule ends.
      Point h = Point::Ones(x.size()) * (opt.continuity_step / std::sqrt(static_cast<double>(x.size())));
      // Recorded as a metric, not as a residual: the change is O(step).
      double jump = 0.0;
      for (double e : {eps.front(), eps.back()}) {
        const Point base = ds(e, x, y);
        jump = std::max(jump, (ds(e, x, Point(y + h)) - base).norm());
        jump = std::max(jump, (ds(e, Point(x + h), y) - base).norm());
      }
      r.metrics["continuity_jump"] = jump;
      if (!(jump <= opt.continuity_tol)) r.fail(tag("discontinuous under a small perturbation", i), jump);

      // Injectivity against the next sample's point with the same base.
      const Point& y2 = samples[(i + 1) % samples.size()].second;
      if ((y2 - y).norm() > 1e-9 * s) {
        for (double e : eps) {
          if ((ds(e, x, y) - ds(e, x, y2)).norm() <= 1e-12 * e * s) {
            r.fail(tag("dil(eps,x,.) not injective", i), 0.0);
            break;
          }
        }
      }
    } catch (const Error& err) {
      r.fail(tag(("evaluation error: " + std::string(err.what())).c_str(), i), std::numeric_limits<double>::infinity());
    }
  });
  return merge_in_order("a0a1", ds, tol, parts);
}

std::vector<std::pair<double, double>> default_eps_mu_pairs() {
  return {{0.5, 0.5}, {0.3, 0.7}, {0.9, 0.1}, {0.25, 0.125}, {0.05, 0.6}};
}

Report check_A2(const DilatationStructure& ds, const std::vector<std::pair<Point, Point>>& samples,
                const std::vector<std::pair<double, double>>& eps_mu, const AxiomOptions& opt) {
  ds.validate();
  for (const auto& [e, m] : eps_mu) {
    if (!(e > 0.0 && e < 1.0 && m > 0.0 && m < 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "A2 needs eps, mu in (0,1)");
    }
  }
  std::vector<Report> parts(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto& [x, u] = samples[i];
    const double s = chart_scale(x, u);
    try {
      for (const auto& [e, m] : eps_mu) {
        const Point lhs = ds(e, x, ds(m, x, u));
        const Point rhs = ds(e * m, x, u);
        parts[i].expect_below(tag("dil(e,x,dil(m,x,u)) = dil(em,x,u)", i), (lhs - rhs).norm() / s,
                              opt.identity_tol);
      }
    } catch (const Error& err) {
      parts[i].fail(tag(("evaluation error: " + std::string(err.what())).c_str(), i),
                    std::numeric_limits<double>::infinity());
    }
  });
  return merge_in_order("a2", ds, opt.identity_tol, parts);
}

LimitEstimate dx_limit(const DilatationStructure& ds, const Point& x, const Point& u, const Point& v,
                       const AxiomOptions& opt) {
  const std::vector<double> eps = schedule_for(ds, opt);
  std::vector<double> vals;
  vals.reserve(eps.size());
  for (double e : eps) vals.push_back(ds.space.distance(ds(e, x, u), ds(e, x, v)) / e);
  // The dilated pair sits eps |u - v| apart in the chart, so rounding is
  // magnified as if by the smaller parameter eps |u - v|.
  const double sep = std::clamp((u - v).norm(), 1e-300, 1.0);
  ConvergenceConfig cfg = scaled(opt.convergence, std::max(1.0, std::abs(vals.front())));
  cfg.noise_floor = std::max(cfg.noise_floor, ds.rounding_allowance(eps.back() * sep, 1.0 + x.norm()));
  return extrapolate_scalar(eps, vals, cfg);
}

DxEstimate estimate_dx(const DilatationStructure& ds, const Point& x, const std::vector<Point>& sample,
                       const AxiomOptions& opt) {
  ds.validate();
  DxEstimate out;
  out.sample.reserve(sample.size() + 1);
  out.sample.push_back(x);
  out.sample.insert(out.sample.end(), sample.begin(), sample.end());
  const std::size_t n = out.sample.size();
  out.dx = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.error = out.dx;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<LimitEstimate> ests(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    ests[k] = dx_limit(ds, x, out.sample[pairs[k].first], out.sample[pairs[k].second], opt);
  });

  Report& rep = out.report;
  rep.check = "a3";
  rep.structure = ds.name;
  rep.tolerance = opt.convergence.tol;
  double worst = -1.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    const LimitEstimate& est = ests[k];
    const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
    out.dx(ii, jj) = out.dx(jj, ii) = est.scalar();
    out.error(ii, jj) = out.error(jj, ii) = est.error;
    rep.max_residual = std::max(rep.max_residual, est.error);
    if (!est.converged) {
      rep.inconclusive("d^x limit not converged on pair " + std::to_string(i) + "," + std::to_string(j),
                       est.diffs.back());
    }
    const double d = ds.space.distance(out.sample[i], out.sample[j]);
    if (est.scalar() < opt.degeneracy_dx && d > opt.degeneracy_d) out.degenerate = true;
    const double badness = est.converged ? est.error : std::numeric_limits<double>::max();
    if (badness > worst) {
      worst = badness;
      out.worst = est;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j),
                   c = static_cast<Eigen::Index>(k);
        const double defect = out.dx(a, c) - out.dx(a, b) - out.dx(b, c);
        const double slack = 3.0 * (out.error(a, c) + out.error(a, b) + out.error(b, c)) + 1e-12;
        if (defect > slack) rep.fail("d^x triangle inequality", defect);
      }
  rep.metrics["degenerate"] = out.degenerate ? 1.0 : 0.0;
  if (!out.worst.eps.empty()) {
    for (std::size_t k = 0; k < out.worst.eps.size(); ++k) {
      rep.table.push_back({out.worst.eps[k], out.worst.values[k][0], out.worst.diffs[k], out.worst.scalar(),
                           out.worst.error});
    }
  }

  out.tangent.center = x;
  auto tracker = out.tangent.tracker;
  out.tangent.dx = [ds, x, opt, tracker](const Point& u, const Point& v) {
    const LimitEstimate est = dx_limit(ds, x, u, v, opt);
    tracker->record(est);
    return est.scalar();
  };
  return out;
}

LimitEstimate estimate_delta(const DilatationStructure& ds, const Point& x, const Point& u, const Point& v,
                             const AxiomOptions& opt) {
  const std::vector<double> eps = schedule_for(ds, opt);
  std::vector<Eigen::VectorXd> vals;
  vals.reserve(eps.size());
  for (double e : eps) {
    const Point a = ds(e, x, u);
    const Point b = ds(e, x, v);
    require_in_chart(ds, a, "dil(eps,x,u)");
    require_in_chart(ds, b, "dil(eps,x,v)");
    const Point d = ds(1.0 / e, a, b);
    require_in_chart(ds, d, "Delta_eps");
    vals.push_back(d);
  }
  return extrapolate(eps, vals, limit_config(ds, opt.convergence, eps, 1.0 + vals.front().norm()));
}

LimitEstimate estimate_sigma(const DilatationStructure& ds, const Point& x, const Point& u, const Point& v,
                             const AxiomOptions& opt) {
  const std::vector<double> eps = schedule_for(ds, opt);
  std::vector<Eigen::VectorXd> vals;
  vals.reserve(eps.size());
  for (double e : eps) {
    const Point a = ds(e, x, u);
    require_in_chart(ds, a, "dil(eps,x,u)");
    const Point b = ds(e, a, v);
    require_in_chart(ds, b, "dil(eps,dil(eps,x,u),v)");
    const Point s = ds(1.0 / e, x, b);
    require_in_chart(ds, s, "Sigma_eps");
    vals.push_back(s);
  }
  return extrapolate(eps, vals, limit_config(ds, opt.convergence, eps, 1.0 + vals.front().norm()));
}

TangentData derive_sigma_inv(const DilatationStructure& ds, const Point& x, const AxiomOptions& opt) {
  ds.validate();
  schedule_for(ds, opt);
  TangentData td;
  td.center = x;
  auto tracker = td.tracker;
  td.dx = [ds, x, opt, tracker](const Point& u, const Point& v) {
    const LimitEstimate est = dx_limit(ds, x, u, v, opt);
    tracker->record(est);
    return est.scalar();
  };
  td.delta_op = [ds, x, opt, tracker](const Point& u, const Point& v) {
    const LimitEstimate est = estimate_delta(ds, x, u, v, opt);
    tracker->record(est);
    return Point(est.extrapolated);
  };
  td.sigma_op = [ds, x, opt, tracker](const Point& u, const Point& v) {
    const LimitEstimate est = estimate_sigma(ds, x, u, v, opt);
    tracker->record(est);
    return Point(est.extrapolated);
  };
  td.inv_op = [ds, x, opt, tracker](const Point& u) {
    const LimitEstimate est = estimate_delta(ds, x, u, x, opt);
    tracker->record(est);
    return Point(est.extrapolated);
  };
  return td;
}

namespace {

struct Residual {
  std::string what;
  double value;
};

Report judge(std::string check, const TangentData& td, const std::vector<std::vector<Residual>>& parts,
             const AxiomOptions& opt) {
  Report rep;
  rep.check = std::move(check);
  const double slack = opt.limit_tol + 3.0 * td.tracker->max_error();
  rep.tolerance = slack;
  for (const auto& part : parts)
    for (const auto& r : part) rep.expect_below(r.what, r.value, slack);
  if (!td.tracker->all_converged()) rep.inconclusive("a tangent limit did not converge", td.tracker->max_error());
  rep.metrics["limit_error"] = td.tracker->max_error();
  return rep;
}

}  // namespace

Report check_inverse_laws(const TangentData& td, const std::vector<std::pair<Point, Point>>& pairs,
                          const AxiomOptions& opt) {
  const Point& x = td.center;
  std::vector<std::vector<Residual>> parts(pairs.size() + 1);
  parts[0].push_back({"inv(x) = x", (td.inv_op(x) - x).norm()});
  parts[0].push_back({"dx(x,x) = 0", std::abs(td.dx(x, x))});
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto& [u, v] = pairs[i];
    auto& out = parts[i + 1];
    try {
      out.push_back({tag("Sigma(x,v) = v", i), (td.sigma_op(x, v) - v).norm()});
      out.push_back({tag("Delta(u,u) = x", i), (td.delta_op(u, u) - x).norm()});
      out.push_back({tag("Delta(u,Sigma(u,v)) = v", i), (td.delta_op(u, td.sigma_op(u, v)) - v).norm()});
      out.push_back({tag("Sigma(u,Delta(u,v)) = v", i), (td.sigma_op(u, td.delta_op(u, v)) - v).norm()});
    } catch (const Error& err) {
      out.push_back({tag(("evaluation error: " + std::string(err.what())).c_str(), i),
                     std::numeric_limits<double>::infinity()});
    }
  });
  return judge("sigma", td, parts, opt);
}

Report check_conical_group(const TangentData& td, const DilatationStructure& ds, const std::vector<Point>& samples,
                           const std::vector<double>& mus, const AxiomOptions& opt) {
  const Point& x = td.center;
  const std::size_t n = samples.size();
  std::vector<std::vector<Residual>> parts(n);
  parallel_for(n, [&](std::size_t i) {
    const Point& u = samples[i];
    const Point& v = samples[(i + 1) % n];
    const Point& w = samples[(i + 2) % n];
    auto& out = parts[i];
    try {
      const Point uv = td.sigma_op(u, v);
      out.push_back({tag("associativity", i), (td.sigma_op(u, td.sigma_op(v, w)) - td.sigma_op(uv, w)).norm()});
      const double duv = td.dx(u, v);
      out.push_back({tag("left invariance", i), std::abs(td.dx(td.sigma_op(w, u), td.sigma_op(w, v)) - duv)});
      for (double mu : mus) {
        const Point du = ds(mu, x, u);
        const Point dv = ds(mu, x, v);
        out.push_back({tag("dilatation automorphism", i), (ds(mu, x, uv) - td.sigma_op(du, dv)).norm()});
        out.push_back({tag("cone property", i), std::abs(duv - td.dx(du, dv) / mu)});
      }
    } catch (const Error& err) {
      out.push_back({tag(("evaluation error: " + std::string(err.what())).c_str(), i),
                     std::numeric_limits<double>::infinity()});
    }
  });
  Report rep = judge("conical", td, parts, opt);
  rep.structure = ds.name;
  return rep;
}

Report check_tangent_cone(const DilatationStructure& ds, const Point& x, const std::vector<double>& eps_schedule,
                          const ConeOptions& opt) {
  ds.validate();
  validate_schedule(eps_schedule);
  Report rep;
  rep.check = "cone";
  rep.structure = ds.name;
  rep.tolerance = opt.noise_floor;
  std::vector<double> sups(eps_schedule.size(), 0.0);
  std::vector<double> errs(eps_schedule.size(), 0.0);

  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    const double e = eps_schedule[k];
    std::vector<Point> pts = sample_ball(ds.space, x, e, opt.count, opt.sampling);
    pts.insert(pts.begin(), x);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) pairs.emplace_back(i, j);
    std::vector<double> gap(pairs.size()), err(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t p) {
      const Point& u = pts[pairs[p].first];
      const Point& v = pts[pairs[p].second];
      const LimitEstimate est = dx_limit(ds, x, u, v, opt.axioms);
      gap[p] = std::abs(ds.space.distance(u, v) - est.scalar()) / e;
      err[p] = est.error / e;
    });
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (gap[p] > sups[k]) {
        sups[k] = gap[p];
        errs[k] = err[p];
      }
    }
    rep.table.push_back({e, sups[k], k == 0 ? 0.0 : sups[k] - sups[k - 1], sups[k], errs[k]});
  }
  // An increase counts only beyond the limit errors of the two sup pairs.
  for (std::size_t k = 1; k < sups.size(); ++k) {
    if (sups[k] > sups[k - 1] + opt.noise_floor + errs[k] + errs[k - 1]) {
      rep.fail("sup quantity increased at eps " + std::to_string(eps_schedule[k]), sups[k] - sups[k - 1]);
    }
  }
  rep.max_residual = sups.back();
  rep.metrics["final"] = sups.back();
  rep.metrics["first"] = sups.front();
  return rep;
}

Report check_profile_theorem(const DilatationStructure& ds, const Point& x, const std::vector<double>& mu_schedule,
                             const ProfileOptions& opt) {
  ds.validate();
  validate_schedule(mu_schedule);
  Report rep;
  rep.check = "profile";
  rep.structure = ds.name;

  // Sample of the d^x unit ball: candidates in the working d-ball, kept when
  // their d^x distance to x is at most 1.
  const std::vector<Point> cand = sample_ball(ds.space, x, ds.working_radius, opt.count + 4, opt.sampling);
  DxEstimate dx = estimate_dx(ds, x, cand, opt.axioms);
  std::vector<std::size_t> keep = {0};
  for (std::size_t i = 1; i < dx.sample.size() && keep.size() <= opt.count; ++i) {
    if (dx.dx(0, static_cast<Eigen::Index>(i)) <= 1.0) keep.push_back(i);
  }
  const FinitePointedSpace limit_space = FinitePointedSpace(dx.dx, 0).subspace(keep, 0);
  std::vector<Point> pts;
  for (std::size_t i : keep) pts.push_back(dx.sample[i]);
  const double density = limit_space.sampling_density();

  std::vector<double> gh(mu_schedule.size());
  parallel_for(mu_schedule.size(), [&](std::size_t k) {
    const double mu = mu_schedule[k];
    std::vector<Point> img;
    for (const Point& p : pts) img.push_back(ds(mu, x, p));
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
        m(a, b) = m(b, a) = ds.space.distance(img[i], img[j]) / mu;
      }
    gh[k] = gh_pointed_exact(FinitePointedSpace(m, 0), limit_space);
  });
  for (std::size_t k = 0; k < gh.size(); ++k) {
    rep.table.push_back({mu_schedule[k], gh[k], k == 0 ? 0.0 : gh[k] - gh[k - 1], gh.back(), dx.report.max_residual});
    if (k > 0 && gh[k] > gh[k - 1] + opt.noise_floor) {
      rep.fail("GH residual increased at mu " + std::to_string(mu_schedule[k]), gh[k] - gh[k - 1]);
    }
  }
  rep.tolerance = density;
  rep.expect_below("final GH residual above sampling density", gh.back(), density);
  rep.merge(dx.report);
  rep.check = "profile";
  rep.metrics["density"] = density;
  rep.metrics["final"] = gh.back();
  rep.metrics["points"] = static_cast<double>(pts.size());
  return rep;
}

std::vector<Tuple> sample_tuples(const DilatationStructure& ds, std::size_t count, double center_radius,
                                 const SamplingConfig& cfg) {
  ds.validate();
  const Point origin = ds.origin.size() == 0 ? Point(Point::Zero(static_cast<Eigen::Index>(ds.space.dim)))
                                             : ds.origin;
  const std::vector<Point> centers = sample_ball(ds.space, origin, center_radius, count, cfg);
  std::vector<Tuple> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    SamplingConfig local = cfg;
    local.seed = cfg.seed * 1000003ULL + i + 1;
    const std::vector<Point> near = sample_ball(ds.space, centers[i], ds.technical_radius(), 3, local);
    out[i] = {centers[i], near[0], near[1], near[2]};
  }
  return out;
}

const std::vector<std::string>& suite_check_names() {
  static const std::vector<std::string> names = {"a0a1", "a2", "a3", "a4", "sigma", "conical", "cone", "profile"};
  return names;
}

SuiteResult run_suite(const DilatationStructure& ds, const SuiteOptions& opt) {
  ds.validate();
  for (const auto& c : opt.checks) {
    if (std::find(suite_check_names().begin(), suite_check_names().end(), c) == suite_check_names().end()) {
      throw Error(ErrorKind::Config, "unknown check '" + c + "'");
    }
  }
  SamplingConfig sc;
  sc.seed = opt.seed;
  const std::vector<Tuple> tuples = sample_tuples(ds, opt.samples, opt.center_radius, sc);
  const Point origin = ds.origin.size() == 0 ? Point(Point::Zero(static_cast<Eigen::Index>(ds.space.dim)))
                                             : ds.origin;
  SuiteResult out;

  for (const auto& c : opt.checks) {
    Report rep;
    if (c == "a0a1") {
      std::vector<std::pair<Point, Point>> s;
      for (const auto& t : tuples) {
        s.emplace_back(t.x, t.u);
        s.emplace_back(t.x, t.v);
      }
      rep = check_A0_A1(ds, s, opt.axioms);
    } else if (c == "a2") {
      std::vector<std::pair<Point, Point>> s;
      for (const auto& t : tuples) s.emplace_back(t.x, t.u);
      rep = check_A2(ds, s, opt.eps_mu.empty() ? default_eps_mu_pairs() : opt.eps_mu, opt.axioms);
    } else if (c == "a3") {
      rep.check = "a3";
      rep.structure = ds.name;
      rep.tolerance = opt.axioms.convergence.tol;
      std::vector<Report> parts(tuples.size());
      for (std::size_t i = 0; i < tuples.size(); ++i) {
        parts[i] = estimate_dx(ds, tuples[i].x, {tuples[i].u, tuples[i].v, tuples[i].w}, opt.axioms).report;
      }
      for (const auto& p : parts) rep.merge(p);
      rep.table = parts.empty() ? std::vector<TableRow>{} : parts.front().table;
    } else if (c == "a4") {
      rep.check = "a4";
      rep.structure = ds.name;
      rep.tolerance = opt.axioms.convergence.tol;
      std::vector<LimitEstimate> ests(tuples.size());
      std::vector<std::string> errors(tuples.size());
      parallel_for(tuples.size(), [&](std::size_t i) {
        try {
          ests[i] = estimate_delta(ds, tuples[i].x, tuples[i].u, tuples[i].v, opt.axioms);
        } catch (const Error& err) {
          errors[i] = err.what();
        }
      });
      for (std::size_t i = 0; i < tuples.size(); ++i) {
        if (!errors[i].empty()) {
          rep.fail(tag(("Delta evaluation error: " + errors[i]).c_str(), i), std::numeric_limits<double>::infinity());
          continue;
        }
        rep.max_residual = std::max(rep.max_residual, ests[i].error);
        if (!ests[i].converged) rep.inconclusive(tag("Delta limit not converged", i), ests[i].diffs.back());
      }
      if (!ests.empty() && errors[0].empty()) {
        const LimitEstimate& e = ests[0];
        for (std::size_t k = 0; k < e.eps.size(); ++k) {
          rep.table.push_back({e.eps[k], e.values[k].norm(), e.diffs[k], e.extrapolated.norm(), e.error});
        }
      }
    } else if (c == "sigma") {
      // One tangent space per base point keeps the work proportional to the
      // sample count.
      std::vector<Report> parts(tuples.size());
      for (std::size_t i = 0; i < tuples.size(); ++i) {
        const TangentData td = derive_sigma_inv(ds, tuples[i].x, opt.axioms);
        parts[i] = check_inverse_laws(td, {{tuples[i].u, tuples[i].v}}, opt.axioms);
      }
      rep = merge_in_order("sigma", ds, opt.axioms.limit_tol, parts);
    } else if (c == "conical") {
      std::vector<Report> parts(tuples.size());
      for (std::size_t i = 0; i < tuples.size(); ++i) {
        const TangentData td = derive_sigma_inv(ds, tuples[i].x, opt.axioms);
        parts[i] = check_conical_group(td, ds, {tuples[i].u, tuples[i].v, tuples[i].w}, opt.mus, opt.axioms);
      }
      rep = merge_in_order("conical", ds, opt.axioms.limit_tol, parts);
    } else if (c == "cone") {
      ConeOptions co;
      co.count = opt.cone_count;
      co.sampling = sc;
      co.axioms = opt.axioms;
      rep = check_tangent_cone(ds, origin,
                               opt.cone_schedule.empty() ? geometric_schedule(0.5, 10) : opt.cone_schedule, co);
    } else if (c == "profile") {
      ProfileOptions po;
      po.count = opt.profile_count;
      po.sampling = sc;
      po.axioms = opt.axioms;
      rep = check_profile_theorem(
          ds, origin, opt.profile_schedule.empty() ? geometric_schedule(0.5, 8) : opt.profile_schedule, po);
    }
    rep.structure = ds.name;
    out.max_residual = std::max(out.max_residual, rep.max_residual);
    if (rep.verdict == Verdict::Fail ||
        (rep.verdict == Verdict::Inconclusive && out.verdict == Verdict::Pass)) {
      out.verdict = rep.verdict;
    }
    out.reports.push_back(std::move(rep));
  }
  return out;
}

}  // namespace dilatlab
