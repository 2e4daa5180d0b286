#include "dilatlab/gromov_hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace dilatlab {

double Correspondence::distortion(const FinitePointedSpace& a, const FinitePointedSpace& b) const {
  double worst = 0.0;
  for (const auto& [i, j] : pairs)
    for (const auto& [k, l] : pairs) worst = std::max(worst, std::abs(a(i, k) - b(j, l)));
  return worst;
}

namespace {

using Pair = std::pair<std::size_t, std::size_t>;

void check_size(const FinitePointedSpace& a, const FinitePointedSpace& b, const GhOptions& opt) {
  if (a.size() > opt.size_limit || b.size() > opt.size_limit) {
    throw Error(ErrorKind::SizeLimitExceeded, "spaces of sizes " + std::to_string(a.size()) + " and " +
                                                  std::to_string(b.size()) + " exceed limit " +
                                                  std::to_string(opt.size_limit));
  }
}

// Backtracking search for a full correspondence of distortion <= tau. Every
// correspondence contains one of the form graph(f) + graph(g)^T + base pair,
// with f: A -> B and g defined on the points of B that f misses, and shrinking
// a relation never increases its distortion, so searching these is exact.
class CorrespondenceSearch {
 public:
  CorrespondenceSearch(const FinitePointedSpace& a, const FinitePointedSpace& b, double tau)
      : a_(a), b_(b), tau_(tau) {}

  std::optional<Correspondence> run() {
    chosen_.clear();
    chosen_.push_back({a_.base(), b_.base()});
    covered_b_.assign(b_.size(), false);
    covered_b_[b_.base()] = true;
    if (!compatible(a_.base(), b_.base())) return std::nullopt;
    if (assign_a(0)) return Correspondence{chosen_};
    return std::nullopt;
  }

 private:
  bool compatible(std::size_t i, std::size_t j) const {
    for (const auto& [k, l] : chosen_)
      if (std::abs(a_(i, k) - b_(j, l)) > tau_) return false;
    return std::abs(a_(i, i) - b_(j, j)) <= tau_;
  }

  bool assign_a(std::size_t i) {
    if (i == a_.size()) return assign_b(0);
    if (i == a_.base()) return assign_a(i + 1);
    for (std::size_t j = 0; j < b_.size(); ++j) {
      if (!compatible(i, j)) continue;
      chosen_.push_back({i, j});
      const bool was = covered_b_[j];
      covered_b_[j] = true;
      if (assign_a(i + 1)) return true;
      covered_b_[j] = was;
      chosen_.pop_back();
    }
    return false;
  }

  bool assign_b(std::size_t j) {
    if (j == b_.size()) return true;
    if (covered_b_[j]) return assign_b(j + 1);
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (!compatible(i, j)) continue;
      chosen_.push_back({i, j});
      if (assign_b(j + 1)) return true;
      chosen_.pop_back();
    }
    return false;
  }

  const FinitePointedSpace& a_;
  const FinitePointedSpace& b_;
  double tau_;
  std::vector<Pair> chosen_;
  std::vector<bool> covered_b_;
};

std::vector<double> candidate_distortions(const FinitePointedSpace& a, const FinitePointedSpace& b) {
  std::vector<double> vals;
  vals.reserve(a.size() * a.size() * b.size() * b.size() / 2 + 1);
  vals.push_back(0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = i; k < a.size(); ++k)
      for (std::size_t j = 0; j < b.size(); ++j)
        for (std::size_t l = 0; l < b.size(); ++l) vals.push_back(std::abs(a(i, k) - b(j, l)));
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

// Hausdorff distance between two sorted value lists.
double hausdorff_sorted(const std::vector<double>& x, const std::vector<double>& y) {
  auto one_sided = [](const std::vector<double>& p, const std::vector<double>& q) {
    double worst = 0.0;
    for (double v : p) {
      auto it = std::lower_bound(q.begin(), q.end(), v);
      double best = std::numeric_limits<double>::infinity();
      if (it != q.end()) best = std::min(best, *it - v);
      if (it != q.begin()) best = std::min(best, v - *std::prev(it));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(x, y), one_sided(y, x));
}

}  // namespace

GhResult gh_pointed_exact_witness(const FinitePointedSpace& a, const FinitePointedSpace& b,
                                  const GhOptions& opt) {
  check_size(a, b, opt);
  const std::vector<double> cands = candidate_distortions(a, b);
  // The largest candidate is always feasible (full product relation).
  std::size_t lo = 0;
  std::size_t hi = cands.size() - 1;
  std::optional<Correspondence> best = CorrespondenceSearch(a, b, cands[hi]).run();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (auto c = CorrespondenceSearch(a, b, cands[mid]).run()) {
      hi = mid;
      best = std::move(c);
    } else {
      lo = mid + 1;
    }
  }
  GhResult r;
  r.witness = std::move(*best);
  r.distance = 0.5 * cands[hi];
  return r;
}

double gh_pointed_exact(const FinitePointedSpace& a, const FinitePointedSpace& b, const GhOptions& opt) {
  return gh_pointed_exact_witness(a, b, opt).distance;
}

double gh_lower_bound(const FinitePointedSpace& a, const FinitePointedSpace& b) {
  auto base_dists = [](const FinitePointedSpace& s) {
    std::vector<double> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) v[i] = s(s.base(), i);
    std::sort(v.begin(), v.end());
    return v;
  };
  auto all_dists = [](const FinitePointedSpace& s) {
    std::vector<double> v;
    v.reserve(s.size() * (s.size() + 1) / 2);
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t k = i; k < s.size(); ++k) v.push_back(s(i, k));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const double rad_gap = std::abs(a.radius() - b.radius());
  const double base_gap = hausdorff_sorted(base_dists(a), base_dists(b));
  const double pair_gap = hausdorff_sorted(all_dists(a), all_dists(b));
  return 0.5 * std::max({rad_gap, base_gap, pair_gap});
}

namespace {

class PartialRelationSearch {
 public:
  PartialRelationSearch(const FinitePointedSpace& a, const FinitePointedSpace& b, double bound)
      : a_(a), b_(b), bound_(bound) {}

  bool run() {
    chosen_.assign(1, {a_.base(), b_.base()});
    in_dom_.assign(a_.size(), false);
    in_im_.assign(b_.size(), false);
    in_dom_[a_.base()] = true;
    in_im_[b_.base()] = true;
    return compatible(a_.base(), b_.base()) && assign_a(0);
  }

 private:
  bool compatible(std::size_t i, std::size_t j) const {
    for (const auto& [k, l] : chosen_)
      if (std::abs(a_(i, k) - b_(j, l)) > bound_) return false;
    return true;
  }

  static bool dense(const FinitePointedSpace& s, const std::vector<bool>& in, double bound) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      bool ok = in[i];
      for (std::size_t k = 0; k < s.size() && !ok; ++k) ok = in[k] && s(i, k) <= bound;
      if (!ok) return false;
    }
    return true;
  }

  void push(std::size_t i, std::size_t j) {
    chosen_.push_back({i, j});
    saved_.push_back({in_dom_[i], in_im_[j]});
    in_dom_[i] = true;
    in_im_[j] = true;
  }
  void pop() {
    const auto [i, j] = chosen_.back();
    in_dom_[i] = saved_.back().first;
    in_im_[j] = saved_.back().second;
    chosen_.pop_back();
    saved_.pop_back();
  }

  bool assign_a(std::size_t i) {
    if (i == a_.size()) return dense(a_, in_dom_, bound_) && assign_b(0);
    if (i == a_.base()) return assign_a(i + 1);
    for (std::size_t j = 0; j < b_.size(); ++j) {
      if (!compatible(i, j)) continue;
      push(i, j);
      if (assign_a(i + 1)) return true;
      pop();
    }
    return assign_a(i + 1);  // leave i outside the domain
  }

  bool assign_b(std::size_t j) {
    if (j == b_.size()) return dense(b_, in_im_, bound_) && dense(a_, in_dom_, bound_);
    if (in_im_[j]) return assign_b(j + 1);
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (!compatible(i, j)) continue;
      push(i, j);
      if (assign_b(j + 1)) return true;
      pop();
    }
    return assign_b(j + 1);
  }

  const FinitePointedSpace& a_;
  const FinitePointedSpace& b_;
  double bound_;
  std::vector<Pair> chosen_;
  std::vector<std::pair<bool, bool>> saved_;
  std::vector<bool> in_dom_;
  std::vector<bool> in_im_;
};

}  // namespace

bool approx_isometry_check(const FinitePointedSpace& a, const FinitePointedSpace& b, double bound,
                           const GhOptions& opt) {
  check_size(a, b, opt);
  if (!(bound > 0.0)) throw Error(ErrorKind::InvalidArgument, "approx_isometry_check: bound must be positive");
  return PartialRelationSearch(a, b, bound).run();
}

ProfileCurve metric_profile(const MetricSpace& space, const Point& x, const std::vector<double>& eps_schedule,
                            std::size_t count, const SamplingConfig& cfg) {
  validate_schedule(eps_schedule);
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "metric_profile: count must be >= 1");
  ProfileCurve curve;
  for (double eps : eps_schedule) {
    std::vector<Point> pts{x};
    if (count > 1) {
      auto s = sample_ball(space, x, eps, count - 1, cfg);
      pts.insert(pts.end(), s.begin(), s.end());
    }
    ProfilePoint pp{eps, rescale(restrict_to(space, pts, std::size_t{0}), 1.0 / eps)};
    curve.density = std::max(curve.density, pp.space.sampling_density());
    curve.samples.push_back(std::move(pp));
  }
  return curve;
}

LimitVerdict profile_continuity_at_zero(const ProfileCurve& curve, double tol, const GhOptions& opt) {
  if (curve.samples.size() < 3) {
    throw Error(ErrorKind::InvalidArgument, "profile curve needs at least three samples");
  }
  constexpr double kFloor = 1e-12;
  LimitVerdict v;
  for (std::size_t k = 1; k < curve.samples.size(); ++k) {
    v.steps.push_back(gh_pointed_exact(curve.samples[k - 1].space, curve.samples[k].space, opt));
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < v.steps.size(); ++k) {
    if (v.steps[k] > kFloor && !(v.steps[k] < v.steps[k - 1])) decreasing = false;
  }
  v.residual = v.steps.back();
  v.converged = decreasing && v.residual < tol;
  return v;
}

}  // namespace dilatlab
