#include "dilatlab/frame.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace dilatlab {

Frame::Frame(std::vector<VectorField> fields, std::vector<int> degrees, Box chart_box,
             double injectivity_radius)
    : fields_(std::move(fields)),
      degrees_(std::move(degrees)),
      chart_box_(std::move(chart_box)),
      injectivity_radius_(injectivity_radius) {
  const std::size_t n = fields_.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "frame needs at least one field");
  if (degrees_.size() != n) throw Error(ErrorKind::InvalidArgument, "one degree per field required");
  for (const auto& f : fields_)
    if (f.dim != n) throw Error(ErrorKind::InvalidArgument, "frame must have as many fields as dimensions");
  if (chart_box_.dim() != n) chart_box_ = Box::cube(n, 10.0);
  if (degrees_.front() != 1) throw Error(ErrorKind::InvalidArgument, "first field must have degree 1");
  for (std::size_t i = 1; i < n; ++i) {
    if (degrees_[i] < degrees_[i - 1] || degrees_[i] > degrees_[i - 1] + 1) {
      throw Error(ErrorKind::InvalidArgument, "degrees must be nondecreasing without gaps");
    }
  }
  const int k = degrees_.back();
  layer_dims_.assign(static_cast<std::size_t>(k), 0);
  for (int j = 1; j <= k; ++j) {
    layer_dims_[static_cast<std::size_t>(j - 1)] =
        static_cast<std::size_t>(std::count_if(degrees_.begin(), degrees_.end(), [j](int d) { return d <= j; }));
  }
}

Matrix Frame::matrix_at(const Point& x) const {
  const auto n = static_cast<Eigen::Index>(dim());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m.col(i) = fields_[static_cast<std::size_t>(i)](x);
  return m;
}

Point Frame::combine(const Eigen::VectorXd& a, const Point& x) const {
  Point v = Point::Zero(x.size());
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    const double c = a[static_cast<Eigen::Index>(i)];
    if (c != 0.0) v += c * fields_[i](x);
  }
  return v;
}

Eigen::VectorXd Frame::scale(double eps, const Eigen::VectorXd& a) const {
  Eigen::VectorXd out = a;
  for (std::size_t i = 0; i < degrees_.size(); ++i) out[static_cast<Eigen::Index>(i)] *= std::pow(eps, degrees_[i]);
  return out;
}

Frame Frame::with_degrees(std::vector<int> degrees) const {
  // Bypasses the layer-structure validation on purpose: used to build
  // deliberately wrong frames for negative tests.
  Frame f = *this;
  f.degrees_ = std::move(degrees);
  return f;
}

std::size_t numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel_tol * std::max(1.0, s[0])) ++r;
  return r;
}

namespace {

using Word = std::vector<std::size_t>;

class BracketCache {
 public:
  explicit BracketCache(const std::vector<VectorField>& gens) : gens_(gens) {}

  const VectorField& get(const Word& w) {
    auto it = cache_.find(w);
    if (it != cache_.end()) return it->second;
    VectorField f = w.size() == 1 ? gens_[w[0]] : lie_bracket(gens_[w[0]], get(Word(w.begin() + 1, w.end())));
    return cache_.emplace(w, std::move(f)).first->second;
  }

 private:
  const std::vector<VectorField>& gens_;
  std::map<Word, VectorField> cache_;
};

std::vector<Word> words_of_length(std::size_t m, std::size_t len) {
  std::vector<Word> out;
  Word w(len, 0);
  while (true) {
    out.push_back(w);
    std::size_t pos = len;
    while (pos > 0) {
      --pos;
      if (++w[pos] < m) break;
      w[pos] = 0;
      if (pos == 0) return out;
    }
    if (len == 0) return out;
  }
}

Matrix append_column(const Matrix& m, const Point& c) {
  Matrix out(c.size(), m.cols() + 1);
  if (m.cols() > 0) out.leftCols(m.cols()) = m;
  out.col(m.cols()) = c;
  return out;
}

}  // namespace

Frame build_adapted_frame(const std::vector<VectorField>& generators, const std::vector<Point>& probes,
                          const AdaptedFrameOptions& opt) {
  if (generators.empty()) throw Error(ErrorKind::InvalidArgument, "no generators");
  if (probes.empty()) throw Error(ErrorKind::InvalidArgument, "no probe points");
  const std::size_t n = generators.front().dim;
  const std::size_t m = generators.size();
  const std::size_t np = probes.size();

  BracketCache cache(generators);
  std::vector<VectorField> kept;
  std::vector<int> degrees;
  std::vector<Matrix> kept_at(np, Matrix(static_cast<Eigen::Index>(n), 0));
  std::vector<Matrix> all_at(np, Matrix(static_cast<Eigen::Index>(n), 0));

  for (std::size_t len = 1; len <= opt.max_word_length; ++len) {
    for (const Word& w : words_of_length(m, len)) {
      const VectorField& f = cache.get(w);
      bool raises_everywhere = true;
      std::vector<Point> vals(np);
      for (std::size_t p = 0; p < np; ++p) {
        vals[p] = f(probes[p]);
        all_at[p] = append_column(all_at[p], vals[p]);
        const Matrix trial = append_column(kept_at[p], vals[p]);
        if (numerical_rank(trial, opt.rank_tol) <= static_cast<std::size_t>(kept_at[p].cols())) {
          raises_everywhere = false;
        }
      }
      if (raises_everywhere && kept.size() < n) {
        kept.push_back(f);
        degrees.push_back(static_cast<int>(len));
        for (std::size_t p = 0; p < np; ++p) kept_at[p] = append_column(kept_at[p], vals[p]);
      }
    }
    // Layer dimension nu_len must agree across probes and be realized by the
    // kept fields.
    const std::size_t nu = numerical_rank(all_at[0], opt.rank_tol);
    for (std::size_t p = 1; p < np; ++p) {
      if (numerical_rank(all_at[p], opt.rank_tol) != nu) {
        throw Error(ErrorKind::NonRegular, "layer " + std::to_string(len) + " has different dimensions across probes");
      }
    }
    if (kept.size() != nu) {
      throw Error(ErrorKind::NonRegular,
                  "layer " + std::to_string(len) + " is not spanned by a common set of brackets at all probes");
    }
    if (kept.size() == n) {
      Box box = opt.chart_box.dim() == n ? opt.chart_box : Box::cube(n, 10.0);
      return Frame(std::move(kept), std::move(degrees), std::move(box), opt.injectivity_radius);
    }
  }
  throw Error(ErrorKind::NotBracketGenerating, "rank stalled at " + std::to_string(kept.size()) + " < " +
                                                   std::to_string(n) + " after words of length " +
                                                   std::to_string(opt.max_word_length));
}

std::vector<int> derive_degrees(const std::vector<VectorField>& generators, const std::vector<VectorField>& fields,
                                const std::vector<Point>& probes, const AdaptedFrameOptions& opt) {
  if (generators.empty() || probes.empty()) throw Error(ErrorKind::InvalidArgument, "no generators or probes");
  const std::size_t n = generators.front().dim;
  const std::size_t m = generators.size();
  BracketCache cache(generators);
  std::vector<Matrix> span_at(probes.size(), Matrix(static_cast<Eigen::Index>(n), 0));
  std::vector<int> degrees(fields.size(), 0);
  std::size_t assigned = 0;
  for (std::size_t len = 1; len <= opt.max_word_length && assigned < fields.size(); ++len) {
    for (const Word& w : words_of_length(m, len)) {
      const VectorField& f = cache.get(w);
      for (std::size_t p = 0; p < probes.size(); ++p) span_at[p] = append_column(span_at[p], f(probes[p]));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (degrees[i] != 0) continue;
      bool inside = true;
      for (std::size_t p = 0; p < probes.size() && inside; ++p) {
        const std::size_t r = numerical_rank(span_at[p], opt.rank_tol);
        inside = numerical_rank(append_column(span_at[p], fields[i](probes[p])), opt.rank_tol) == r;
      }
      if (inside) {
        degrees[i] = static_cast<int>(len);
        ++assigned;
      }
    }
  }
  if (assigned < fields.size()) {
    throw Error(ErrorKind::NotBracketGenerating, "some fields are not in the bracket span of the generators");
  }
  return degrees;
}

Point flow_exp(const Frame& frame, const Eigen::VectorXd& a, const Point& x, const FlowOptions& opt) {
  if (static_cast<std::size_t>(a.size()) != frame.dim() || static_cast<std::size_t>(x.size()) != frame.dim()) {
    throw Error(ErrorKind::InvalidArgument, "flow_exp: dimension mismatch");
  }
  if (a.isZero(0.0)) return x;
  const double h = 1.0 / static_cast<double>(opt.steps);
  const auto n = x.size();
  Point z = x;
  Point k1(n), k2(n), k3(n), k4(n), tmp(n);
  // Nonzero coefficients only; buffers are reused across steps.
  std::vector<std::pair<double, const VectorField*>> terms;
  for (std::size_t i = 0; i < frame.dim(); ++i) {
    const double c = a[static_cast<Eigen::Index>(i)];
    if (c != 0.0) terms.emplace_back(c, &frame.fields()[i]);
  }
  auto field = [&terms](const Point& p, Point& out) {
    out.setZero();
    for (const auto& [c, f] : terms) out.noalias() += c * f->eval(p);
  };
  const Box& box = frame.chart_box();
  for (std::size_t s = 0; s < opt.steps; ++s) {
    field(z, k1);
    tmp.noalias() = z + (0.5 * h) * k1;
    field(tmp, k2);
    tmp.noalias() = z + (0.5 * h) * k2;
    field(tmp, k3);
    tmp.noalias() = z + h * k3;
    field(tmp, k4);
    z.noalias() += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!box.contains(z)) {
      throw Error(ErrorKind::ChartEscape, "flow left the chart box");
    }
  }
  return z;
}

ChartSolution chart_inverse_solve(const Frame& frame, const Point& w, const Point& z, const NewtonOptions& opt) {
  const auto n = static_cast<Eigen::Index>(frame.dim());
  ChartSolution sol;
  sol.coords = Eigen::VectorXd::Zero(n);
  const double target_scale = 1.0 + z.norm();
  if ((z - w).norm() == 0.0) return sol;

  // First-order guess from the frame at w.
  sol.coords = frame.matrix_at(w).colPivHouseholderQr().solve(Point(z - w));
  Point r = flow_exp(frame, sol.coords, w, opt.flow) - z;
  double res = r.norm();
  // Chord iterations with the frame at w as a fixed Jacobian cost one flow
  // each and contract like |a|; the linear guess is already exact for
  // left-invariant nilpotent frames.
  // Rounding of an RK4 flow grows like sqrt(steps) ulps.
  const double rounding = 16.0 * std::sqrt(static_cast<double>(opt.flow.steps)) *
                          std::numeric_limits<double>::epsilon() * target_scale;
  if (res > rounding) {
    const auto chord = frame.matrix_at(w).colPivHouseholderQr();
    for (int it = 0; it < 8 && res > rounding; ++it) {
      const Eigen::VectorXd cand = sol.coords - chord.solve(r);
      Point rc;
      try {
        rc = flow_exp(frame, cand, w, opt.flow) - z;
      } catch (const Error&) {
        break;
      }
      if (!(rc.norm() < 0.5 * res)) break;
      sol.coords = cand;
      r = rc;
      res = rc.norm();
    }
  }
  const bool exact_guess = res <= rounding;

  for (std::size_t it = 0; !exact_guess && it < opt.max_iterations; ++it) {
    sol.iterations = it + 1;
    Matrix jac(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double h = opt.fd_step * (1.0 + std::abs(sol.coords[j]));
      Eigen::VectorXd yp = sol.coords, ym = sol.coords;
      yp[j] += h;
      ym[j] -= h;
      jac.col(j) = (flow_exp(frame, yp, w, opt.flow) - flow_exp(frame, ym, w, opt.flow)) / (2.0 * h);
    }
    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(r);
    double t = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 20; ++ls, t *= 0.5) {
      const Eigen::VectorXd cand = sol.coords - t * step;
      Point rc;
      try {
        rc = flow_exp(frame, cand, w, opt.flow) - z;
      } catch (const Error&) {
        continue;
      }
      if (rc.norm() < res || rc.norm() == 0.0) {
        sol.coords = cand;
        r = rc;
        res = rc.norm();
        improved = true;
        break;
      }
    }
    if (res < opt.tol * target_scale) {
      // Polish down to rounding: callers rescale the coordinates by large
      // factors, so the tolerance alone is not enough.
      for (int polish = 0; polish < 3 && res > 0.0; ++polish) {
        const Eigen::VectorXd cand = sol.coords - jac.colPivHouseholderQr().solve(r);
        const Point rc = flow_exp(frame, cand, w, opt.flow) - z;
        if (!(rc.norm() < 0.5 * res)) break;
        sol.coords = cand;
        r = rc;
        res = rc.norm();
      }
      break;
    }
    if (!improved) break;
  }
  sol.residual = res;
  if (!(res < opt.tol * target_scale)) {
    throw Error(ErrorKind::NoConvergence, "chart inverse residual " + std::to_string(res) + " after " +
                                              std::to_string(sol.iterations) + " iterations");
  }
  if (sol.coords.norm() > frame.injectivity_radius()) {
    throw Error(ErrorKind::NoConvergence, "chart inverse solution lies outside the injectivity ball");
  }
  return sol;
}

Eigen::VectorXd chart_inverse(const Frame& frame, const Point& w, const Point& z, const NewtonOptions& opt) {
  return chart_inverse_solve(frame, w, z, opt).coords;
}

CompositionResult compose_P(const Frame& frame, const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Point& x,
                            const NewtonOptions& opt) {
  const Point from = flow_exp(frame, b, x, opt.flow);
  const Point to = flow_exp(frame, a, x, opt.flow);
  const ChartSolution s = chart_inverse_solve(frame, from, to, opt);
  return CompositionResult{s.coords, s.residual, s.iterations};
}

}  // namespace dilatlab
