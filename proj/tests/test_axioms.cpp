#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dilatlab/axioms.hpp"
#include "dilatlab/errors.hpp"
#include "dilatlab/example_structures.hpp"
#include "dilatlab/heisenberg.hpp"

using namespace dilatlab;
namespace hg = dilatlab::heisenberg_group;

namespace {

std::vector<std::pair<Point, Point>> random_pairs(std::mt19937_64& rng, std::size_t dim, std::size_t n, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<std::pair<Point, Point>> out;
  for (std::size_t i = 0; i < n; ++i) {
    Point x(dim), y(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      x[static_cast<Eigen::Index>(k)] = u(rng);
      y[static_cast<Eigen::Index>(k)] = x[static_cast<Eigen::Index>(k)] + 0.5 * u(rng);
    }
    out.emplace_back(x, y);
  }
  return out;
}

std::vector<Point> random_points(std::mt19937_64& rng, std::size_t dim, std::size_t n, double r) {
  std::vector<Point> out;
  for (auto& [x, y] : random_pairs(rng, dim, n, r)) out.push_back(y - x);
  return out;
}

bool has_failure(const Report& r, const std::string& what) {
  return std::any_of(r.failures.begin(), r.failures.end(),
                     [&](const Failure& f) { return f.what.find(what) != std::string::npos; });
}

}  // namespace

TEST_CASE("A0/A1 on the Euclidean plane") {
  std::mt19937_64 rng(1);
  auto rep = check_A0_A1(euclidean(2), random_pairs(rng, 2, 100, 1.0));
  CHECK(rep.passed());
  CHECK(rep.max_residual < 1e-12);
}

TEST_CASE("A1 fails when the base point is not fixed") {
  DilatationStructure broken = euclidean(2);
  broken.name = "broken";
  broken.dil = [](double eps, const Point& x, const Point& y) {
    return Point(x + eps * (y - x) + Point::Constant(x.size(), 0.1));
  };
  std::mt19937_64 rng(2);
  auto rep = check_A0_A1(broken, random_pairs(rng, 2, 10, 1.0));
  CHECK(rep.verdict == Verdict::Fail);
  CHECK(has_failure(rep, "dil(eps,x,x)"));
}

TEST_CASE("A0/A1 on snowflakes") {
  std::mt19937_64 rng(3);
  for (double a : {0.3, 0.5, 0.9}) {
    auto rep = check_A0_A1(snowflake_structure(euclidean(2), a), random_pairs(rng, 2, 30, 0.5));
    CHECK(rep.passed());
  }
}

TEST_CASE("A2") {
  std::mt19937_64 rng(4);
  auto e = check_A2(euclidean(3), random_pairs(rng, 3, 50, 1.0), default_eps_mu_pairs());
  CHECK(e.passed());
  CHECK(e.max_residual < 1e-14);
  auto c = check_A2(complex_dilatation(1.0), random_pairs(rng, 2, 50, 1.0), default_eps_mu_pairs());
  CHECK(c.passed());
  CHECK(c.max_residual < 1e-9);
  auto h = check_A2(heisenberg_structure(), random_pairs(rng, 3, 10, 0.3), default_eps_mu_pairs());
  CHECK(h.passed());
  CHECK(h.max_residual < 1e-8);
}

TEST_CASE("dil is injective on samples") {
  std::mt19937_64 rng(5);
  for (const auto& ds : {euclidean(2), complex_dilatation(0.5), riemannian_diffeo(shear_quadratic(), 2)}) {
    auto pts = random_points(rng, 2, 40, 0.3);
    const Point x = make_point({0.1, 0.0});
    for (double eps : {0.5, 0.01}) {
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) CHECK((ds(eps, x, pts[i]) - ds(eps, x, pts[j])).norm() > 1e-12);
    }
  }
}

TEST_CASE("Euclidean d^x is the Euclidean distance at every scale") {
  std::mt19937_64 rng(6);
  const Point x = make_point({0.2, -0.4});
  auto pts = random_points(rng, 2, 8, 0.5);
  auto est = estimate_dx(euclidean(2), x, pts);
  CHECK(est.report.passed());
  CHECK_FALSE(est.degenerate);
  REQUIRE(est.sample.size() == pts.size() + 1);
  for (std::size_t i = 0; i < est.sample.size(); ++i)
    for (std::size_t j = 0; j < est.sample.size(); ++j)
      CHECK(std::abs(est.dx(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                     (est.sample[i] - est.sample[j]).norm()) < 1e-12);
  auto lim = dx_limit(euclidean(2), x, pts[0], pts[1]);
  for (const auto& v : lim.values) CHECK(std::abs(v[0] - (pts[0] - pts[1]).norm()) < 1e-12);
}

TEST_CASE("Heisenberg d^0 is the homogeneous distance") {
  auto ds = heisenberg_structure();
  const Point o = make_point({0, 0, 0});
  // Collinear horizontal points through 0: the horizontal Euclidean distance.
  const Point u = make_point({0.2, 0.1, 0}), v = make_point({-0.1, -0.05, 0});
  auto lim = dx_limit(ds, o, u, v);
  CHECK(lim.converged);
  CHECK(std::abs(lim.scalar() - std::hypot(0.3, 0.15)) < 1e-6);
  std::mt19937_64 rng(7);
  auto pts = random_points(rng, 3, 5, 0.3);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    auto l = dx_limit(ds, o, pts[i], pts[i + 1]);
    CHECK(std::abs(l.scalar() - hg::distance(pts[i], pts[i + 1])) < 1e-6 + l.error);
  }
}

TEST_CASE("degenerate d^x is flagged") {
  DilatationStructure flat = euclidean(2);
  flat.name = "flat";
  flat.dil = [](double eps, const Point& x, const Point& y) {
    return make_point({x[0] + eps * (y[0] - x[0]), x[1] + eps * eps * (y[1] - x[1])});
  };
  auto est = estimate_dx(flat, make_point({0, 0}), {make_point({0, 0.5}), make_point({0.3, 0.5})});
  CHECK(est.degenerate);
  CHECK(est.report.metrics.at("degenerate") == 1.0);
}

TEST_CASE("Euclidean Delta in closed form") {
  auto ds = euclidean(2);
  const Point x = make_point({0.1, 0.2}), u = make_point({0.4, -0.3}), v = make_point({-0.2, 0.5});
  auto est = estimate_delta(ds, x, u, v);
  for (std::size_t k = 0; k < est.eps.size(); ++k) {
    const double e = est.eps[k];
    CHECK((est.values[k] - (x + e * (u - x) + v - u)).norm() < 1e-12);
  }
  CHECK((est.extrapolated - (x + v - u)).norm() < 1e-10);
  CHECK((estimate_delta(ds, x, x, v).extrapolated - v).norm() < 1e-12);
}

TEST_CASE("Euclidean Sigma and inverse") {
  auto td = derive_sigma_inv(euclidean(2), make_point({0.1, 0.2}));
  const Point x = td.center, u = make_point({0.4, -0.3}), v = make_point({-0.2, 0.5});
  CHECK((td.sigma_op(u, v) - (u + v - x)).norm() < 1e-10);
  CHECK((td.inv_op(u) - (2 * x - u)).norm() < 1e-10);
  CHECK((td.sigma_op(x, v) - v).norm() < 1e-12);
  CHECK((td.inv_op(x) - x).norm() < 1e-12);
  CHECK(td.dx(x, x) == 0.0);
  CHECK(td.tracker->all_converged());
  CHECK(td.tracker->count() > 0);
}

TEST_CASE("Heisenberg tangent operations at the origin follow the group law") {
  auto ds = heisenberg_structure();
  const Point o = make_point({0, 0, 0});
  auto td = derive_sigma_inv(ds, o);
  std::mt19937_64 rng(8);
  auto pts = random_points(rng, 3, 6, 0.3);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Point& u = pts[i];
    const Point& v = pts[i + 1];
    auto d = estimate_delta(ds, o, u, v);
    CHECK((d.extrapolated - hg::mul(hg::inv(u), v)).norm() < 1e-6 + d.error);
    auto s = estimate_sigma(ds, o, u, v);
    CHECK((s.extrapolated - hg::mul(u, v)).norm() < 1e-6 + s.error);
    CHECK((td.inv_op(u) - hg::inv(u)).norm() < 1e-6 + td.tracker->max_error());
  }
}

TEST_CASE("inverse laws") {
  std::mt19937_64 rng(9);
  auto pairs = random_pairs(rng, 2, 10, 0.3);
  auto rep = check_inverse_laws(derive_sigma_inv(complex_dilatation(0.5), make_point({0.1, 0.1})), pairs);
  CHECK(rep.passed());
}

TEST_CASE("Euclidean tangent data is a conical group") {
  std::mt19937_64 rng(10);
  auto ds = euclidean(3);
  auto td = derive_sigma_inv(ds, make_point({0.1, 0.1, -0.2}));
  auto rep = check_conical_group(td, ds, random_points(rng, 3, 10, 0.3), {0.5, 0.25});
  CHECK(rep.passed());
  CHECK(rep.max_residual < 1e-9);
}

TEST_CASE("Heisenberg tangent data at the origin is a conical group") {
  std::mt19937_64 rng(11);
  auto ds = heisenberg_structure();
  auto td = derive_sigma_inv(ds, make_point({0, 0, 0}));
  auto rep = check_conical_group(td, ds, random_points(rng, 3, 5, 0.3), {0.5});
  CHECK(rep.passed());
  CHECK(rep.max_residual < 1e-6);
}

TEST_CASE("dropping the area term breaks left invariance") {
  std::mt19937_64 rng(12);
  auto ds = heisenberg_structure();
  TangentData td = derive_sigma_inv(ds, make_point({0, 0, 0}));
  td.dx = [](const Point& p, const Point& q) { return hg::distance(p, q); };
  td.sigma_op = [](const Point& p, const Point& q) { return Point(p + q); };
  auto rep = check_conical_group(td, ds, random_points(rng, 3, 6, 0.3), {0.5});
  CHECK(rep.verdict == Verdict::Fail);
  CHECK(has_failure(rep, "left invariance"));
  // Coordinate addition is still associative and commutes with dilations.
  CHECK_FALSE(has_failure(rep, "associativity"));
}

TEST_CASE("tangent cone") {
  auto sched = geometric_schedule(0.5, 10);
  auto e = check_tangent_cone(euclidean(2), make_point({0.3, 0.3}), sched);
  CHECK(e.passed());
  // Zero up to rounding of the chart arithmetic.
  CHECK(e.metrics.at("final") < 1e-9);

  auto r = check_tangent_cone(riemannian_diffeo(shear_quadratic(), 1), make_point({1, 0}), sched);
  CHECK(r.passed());
  CHECK(r.metrics.at("final") < 1e-3);
  // Linear decay: the log-log slope over the last steps is close to 1.
  REQUIRE(r.table.size() == sched.size());
  const auto& a = r.table[r.table.size() - 4];
  const auto& b = r.table.back();
  const double slope = std::log(a.value / b.value) / std::log(a.eps / b.eps);
  CHECK(slope == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("profile theorem on cones") {
  auto sched = geometric_schedule(0.5, 6);
  auto e = check_profile_theorem(euclidean(2), make_point({0.1, 0.0}), sched);
  CHECK(e.passed());
  CHECK(e.metrics.at("final") <= e.metrics.at("density"));
  auto s = check_profile_theorem(snowflake_structure(euclidean(1), 0.5), make_point({0.1}), sched);
  CHECK(s.passed());
}

TEST_CASE("sampled tuples stay in the technical ball") {
  auto ds = euclidean(2);
  auto tuples = sample_tuples(ds, 20, 0.5);
  REQUIRE(tuples.size() == 20);
  for (const auto& t : tuples) {
    CHECK(ds.space.distance(ds.origin, t.x) <= 0.5);
    for (const Point* p : {&t.u, &t.v, &t.w}) CHECK(ds.space.distance(t.x, *p) <= ds.technical_radius());
  }
}

TEST_CASE("suite") {
  SuiteOptions opt;
  opt.samples = 10;
  auto res = run_suite(euclidean(2), opt);
  CHECK(res.verdict == Verdict::Pass);
  CHECK(res.reports.size() == opt.checks.size());
  CHECK(res.max_residual < 1e-9);

  opt.checks = {"a0a1", "bogus"};
  try {
    run_suite(euclidean(2), opt);
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
}

TEST_CASE("report bookkeeping") {
  Report r;
  r.inconclusive("slow", 0.1);
  CHECK(r.verdict == Verdict::Inconclusive);
  r.expect_below("ok", 1e-3, 1e-2);
  CHECK(r.verdict == Verdict::Inconclusive);
  r.expect_below("bad", 1.0, 1e-2);
  CHECK(r.verdict == Verdict::Fail);
  r.inconclusive("later", 0.0);
  CHECK(r.verdict == Verdict::Fail);
  CHECK(r.max_residual == 1.0);
  Report ok;
  ok.merge(r);
  CHECK(ok.verdict == Verdict::Fail);
  CHECK(ok.failures.size() == r.failures.size());
  CHECK(to_string(Verdict::Inconclusive) == "inconclusive");
}
