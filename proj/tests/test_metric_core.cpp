#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "dilatlab/cc_distance.hpp"
#include "dilatlab/errors.hpp"
#include "dilatlab/heisenberg.hpp"
#include "dilatlab/metric_core.hpp"

using namespace dilatlab;

TEST_CASE("sample_ball returns points inside the Euclidean ball") {
  const MetricSpace e2 = euclidean_space(2);
  const Point c = make_point({0.0, 0.0});
  auto one = sample_ball(e2, c, 1.0, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].norm() <= 1.0);

  auto pts = sample_ball(e2, c, 1.0, 50);
  REQUIRE(pts.size() == 50);
  double diam = 0.0;
  for (const auto& p : pts)
    for (const auto& q : pts) diam = std::max(diam, (p - q).norm());
  CHECK(diam <= 2.0);
}

TEST_CASE("sample_ball is deterministic per seed") {
  const MetricSpace e3 = euclidean_space(3);
  const Point c = make_point({0.5, -0.2, 0.1});
  auto a = sample_ball(e3, c, 0.3, 15, {.seed = 4});
  auto b = sample_ball(e3, c, 0.3, 15, {.seed = 4});
  auto d = sample_ball(e3, c, 0.3, 15, {.seed = 5});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs = differs || a[i] != d[i];
  CHECK(differs);
}

TEST_CASE("Heisenberg ball samples are inside the ball per the transcription solver") {
  const MetricSpace h = heisenberg_space();
  const Frame f = heisenberg_frame();
  auto pts = sample_ball(h, make_point({0, 0, 0}), 0.5, 20);
  REQUIRE(pts.size() == 20);
  // The solver returns the length of an actual path, an upper bound on the
  // distance; it is accurate to well below 1e-2 at this scale.
  CcOptions opt;
  opt.starts = 4;
  for (std::size_t i = 0; i < pts.size(); i += 4) {
    const double d = cc_distance(f, make_point({0, 0, 0}), pts[i], opt);
    CHECK(d <= 0.5 + 1e-2);
  }
}

TEST_CASE("sample_ball errors") {
  const MetricSpace e2 = euclidean_space(2, 1.0);
  CHECK_THROWS_AS(sample_ball(e2, make_point({0, 0}), 0.0, 3), Error);
  CHECK_THROWS_AS(sample_ball(e2, make_point({5, 0}), 0.1, 3), Error);
  MetricSpace narrow = e2;
  narrow.ball_box = [](const Point&, double) { return Box::cube(2, 1.0); };
  try {
    sample_ball(narrow, make_point({0, 0}), 1e-6, 5, {.budget_factor = 2});
    FAIL("expected sampling-exhausted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SamplingExhausted);
  }
}

TEST_CASE("restrict examples") {
  const MetricSpace e2 = euclidean_space(2);
  std::vector<Point> two = {make_point({0, 0}), make_point({1, 0})};
  auto fs = restrict_to(e2, two, 0);
  CHECK(fs.size() == 2);
  CHECK(fs.base() == 0);
  CHECK(fs(0, 1) == 1.0);
  CHECK(fs(1, 0) == 1.0);

  std::vector<Point> one = {make_point({0, 0})};
  auto single = restrict_to(e2, one, make_point({0, 0}));
  CHECK(single.size() == 1);
  CHECK(single(0, 0) == 0.0);

  std::vector<Point> tri = {make_point({0, 0}), make_point({1, 0}), make_point({0, 1})};
  auto t = restrict_to(e2, tri, make_point({0, 0}));
  CHECK(t(0, 1) == 1.0);
  CHECK(t(0, 2) == 1.0);
  CHECK(t(1, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(restrict_to(e2, tri, make_point({3, 3})), Error);
}

TEST_CASE("rescale") {
  Matrix m(2, 2);
  m << 0, 2, 2, 0;
  FinitePointedSpace fs(m, 0);
  CHECK(rescale(fs, 1.0) == fs);
  auto half = rescale(fs, 0.5);
  CHECK(half(0, 1) == 1.0);
  CHECK(half.base() == 0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Point> pts;
  for (int i = 0; i < 6; ++i) pts.push_back(make_point({u(rng), u(rng)}));
  auto big = restrict_to(euclidean_space(2), pts, 2);
  auto ab = rescale(rescale(big, 0.25), 8.0);
  auto direct = rescale(big, 2.0);
  CHECK(ab == direct);
  CHECK_THROWS_AS(rescale(fs, 0.0), Error);
}

TEST_CASE("FinitePointedSpace validation") {
  Matrix asym(2, 2);
  asym << 0, 1, 2, 0;
  CHECK_THROWS_AS(FinitePointedSpace(asym, 0), Error);
  Matrix diag(2, 2);
  diag << 1, 1, 1, 0;
  CHECK_THROWS_AS(FinitePointedSpace(diag, 0), Error);
  Matrix ok(2, 2);
  ok << 0, 1, 1, 0;
  CHECK_THROWS_AS(FinitePointedSpace(ok, 2), Error);
}

TEST_CASE("snowflake distance") {
  const MetricSpace e1 = euclidean_space(1);
  const MetricSpace same = snowflake_distance(e1, 1.0);
  CHECK(same.distance(make_point({0}), make_point({3})) == 3.0);
  const MetricSpace half = snowflake_distance(e1, 0.5);
  CHECK(half.distance(make_point({0}), make_point({4})) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(snowflake_distance(e1, 0.0), Error);
  CHECK_THROWS_AS(snowflake_distance(e1, 1.5), Error);
}

TEST_CASE("snowflake preserves the triangle inequality on random triples") {
  const MetricSpace e2 = euclidean_space(2);
  const MetricSpace s = snowflake_distance(e2, 0.3);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    Point p = make_point({u(rng), u(rng)}), q = make_point({u(rng), u(rng)}), r = make_point({u(rng), u(rng)});
    const double dpr = s.distance(p, r), dpq = s.distance(p, q), dqr = s.distance(q, r);
    const double scale = std::max({dpr, dpq, dqr, 1.0});
    worst = std::max(worst, (dpr - dpq - dqr) / scale);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("snowflake composition multiplies exponents") {
  const MetricSpace e3 = euclidean_space(3);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (double a : {0.3, 0.7}) {
    for (double b : {0.5, 0.9}) {
      const MetricSpace twice = snowflake_distance(snowflake_distance(e3, a), b);
      const MetricSpace once = snowflake_distance(e3, a * b);
      for (int i = 0; i < 200; ++i) {
        Point p = make_point({u(rng), u(rng), u(rng)}), q = make_point({u(rng), u(rng), u(rng)});
        const double x = twice.distance(p, q), y = once.distance(p, q);
        CHECK(std::abs(x - y) <= 1e-12 * y);
      }
    }
  }
}

TEST_CASE("metric axioms hold on sampled Euclidean and Heisenberg triples") {
  for (const MetricSpace& s : {euclidean_space(3), heisenberg_space()}) {
    auto pts = sample_ball(s, make_point({0.1, 0.2, 0.0}), 0.6, 7, {.seed = 2});
    auto fs = restrict_to(s, pts, 0);
    CHECK(fs.triangle_defect() <= 1e-12);
    for (std::size_t i = 0; i < fs.size(); ++i) CHECK(s.distance(pts[i], pts[i]) == 0.0);
  }
}

TEST_CASE("sampling density and radius") {
  Matrix m(3, 3);
  m << 0, 1, 3, 1, 0, 2, 3, 2, 0;
  FinitePointedSpace fs(m, 0);
  CHECK(fs.radius() == 3.0);
  CHECK(fs.sampling_density() == 2.0);
  CHECK(FinitePointedSpace().sampling_density() == 0.0);
}
