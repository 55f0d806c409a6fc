#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support/helpers.hpp"
#include "ttessel/errors.hpp"
#include "ttessel/geometry.hpp"

using namespace ttessel;
using namespace testsupport;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("area of simple polygons") {
  CHECK(unit_square().area() == doctest::Approx(1.0));
  CHECK(ConvexPolygon({{0, 0}, {1, 0}, {0, 1}}).area() == doctest::Approx(0.5));
  CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}, {2, 0}}), ValidationError);
}

TEST_CASE("area matches a rejection-sampling hit-count oracle") {
  Rng rng(20240901);
  for (int rep = 0; rep < 5; ++rep) {
    const ConvexPolygon poly = random_convex_polygon(rng);
    ttessel::Point lo = poly.vertices()[0], hi = lo;
    for (const Point& v : poly.vertices()) {
      lo.x = std::min(lo.x, v.x);
      lo.y = std::min(lo.y, v.y);
      hi.x = std::max(hi.x, v.x);
      hi.y = std::max(hi.y, v.y);
    }
    const double box = (hi.x - lo.x) * (hi.y - lo.y);
    const int n = 100000;
    std::uniform_real_distribution<double> ux(lo.x, hi.x), uy(lo.y, hi.y);
    int hits = 0;
    for (int i = 0; i < n; ++i) {
      if (poly.contains({ux(rng), uy(rng)})) ++hits;
    }
    const double p = poly.area() / box;
    CHECK(binomial_3sigma(hits, n, p));
  }
}

TEST_CASE("perimeter of simple polygons") {
  CHECK(unit_square().perimeter() == doctest::Approx(4.0));
  CHECK(rectangle(2.0, 1.0).perimeter() == doctest::Approx(6.0));
  std::vector<Point> hex;
  for (int k = 0; k < 6; ++k) {
    hex.push_back({std::cos(kPi * k / 3.0), std::sin(kPi * k / 3.0)});
  }
  CHECK(ConvexPolygon(hex).perimeter() == doctest::Approx(6.0));
}

TEST_CASE("area and perimeter are rigid-motion invariant") {
  Rng rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const ConvexPolygon poly = random_convex_polygon(rng);
    const double phi = 2.0 * kPi * unit(rng);
    const Point shift{10.0 * (unit(rng) - 0.5), 10.0 * (unit(rng) - 0.5)};
    std::vector<Point> moved;
    for (const Point& v : poly.vertices()) {
      moved.push_back({shift.x + v.x * std::cos(phi) - v.y * std::sin(phi),
                       shift.y + v.x * std::sin(phi) + v.y * std::cos(phi)});
    }
    const ConvexPolygon m(moved);
    CHECK(m.area() == doctest::Approx(poly.area()).epsilon(1e-9));
    CHECK(m.perimeter() == doctest::Approx(poly.perimeter()).epsilon(1e-9));
  }
}

TEST_CASE("chord of the unit square") {
  const ConvexPolygon sq = unit_square();
  SUBCASE("vertical line x = 0.5") {
    const auto c = chord(sq, Line{0.0, 0.5});
    REQUIRE(c);
    const auto [a, b] = *c;
    CHECK(std::min(a.y, b.y) == doctest::Approx(0.0));
    CHECK(std::max(a.y, b.y) == doctest::Approx(1.0));
    CHECK(a.x == doctest::Approx(0.5));
    CHECK(b.x == doctest::Approx(0.5));
  }
  SUBCASE("line x = 2 misses") { CHECK_FALSE(chord(sq, Line{0.0, 2.0})); }
  SUBCASE("diagonal through the center has length sqrt(2)") {
    const Line diag = Line::through({0.25, 0.25}, {0.75, 0.75});
    const auto c = chord(sq, diag);
    REQUIRE(c);
    CHECK(distance(c->first, c->second) == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("tangency at a vertex counts as a miss") {
    const Line touch = Line::through({-1.0, 1.0}, {1.0, -1.0});  // only the corner (0,0)
    CHECK_FALSE(chord(sq, touch));
  }
}

TEST_CASE("chord endpoints lie on the polygon boundary") {
  Rng rng(99);
  for (int rep = 0; rep < 200; ++rep) {
    const ConvexPolygon poly = random_convex_polygon(rng);
    const Line line = sample_hitting_line(poly, rng);
    const auto c = chord(poly, line);
    REQUIRE(c);
    const double tol = 1e-7 * poly.diameter();
    for (const Point& q : {c->first, c->second}) {
      double dist = 1e300;
      const auto& vs = poly.vertices();
      for (std::size_t i = 0; i < vs.size(); ++i) {
        const Point a = vs[i], b = vs[(i + 1) % vs.size()];
        const Line edge = Line::through(a, b);
        dist = std::min(dist, std::abs(edge.offset(q)));
      }
      CHECK(dist <= tol);
    }
  }
}

TEST_CASE("hitting lines on a near-disk have uniform chord midpoint angle") {
  std::vector<Point> gon;
  for (int k = 0; k < 64; ++k) {
    gon.push_back({std::cos(2.0 * kPi * k / 64), std::sin(2.0 * kPi * k / 64)});
  }
  const ConvexPolygon disk(gon);
  Rng rng(4242);
  const int n = 100000;
  std::vector<int> counts(16, 0);
  for (int i = 0; i < n; ++i) {
    const Line line = sample_hitting_line(disk, rng);
    const auto c = chord(disk, line);
    REQUIRE(c);
    const Point mid = 0.5 * (c->first + c->second);
    double angle = std::atan2(mid.y, mid.x);
    if (angle < 0.0) angle += 2.0 * kPi;
    ++counts[std::min<std::size_t>(15, static_cast<std::size_t>(angle / (2.0 * kPi) * 16))];
  }
  // chi-square with 15 degrees of freedom at the 1% level
  CHECK(chi_square_uniform(counts, n) < 30.5779);
}

TEST_CASE("hitting probability of a sub-polygon matches the rejection oracle") {
  const ConvexPolygon sq = unit_square();
  const ConvexPolygon half({{0.0, 0.0}, {0.5, 0.0}, {0.5, 1.0}, {0.0, 1.0}});
  Rng rng(31337);
  const int n = 100000;
  int hit_sampler = 0, hit_oracle = 0;
  const Circle big{{0.5, 0.5}, 0.8};  // any disk covering the square works
  for (int i = 0; i < n; ++i) {
    if (chord(half, sample_hitting_line(sq, rng))) ++hit_sampler;
    if (chord(half, rejection_line_oracle(sq, rng, big.center, big.radius))) ++hit_oracle;
  }
  // Both estimate P(hit K | hit D) = perimeter(K)/perimeter(D) = 3/4.
  const double p = half.perimeter() / sq.perimeter();
  CHECK(binomial_3sigma(hit_sampler, n, p));
  CHECK(binomial_3sigma(hit_oracle, n, p));
  CHECK(std::abs(hit_sampler - hit_oracle) / static_cast<double>(n) <
        3.0 * std::sqrt(2.0 * p * (1.0 - p) / n));
}

TEST_CASE("sampled hitting lines always produce a chord") {
  Rng rng(55);
  for (int rep = 0; rep < 20; ++rep) {
    const ConvexPolygon poly = random_convex_polygon(rng);
    for (int i = 0; i < 50; ++i) {
      CHECK(chord(poly, sample_hitting_line(poly, rng)));
    }
  }
}

TEST_CASE("smallest enclosing circle encloses and is tight") {
  Rng rng(8);
  for (int rep = 0; rep < 50; ++rep) {
    const ConvexPolygon poly = random_convex_polygon(rng);
    const Circle c = smallest_enclosing_circle(poly.vertices());
    double furthest = 0.0;
    for (const Point& v : poly.vertices()) furthest = std::max(furthest, distance(c.center, v));
    CHECK(furthest <= c.radius * (1.0 + 1e-9) + 1e-12);
    // at least two vertices on the circle boundary
    int on = 0;
    for (const Point& v : poly.vertices()) {
      if (std::abs(distance(c.center, v) - c.radius) < 1e-7 * c.radius) ++on;
    }
    CHECK(on >= 2);
  }
}

TEST_CASE("line normalization keeps alpha in [0, pi)") {
  const Line l = Line::from_angle_offset(kPi + 0.3, 2.0);
  CHECK(l.alpha == doctest::Approx(0.3));
  CHECK(l.p == doctest::Approx(-2.0));
  const Line m = Line::through({0, 1}, {1, 0});
  CHECK(m.alpha >= 0.0);
  CHECK(m.alpha < kPi);
  CHECK(std::abs(m.offset({0, 1})) < 1e-12);
  CHECK(std::abs(m.offset({1, 0})) < 1e-12);
}
