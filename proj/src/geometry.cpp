#include "ttessel/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ttessel/errors.hpp"

namespace ttessel {

namespace {
constexpr double kPi = std::numbers::pi;
}

double norm(Point a) { return std::hypot(a.x, a.y); }
double distance(Point a, Point b) { return norm(a - b); }

Point Line::normal() const { return {std::cos(alpha), std::sin(alpha)}; }
Point Line::direction() const { return {-std::sin(alpha), std::cos(alpha)}; }
Point Line::at(double t) const { return p * normal() + t * direction(); }
double Line::param(Point q) const { return dot(q, direction()); }
double Line::offset(Point q) const { return dot(q, normal()) - p; }

Line Line::from_angle_offset(double alpha, double p) {
  double a = std::fmod(alpha, kPi);
  if (a < 0.0) a += kPi;
  if (a >= kPi) a = 0.0;  // fmod rounding at the seam
  // Flipping the normal by pi flips the sign of the offset.
  double offs = p;
  double turns = std::round((alpha - a) / kPi);
  if (std::fmod(std::abs(turns), 2.0) == 1.0) offs = -p;
  return Line{a, offs};
}

Line Line::through(Point a, Point b) {
  const Point d = b - a;
  const double len = norm(d);
  if (len == 0.0) throw GeometryError("line through coincident points");
  Point n{-d.y / len, d.x / len};
  double alpha = std::atan2(n.y, n.x);
  if (alpha < 0.0) {
    alpha += kPi;
    n = -1.0 * n;
  }
  if (alpha >= kPi) {
    alpha -= kPi;
  }
  return Line{alpha, dot(a, n)};
}

std::optional<Point> intersect(const Line& a, const Line& b) {
  const Point na = a.normal();
  const Point nb = b.normal();
  const double det = cross(na, nb);
  if (std::abs(det) < 1e-14) return std::nullopt;
  return Point{(a.p * nb.y - b.p * na.y) / det, (b.p * na.x - a.p * nb.x) / det};
}

double acute_angle(const Line& a, const Line& b) {
  double d = std::abs(a.alpha - b.alpha);
  if (d > kPi / 2.0) d = kPi - d;
  return d;
}

namespace {

Circle circle_from(Point a, Point b) {
  return {0.5 * (a + b), 0.5 * distance(a, b)};
}

Circle circle_from(Point a, Point b, Point c) {
  const double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
  if (std::abs(d) < 1e-300) return circle_from(a, b);
  const double a2 = dot(a, a), b2 = dot(b, b), c2 = dot(c, c);
  Point center{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
               (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
  return {center, distance(center, a)};
}

bool in_circle(const Circle& c, Point q, double slack) {
  return distance(c.center, q) <= c.radius + slack;
}

}  // namespace

Circle smallest_enclosing_circle(std::span<const Point> points) {
  if (points.empty()) throw GeometryError("enclosing circle of empty point set");
  std::vector<Point> pts(points.begin(), points.end());
  // Deterministic shuffle keeps results reproducible across runs.
  std::mt19937_64 shuffler(0x5eed5eedULL);
  std::shuffle(pts.begin(), pts.end(), shuffler);

  double scale = 0.0;
  for (const Point& q : pts) scale = std::max({scale, std::abs(q.x), std::abs(q.y)});
  const double slack = 1e-12 * std::max(1.0, scale);

  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (in_circle(c, pts[i], slack)) continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (in_circle(c, pts[j], slack)) continue;
      c = circle_from(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (in_circle(c, pts[k], slack)) continue;
        c = circle_from(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c;
}

ConvexPolygon::ConvexPolygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) throw ValidationError("polygon needs at least 3 vertices");
  for (const Point& v : vertices_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw ValidationError("polygon vertex is not finite");
    }
  }
  double signed_area = 0.0;
  const std::size_t n0 = vertices_.size();
  for (std::size_t i = 0; i < n0; ++i) {
    signed_area += cross(vertices_[i], vertices_[(i + 1) % n0]);
  }
  if (signed_area < 0.0) std::reverse(vertices_.begin(), vertices_.end());

  double diam = 0.0;
  for (std::size_t i = 0; i < n0; ++i) {
    for (std::size_t j = i + 1; j < n0; ++j) {
      diam = std::max(diam, distance(vertices_[i], vertices_[j]));
    }
  }
  if (diam == 0.0) throw ValidationError("degenerate polygon (zero diameter)");
  const double tol = 1e-9 * diam;

  // Collapse collinear runs and duplicated vertices.
  std::vector<Point> cleaned;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point prev = vertices_[(i + n - 1) % n];
    const Point cur = vertices_[i];
    const Point next = vertices_[(i + 1) % n];
    if (distance(cur, next) <= tol) continue;
    const double c = cross(cur - prev, next - cur);
    if (std::abs(c) <= tol * std::max(distance(cur, prev), distance(next, cur))) continue;
    cleaned.push_back(cur);
  }
  if (cleaned.size() < 3) throw ValidationError("degenerate polygon (zero area)");
  vertices_ = std::move(cleaned);

  const std::size_t m = vertices_.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point a = vertices_[i];
    const Point b = vertices_[(i + 1) % m];
    const Point c = vertices_[(i + 2) % m];
    if (cross(b - a, c - b) <= 0.0) {
      throw ValidationError("polygon is not strictly convex");
    }
  }
}

double ring_area(std::span<const Point> ring) {
  double s = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) s += cross(ring[i], ring[(i + 1) % n]);
  return 0.5 * s;
}

double ring_perimeter(std::span<const Point> ring) {
  double s = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) s += distance(ring[i], ring[(i + 1) % n]);
  return s;
}

double ConvexPolygon::area() const {
  const double a = ring_area(vertices_);
  if (a <= 0.0) throw ValidationError("degenerate polygon (zero area)");
  return a;
}

double ConvexPolygon::perimeter() const { return ring_perimeter(vertices_); }

double ConvexPolygon::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
      d = std::max(d, distance(vertices_[i], vertices_[j]));
    }
  }
  return d;
}

Point ConvexPolygon::centroid() const {
  double a = 0.0;
  Point c{0.0, 0.0};
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point u = vertices_[i];
    const Point v = vertices_[(i + 1) % n];
    const double w = cross(u, v);
    a += w;
    c = c + w * (u + v);
  }
  return (1.0 / (3.0 * a)) * c;
}

bool ConvexPolygon::contains(Point q, double eps) const {
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = vertices_[i];
    const Point b = vertices_[(i + 1) % n];
    const double len = distance(a, b);
    if (cross(b - a, q - a) < -eps * len) return false;
  }
  return true;
}

std::optional<std::pair<Point, Point>> chord(const ConvexPolygon& poly, const Line& line,
                                             double eps) {
  if (eps < 0.0) eps = 1e-9 * poly.diameter();
  const auto& vs = poly.vertices();
  const std::size_t n = vs.size();

  // Collect the parameter span of boundary points on the line.
  double tmin = 0.0, tmax = 0.0;
  bool any = false;
  auto add = [&](double t) {
    if (!any) {
      tmin = tmax = t;
      any = true;
    } else {
      tmin = std::min(tmin, t);
      tmax = std::max(tmax, t);
    }
  };

  std::vector<double> off(n);
  for (std::size_t i = 0; i < n; ++i) off[i] = line.offset(vs[i]);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(off[i]) <= eps) add(line.param(vs[i]));
    const std::size_t j = (i + 1) % n;
    if ((off[i] > eps && off[j] < -eps) || (off[i] < -eps && off[j] > eps)) {
      const auto hit = intersect(line, Line::through(vs[i], vs[j]));
      if (hit) add(line.param(*hit));
    }
  }
  if (!any || tmax - tmin <= eps) return std::nullopt;
  return std::make_pair(line.at(tmin), line.at(tmax));
}

Line sample_hitting_line(const Circle& circle, const ConvexPolygon& poly, Rng& rng, double eps) {
  if (eps < 0.0) eps = 1e-9 * poly.diameter();
  std::uniform_real_distribution<double> angle(0.0, kPi);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (;;) {
    const double alpha = angle(rng);
    const Point n{std::cos(alpha), std::sin(alpha)};
    const double p = dot(circle.center, n) + circle.radius * unit(rng);
    const Line line{alpha, p};
    if (chord(poly, line, eps)) return line;
  }
}

Line sample_hitting_line(const ConvexPolygon& poly, Rng& rng) {
  const Circle c = smallest_enclosing_circle(poly.vertices());
  return sample_hitting_line(c, poly, rng);
}

}  // namespace ttessel
