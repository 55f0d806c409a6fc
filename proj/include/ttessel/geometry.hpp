#ifndef TTESSEL_GEOMETRY_HPP
#define TTESSEL_GEOMETRY_HPP

#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace ttessel {

using Rng = std::mt19937_64;

struct Point {
  double x{0.0};
  double y{0.0};
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a);
double distance(Point a, Point b);

/// Directed line in angle-offset form: {q : q.x cos(alpha) + q.y sin(alpha) = p}
/// with alpha in [0, pi). Points on the line are parameterized as
/// at(t) = p * normal + t * direction, direction = normal rotated by +pi/2.
struct Line {
  double alpha{0.0};
  double p{0.0};

  Point normal() const;
  Point direction() const;
  Point at(double t) const;
  /// Curvilinear parameter of the projection of q onto the line.
  double param(Point q) const;
  /// Signed distance of q from the line (positive on the normal side).
  double offset(Point q) const;

  static Line from_angle_offset(double alpha, double p);
  static Line through(Point a, Point b);
};

/// Intersection point of two lines; nullopt when nearly parallel.
std::optional<Point> intersect(const Line& a, const Line& b);

/// Acute angle between the directions of two lines, in [0, pi/2].
double acute_angle(const Line& a, const Line& b);

struct Circle {
  Point center;
  double radius{0.0};
};

/// Smallest circle enclosing all points (Welzl's algorithm).
Circle smallest_enclosing_circle(std::span<const Point> points);

/// Convex polygon with counter-clockwise vertices. The constructor
/// validates convexity and simplicity, orients the ring CCW and collapses
/// collinear vertex runs.
class ConvexPolygon {
 public:
  explicit ConvexPolygon(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  double area() const;
  double perimeter() const;
  double diameter() const;
  Point centroid() const;
  bool contains(Point q, double eps = 0.0) const;

 private:
  std::vector<Point> vertices_;
};

double ring_area(std::span<const Point> ring);
double ring_perimeter(std::span<const Point> ring);

/// Intersection of a line with a closed convex polygon. Tangency at a single
/// vertex and chords shorter than eps count as misses. eps < 0 selects
/// 1e-9 * polygon diameter.
std::optional<std::pair<Point, Point>> chord(const ConvexPolygon& poly, const Line& line,
                                             double eps = -1.0);

/// Uniform isotropic random line hitting the polygon, i.e. a draw from the
/// kinematic measure d(alpha) d(p) restricted to hitting lines. Sampled by
/// rejection from the smallest enclosing circle.
Line sample_hitting_line(const ConvexPolygon& poly, Rng& rng);
Line sample_hitting_line(const Circle& circle, const ConvexPolygon& poly, Rng& rng,
                         double eps = -1.0);

}  // namespace ttessel

#endif
