#ifndef TTESSEL_TESTS_HELPERS_HPP
#define TTESSEL_TESTS_HELPERS_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ttessel/geometry.hpp"
#include "ttessel/tessellation.hpp"

namespace testsupport {

inline double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / xs.size();
}

inline double variance(const std::vector<double>& xs) {
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / (xs.size() - 1);
}

inline double sd(const std::vector<double>& xs) { return std::sqrt(variance(xs)); }

inline double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

inline double quantile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  const double pos = q * (xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (pos - lo) * (xs[hi] - xs[lo]);
}

/// |p_hat - p| within 3 binomial standard errors.
inline bool binomial_3sigma(double successes, double trials, double p) {
  const double se = std::sqrt(p * (1.0 - p) / trials);
  return std::abs(successes / trials - p) <= 3.0 * se;
}

inline double chi_square_uniform(const std::vector<int>& counts, int total) {
  const double expected = static_cast<double>(total) / counts.size();
  double stat = 0.0;
  for (int c : counts) stat += (c - expected) * (c - expected) / expected;
  return stat;
}

inline double lag1_autocorrelation(const std::vector<double>& xs) {
  const double m = mean(xs);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) num += (xs[i] - m) * (xs[i + 1] - m);
  for (double x : xs) den += (x - m) * (x - m);
  return num / den;
}

/// Random strictly convex polygon: points on a circle at sorted random
/// angles with jittered radii kept convex by construction fallback.
inline ttessel::ConvexPolygon random_convex_polygon(ttessel::Rng& rng, int max_vertices = 9) {
  std::uniform_int_distribution<int> nv(3, max_vertices);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const int n = nv(rng);
    std::vector<double> angles(n);
    for (double& a : angles) a = 2.0 * std::numbers::pi * unit(rng);
    std::sort(angles.begin(), angles.end());
    const double r = 0.5 + 2.0 * unit(rng);
    const double cx = 4.0 * (unit(rng) - 0.5);
    const double cy = 4.0 * (unit(rng) - 0.5);
    std::vector<ttessel::Point> pts(n);
    for (int i = 0; i < n; ++i) {
      pts[i] = {cx + r * std::cos(angles[i]), cy + r * std::sin(angles[i])};
    }
    try {
      return ttessel::ConvexPolygon(pts);  // rejects near-collinear draws
    } catch (...) {
    }
  }
}

/// Independent oracle for uniform isotropic hitting lines: rejection from an
/// explicit disk around the polygon, without the library's sampler.
inline ttessel::Line rejection_line_oracle(const ttessel::ConvexPolygon& poly, ttessel::Rng& rng,
                                           ttessel::Point center, double radius) {
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::uniform_real_distribution<double> span(-1.0, 1.0);
  for (;;) {
    const double a = angle(rng);
    const ttessel::Point n{std::cos(a), std::sin(a)};
    const double p = dot(center, n) + radius * span(rng);
    const ttessel::Line line{a, p};
    if (ttessel::chord(poly, line)) return line;
  }
}

/// Grows a tessellation by n random accepted splits.
inline void grow_by_splits(ttessel::TTessellation& t, int n, ttessel::Rng& rng) {
  for (int i = 0; i < n; ++i) t.apply_split(t.sample_split(rng));
}

inline ttessel::ConvexPolygon unit_square() {
  return ttessel::ConvexPolygon({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
}

inline ttessel::ConvexPolygon square(double side) {
  return ttessel::ConvexPolygon({{0.0, 0.0}, {side, 0.0}, {side, side}, {0.0, side}});
}

inline ttessel::ConvexPolygon rectangle(double w, double h) {
  return ttessel::ConvexPolygon({{0.0, 0.0}, {w, 0.0}, {w, h}, {0.0, h}});
}

/// Brick-wall T-tessellation: `rows` full-width horizontal chords, then
/// vertical chords per row with half-brick offsets on alternating rows.
inline ttessel::TTessellation brick_wall(double side, int rows, int cols) {
  using namespace ttessel;
  TTessellation t = TTessellation::empty(
      ConvexPolygon({{0.0, 0.0}, {side, 0.0}, {side, side}, {0.0, side}}));
  const double pi2 = std::numbers::pi / 2.0;
  for (int r = 1; r < rows; ++r) {
    const double y = side * r / rows;
    // horizontal line y = const: normal (0,1), offset y
    const Point probe{side / 2.0, y};
    for (int cid : t.cell_ids()) {
      const auto eff = t.split_effect(Split{cid, Line{pi2, y}});
      if (eff) {
        t.apply_split(*eff);
        break;
      }
    }
    (void)probe;
  }
  for (int r = 0; r < rows; ++r) {
    const double y_mid = side * (r + 0.5) / rows;
    for (int c = 1; c < cols; ++c) {
      const double x = side * (c + (r % 2 ? 0.5 : 0.0)) / cols;
      if (x >= side) continue;
      for (int cid : t.cell_ids()) {
        const auto& ring = t.cell(cid).ring;
        double lo = 1e300, hi = -1e300, ylo = 1e300, yhi = -1e300;
        for (const auto& v : ring) {
          lo = std::min(lo, v.x);
          hi = std::max(hi, v.x);
          ylo = std::min(ylo, v.y);
          yhi = std::max(yhi, v.y);
        }
        if (!(x > lo && x < hi && y_mid > ylo && y_mid < yhi)) continue;
        const auto eff = t.split_effect(Split{cid, Line{0.0, x}});
        if (eff) {
          t.apply_split(*eff);
          break;
        }
      }
    }
  }
  return t;
}

}  // namespace testsupport

#endif
