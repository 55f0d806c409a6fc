#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ttessel/errors.hpp"
#include "ttessel/tessellation.hpp"

// From-scratch construction of a TTessellation out of its raw line pattern.
// Stoppers, junctions and cells are all re-inferred here, independently of the
// incremental operator code, which makes this the loader for external files
// and the cross-check oracle for the local operations.

namespace ttessel {

namespace {

struct NodeSet {
  std::vector<Point> pts;
  double eps;

  int find(Point q) const {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (distance(pts[i], q) <= eps) return static_cast<int>(i);
    }
    return -1;
  }
  int find_or_add(Point q) {
    const int at = find(q);
    if (at >= 0) return at;
    pts.push_back(q);
    return static_cast<int>(pts.size()) - 1;
  }
};

struct REdge {
  int u{-1}, v{-1};
  ObjRef host;
};

[[noreturn]] void reject(const std::string& msg) {
  throw ValidationError("not a T-tessellation: " + msg);
}

}  // namespace

TTessellation rebuild_tessellation(
    const ConvexPolygon& domain,
    const std::vector<std::pair<Line, std::pair<Point, Point>>>& raw) {
  TTessellation t(domain);
  const double eps = t.eps_;
  const double tol_on = 1e-7 * domain.diameter();  // slack for external files
  const int n = static_cast<int>(raw.size());
  const int nsides = static_cast<int>(t.boundary_.size());

  std::vector<SegmentRec> segs(n);
  for (int i = 0; i < n; ++i) {
    const auto& [line, ends] = raw[i];
    if (std::abs(line.offset(ends.first)) > tol_on || std::abs(line.offset(ends.second)) > tol_on) {
      reject("segment " + std::to_string(i) + " endpoint is not on its line");
    }
    double t0 = line.param(ends.first);
    double t1 = line.param(ends.second);
    if (t0 > t1) std::swap(t0, t1);
    if (t1 - t0 <= eps) reject("segment " + std::to_string(i) + " is shorter than tolerance");
    segs[i].line = line;
    segs[i].end[0].t = t0;
    segs[i].end[1].t = t1;
    segs[i].alive = true;
  }

  // Resolve the stopper of every segment extremity and canonicalize the
  // endpoint as the intersection of the two supporting lines.
  for (int i = 0; i < n; ++i) {
    for (int e = 0; e < 2; ++e) {
      const Point q = segs[i].line.at(segs[i].end[e].t);
      int hits = 0;
      ObjRef stopper;
      Point canon = q;
      for (int j = 0; j < nsides; ++j) {
        const BoundarySide& side = t.boundary_[j];
        if (std::abs(side.line.offset(q)) > tol_on) continue;
        const double tq = side.line.param(q);
        if (tq < side.t0 - tol_on || tq > side.t1 + tol_on) continue;
        if (tq <= side.t0 + eps || tq >= side.t1 - eps) {
          reject("segment " + std::to_string(i) + " ends at a domain corner");
        }
        ++hits;
        stopper = ObjRef{ObjRef::Kind::boundary, j};
        if (const auto x = intersect(segs[i].line, side.line)) canon = *x;
      }
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        if (std::abs(segs[j].line.offset(q)) > tol_on) continue;
        const double tq = segs[j].line.param(q);
        if (tq <= segs[j].end[0].t + eps || tq >= segs[j].end[1].t - eps) continue;
        ++hits;
        stopper = ObjRef{ObjRef::Kind::segment, j};
        if (const auto x = intersect(segs[i].line, segs[j].line)) canon = *x;
      }
      if (hits == 0) reject("segment " + std::to_string(i) + " has a dangling extremity");
      if (hits > 1) reject("ambiguous junction at an extremity of segment " + std::to_string(i));
      segs[i].end[e].stopper = stopper;
      segs[i].end[e].t = segs[i].line.param(canon);
    }
    if (segs[i].end[1].t - segs[i].end[0].t <= eps) {
      reject("segment " + std::to_string(i) + " collapses after canonicalization");
    }
  }

  // Degree-four vertices: extremities of two segments may not coincide.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int ei = 0; ei < 2; ++ei) {
        for (int ej = 0; ej < 2; ++ej) {
          if (distance(segs[i].line.at(segs[i].end[ei].t), segs[j].line.at(segs[j].end[ej].t)) <=
              eps) {
            reject("extremities of segments " + std::to_string(i) + " and " + std::to_string(j) +
                   " coincide (degree-four vertex)");
          }
        }
      }
    }
  }

  // Interior crossings and maximality.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Point b0 = segs[j].line.at(segs[j].end[0].t);
      const Point b1 = segs[j].line.at(segs[j].end[1].t);
      if (std::abs(segs[i].line.offset(b0)) <= eps && std::abs(segs[i].line.offset(b1)) <= eps) {
        const double p0 = segs[i].line.param(b0);
        const double p1 = segs[i].line.param(b1);
        if (std::max(p0, p1) >= segs[i].end[0].t - eps &&
            std::min(p0, p1) <= segs[i].end[1].t + eps) {
          reject("segments " + std::to_string(i) + " and " + std::to_string(j) +
                 " are collinear and touching (not maximal)");
        }
        continue;
      }
      const auto x = intersect(segs[i].line, segs[j].line);
      if (!x) continue;
      const double ti = segs[i].line.param(*x);
      const double tj = segs[j].line.param(*x);
      if (ti > segs[i].end[0].t + eps && ti < segs[i].end[1].t - eps &&
          tj > segs[j].end[0].t + eps && tj < segs[j].end[1].t - eps) {
        reject("segments " + std::to_string(i) + " and " + std::to_string(j) +
               " cross (X vertex)");
      }
    }
  }

  // Junction registration.
  std::vector<std::vector<Junction>> side_junctions(nsides);
  for (int i = 0; i < n; ++i) {
    for (int e = 0; e < 2; ++e) {
      const ObjRef host = segs[i].end[e].stopper;
      const Point q = segs[i].line.at(segs[i].end[e].t);
      if (host.is_segment()) {
        segs[host.id].junctions.push_back(
            Junction{segs[host.id].line.param(q), i, static_cast<std::uint8_t>(e)});
      } else {
        side_junctions[host.id].push_back(
            Junction{t.boundary_[host.id].line.param(q), i, static_cast<std::uint8_t>(e)});
      }
    }
  }
  auto sort_and_check = [&](std::vector<Junction>& js, const std::string& what) {
    std::sort(js.begin(), js.end(), [](const Junction& a, const Junction& b) { return a.t < b.t; });
    for (std::size_t k = 1; k < js.size(); ++k) {
      if (js[k].t - js[k - 1].t <= eps) reject("junctions closer than tolerance on " + what);
    }
  };
  for (int i = 0; i < n; ++i) sort_and_check(segs[i].junctions, "segment " + std::to_string(i));
  for (int j = 0; j < nsides; ++j) sort_and_check(side_junctions[j], "a boundary side");

  // Planar subdivision nodes and edges.
  NodeSet nodes{{}, eps};
  const auto& corners = domain.vertices();
  for (const Point& c : corners) nodes.find_or_add(c);
  std::vector<std::array<int, 2>> end_node(n, {-1, -1});
  for (int i = 0; i < n; ++i) {
    for (int e = 0; e < 2; ++e) {
      end_node[i][e] = nodes.find_or_add(segs[i].line.at(segs[i].end[e].t));
    }
  }

  std::vector<REdge> edges;
  auto emit_chain = [&](const Line& line, double t_first, int node_first, double t_last,
                        int node_last, const std::vector<Junction>& js, ObjRef host) {
    (void)line;
    (void)t_first;
    (void)t_last;
    int prev = node_first;
    for (const Junction& j : js) {
      const int mid = end_node[j.seg][j.seg_end];
      edges.push_back(REdge{prev, mid, host});
      prev = mid;
    }
    edges.push_back(REdge{prev, node_last, host});
  };
  for (int j = 0; j < nsides; ++j) {
    const BoundarySide& side = t.boundary_[j];
    const Point a = corners[j];
    const Point b = corners[(j + 1) % nsides];
    const int na = nodes.find(a);
    const int nb = nodes.find(b);
    std::vector<Junction> js = side_junctions[j];
    if (side.line.param(a) > side.line.param(b)) std::reverse(js.begin(), js.end());
    emit_chain(side.line, side.line.param(a), na, side.line.param(b), nb, js,
               ObjRef{ObjRef::Kind::boundary, j});
  }
  for (int i = 0; i < n; ++i) {
    emit_chain(segs[i].line, segs[i].end[0].t, end_node[i][0], segs[i].end[1].t, end_node[i][1],
               segs[i].junctions, ObjRef{ObjRef::Kind::segment, i});
  }

  // Half-edge face walk: interiors lie left of directed edges, so inner faces
  // come out counter-clockwise and the single outer face clockwise.
  const int ne = static_cast<int>(edges.size());
  const int nv = static_cast<int>(nodes.pts.size());
  struct Half {
    int from, to, edge;
  };
  std::vector<Half> halves(2 * ne);
  std::vector<std::vector<int>> outgoing(nv);
  for (int k = 0; k < ne; ++k) {
    halves[2 * k] = Half{edges[k].u, edges[k].v, k};
    halves[2 * k + 1] = Half{edges[k].v, edges[k].u, k};
    outgoing[edges[k].u].push_back(2 * k);
    outgoing[edges[k].v].push_back(2 * k + 1);
  }
  auto angle_of = [&](int h) {
    const Point d = nodes.pts[halves[h].to] - nodes.pts[halves[h].from];
    return std::atan2(d.y, d.x);
  };
  std::vector<int> rank(2 * ne, -1);
  for (int v = 0; v < nv; ++v) {
    auto& out = outgoing[v];
    std::sort(out.begin(), out.end(), [&](int a, int b) { return angle_of(a) < angle_of(b); });
    for (std::size_t r = 0; r < out.size(); ++r) rank[out[r]] = static_cast<int>(r);
  }
  auto next_half = [&](int h) {
    const int rev = h ^ 1;
    const auto& out = outgoing[halves[h].to];
    const int r = rank[rev];
    return out[(r + static_cast<int>(out.size()) - 1) % out.size()];
  };

  std::vector<char> seen(2 * ne, 0);
  int outer_faces = 0;
  std::vector<std::pair<std::vector<Point>, std::vector<ObjRef>>> faces;
  for (int h0 = 0; h0 < 2 * ne; ++h0) {
    if (seen[h0]) continue;
    std::vector<int> cycle;
    int h = h0;
    do {
      seen[h] = 1;
      cycle.push_back(h);
      h = next_half(h);
    } while (h != h0);
    std::vector<Point> ring;
    std::vector<ObjRef> support;
    for (int hh : cycle) {
      ring.push_back(nodes.pts[halves[hh].from]);
      support.push_back(edges[halves[hh].edge].host);
    }
    if (ring_area(ring) < 0.0) {
      ++outer_faces;
      continue;
    }
    // Collapse pass-through vertices (collinear runs on one host).
    std::vector<Point> min_ring;
    std::vector<ObjRef> min_support;
    const int m = static_cast<int>(ring.size());
    for (int i = 0; i < m; ++i) {
      const int prev = (i + m - 1) % m;
      if (support[prev] == support[i]) continue;
      min_ring.push_back(ring[i]);
      min_support.push_back(support[i]);
    }
    if (min_ring.size() < 3) reject("degenerate face in subdivision");
    const int mm = static_cast<int>(min_ring.size());
    for (int i = 0; i < mm; ++i) {
      const Point a = min_ring[i];
      const Point b = min_ring[(i + 1) % mm];
      const Point c = min_ring[(i + 2) % mm];
      if (cross(b - a, c - b) <= 0.0) reject("non-convex cell in subdivision");
    }
    faces.push_back({std::move(min_ring), std::move(min_support)});
  }
  if (outer_faces != 1) reject("subdivision is not connected");
  if (static_cast<int>(faces.size()) != n + 1) {
    reject("cell count is " + std::to_string(faces.size()) + ", expected " + std::to_string(n + 1));
  }

  // Install the structure.
  t.index_remove(t.alive_cells_[0]);
  t.drop_cell(t.alive_cells_[0]);
  t.segments_ = std::move(segs);
  t.int_pos_.assign(n, -1);
  t.nb_pos_.assign(n, -1);
  t.b_pos_.assign(n, -1);
  t.cells_on_segment_.assign(n, {});
  for (int j = 0; j < nsides; ++j) t.boundary_[j].junctions = std::move(side_junctions[j]);
  for (int i = 0; i < n; ++i) {
    t.internal_.push_back(i);
    t.int_pos_[i] = i;
    if (t.segments_[i].blocking()) {
      t.b_pos_[i] = static_cast<std::int32_t>(t.blocking_.size());
      t.blocking_.push_back(i);
    } else {
      t.nb_pos_[i] = static_cast<std::int32_t>(t.nonblocking_.size());
      t.nonblocking_.push_back(i);
    }
  }
  for (auto& [ring, support] : faces) {
    const int id = t.make_cell(std::move(ring), std::move(support));
    t.index_add(id);
  }
  const BasicStats st = t.statistics_basic();
  t.u_ = st.u;
  t.a2_ = st.a2;
  t.angle_sum_ = st.angle_sum;

  const double total = st.u;  // cells exist; partition check
  (void)total;
  double area_sum = 0.0;
  for (int id : t.alive_cells_) area_sum += t.cells_[id].area;
  if (std::abs(area_sum - domain.area()) > 1e-6 * domain.area()) {
    reject("cells do not partition the domain");
  }
  return t;
}

}  // namespace ttessel
