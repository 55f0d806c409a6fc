#include "ttessel/tessellation.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ttessel/errors.hpp"

namespace ttessel {

namespace {

constexpr double kPi = std::numbers::pi;

void list_add(std::vector<SegId>& list, std::vector<std::int32_t>& pos, SegId id) {
  pos[id] = static_cast<std::int32_t>(list.size());
  list.push_back(id);
}

void list_remove(std::vector<SegId>& list, std::vector<std::int32_t>& pos, SegId id) {
  const std::int32_t at = pos[id];
  assert(at >= 0);
  const SegId last = list.back();
  list[at] = last;
  pos[last] = at;
  list.pop_back();
  pos[id] = -1;
}

/// Joins two convex rings sharing one edge (traversed in opposite directions)
/// and drops seam vertices whose two incident edges end up on the same
/// support, which is exactly the set of vertices that stop being subdivision
/// vertices. `edge_a`/`edge_b` index the shared edge in each ring.
void union_rings(const std::vector<Point>& ra, const std::vector<ObjRef>& sa, int edge_a,
                 const std::vector<Point>& rb, const std::vector<ObjRef>& sb, int edge_b,
                 std::vector<Point>& out_ring, std::vector<ObjRef>& out_support) {
  const int na = static_cast<int>(ra.size());
  const int nb = static_cast<int>(rb.size());
  std::vector<Point> ring;
  std::vector<ObjRef> support;
  ring.reserve(na + nb - 2);
  support.reserve(na + nb - 2);
  for (int i = 1; i < na; ++i) {
    const int k = (edge_a + i) % na;
    ring.push_back(ra[k]);
    support.push_back(sa[k]);
  }
  for (int i = 1; i < nb; ++i) {
    const int k = (edge_b + i) % nb;
    ring.push_back(rb[k]);
    support.push_back(sb[k]);
  }
  const int m = static_cast<int>(ring.size());
  out_ring.clear();
  out_support.clear();
  for (int i = 0; i < m; ++i) {
    const int prev = (i + m - 1) % m;
    if (support[prev] == support[i]) continue;  // seam vertex died
    out_ring.push_back(ring[i]);
    out_support.push_back(support[i]);
  }
}

}  // namespace

TTessellation::TTessellation(ConvexPolygon domain) : domain_(std::move(domain)) {
  eps_ = 1e-9 * domain_.diameter();
  const auto& vs = domain_.vertices();
  const int n = static_cast<int>(vs.size());
  boundary_.resize(n);
  std::vector<ObjRef> support(n);
  for (int i = 0; i < n; ++i) {
    const Point a = vs[i];
    const Point b = vs[(i + 1) % n];
    BoundarySide side;
    side.line = Line::through(a, b);
    side.t0 = side.line.param(a);
    side.t1 = side.line.param(b);
    if (side.t0 > side.t1) std::swap(side.t0, side.t1);
    boundary_[i] = side;
    support[i] = ObjRef{ObjRef::Kind::boundary, i};
  }
  cells_on_side_.resize(n);
  const int c0 = make_cell(vs, support);
  index_add(c0);
  u_ = cells_[c0].perimeter;
  a2_ = cells_[c0].area * cells_[c0].area;
  angle_sum_ = 0.0;
}

const SegmentRec& TTessellation::segment(SegId id) const {
  if (id < 0 || id >= static_cast<SegId>(segments_.size()) || !segments_[id].alive) {
    throw ValidationError("invalid segment id");
  }
  return segments_[id];
}

Point TTessellation::segment_endpoint(SegId id, int end) const {
  const SegmentRec& s = segment(id);
  return s.line.at(s.end[end ? 1 : 0].t);
}

const CellRec& TTessellation::cell(int id) const {
  if (id < 0 || id >= static_cast<int>(cells_.size()) || !cells_[id].alive) {
    throw ValidationError("invalid cell id");
  }
  return cells_[id];
}

ConvexPolygon TTessellation::cell_polygon(int id) const { return ConvexPolygon(cell(id).ring); }

const Line& TTessellation::line_of(ObjRef obj) const {
  return obj.is_segment() ? segments_[obj.id].line : boundary_[obj.id].line;
}

bool TTessellation::stopper_landing_ok(ObjRef obj, double t) const {
  const std::vector<Junction>* junctions = nullptr;
  double lo = 0.0, hi = 0.0;
  if (obj.is_segment()) {
    const SegmentRec& s = segments_[obj.id];
    junctions = &s.junctions;
    lo = s.end[0].t;
    hi = s.end[1].t;
  } else {
    const BoundarySide& s = boundary_[obj.id];
    junctions = &s.junctions;
    lo = s.t0;
    hi = s.t1;
  }
  if (t <= lo + eps_ || t >= hi - eps_) return false;
  for (const Junction& j : *junctions) {
    if (std::abs(j.t - t) <= eps_) return false;
  }
  return true;
}

std::pair<int, int> TTessellation::cell_on(ObjRef obj, double t_mid, int side) const {
  const Line& line = line_of(obj);
  const auto& cells =
      obj.is_segment() ? cells_on_segment_[obj.id] : cells_on_side_[obj.id];
  for (int cid : cells) {
    const CellRec& c = cells_[cid];
    const int n = static_cast<int>(c.ring.size());
    for (int k = 0; k < n; ++k) {
      if (!(c.support[k] == obj)) continue;
      const double ta = line.param(c.ring[k]);
      const double tb = line.param(c.ring[(k + 1) % n]);
      if (t_mid <= std::min(ta, tb) || t_mid >= std::max(ta, tb)) continue;
      const int cell_side = tb > ta ? -1 : +1;  // interior left of traversal
      if (cell_side == side) return {cid, k};
    }
  }
  return {-1, -1};
}

int TTessellation::make_cell(std::vector<Point> ring, std::vector<ObjRef> support) {
  int id;
  if (!free_cells_.empty()) {
    id = free_cells_.back();
    free_cells_.pop_back();
  } else {
    id = static_cast<int>(cells_.size());
    cells_.emplace_back();
    cell_pos_.push_back(-1);
  }
  CellRec& c = cells_[id];
  c.area = ring_area(ring);
  c.perimeter = ring_perimeter(ring);
  c.enclosing = smallest_enclosing_circle(ring);
  c.ring = std::move(ring);
  c.support = std::move(support);
  c.alive = true;
  cell_pos_[id] = static_cast<std::int32_t>(alive_cells_.size());
  alive_cells_.push_back(id);
  return id;
}

void TTessellation::drop_cell(int id) {
  CellRec& c = cells_[id];
  c.alive = false;
  c.ring.clear();
  c.support.clear();
  const std::int32_t at = cell_pos_[id];
  const int last = alive_cells_.back();
  alive_cells_[at] = last;
  cell_pos_[last] = at;
  alive_cells_.pop_back();
  cell_pos_[id] = -1;
  free_cells_.push_back(id);
}

void TTessellation::index_add(int cell) {
  for (const ObjRef& obj : cells_[cell].support) {
    auto& list = obj.is_segment() ? cells_on_segment_[obj.id] : cells_on_side_[obj.id];
    list.push_back(cell);
  }
}

void TTessellation::index_remove(int cell) {
  for (const ObjRef& obj : cells_[cell].support) {
    auto& list = obj.is_segment() ? cells_on_segment_[obj.id] : cells_on_side_[obj.id];
    auto it = std::find(list.begin(), list.end(), cell);
    assert(it != list.end());
    *it = list.back();
    list.pop_back();
  }
}

void TTessellation::set_kind(SegId id, bool was_blocking) {
  const bool blocking_now = segments_[id].blocking();
  if (was_blocking == blocking_now) return;
  if (blocking_now) {
    list_remove(nonblocking_, nb_pos_, id);
    list_add(blocking_, b_pos_, id);
  } else {
    list_remove(blocking_, b_pos_, id);
    list_add(nonblocking_, nb_pos_, id);
  }
}

void TTessellation::add_junction(ObjRef host, const Junction& j) {
  auto insert_sorted = [](std::vector<Junction>& js, const Junction& v) {
    auto it = std::lower_bound(js.begin(), js.end(), v,
                               [](const Junction& a, const Junction& b) { return a.t < b.t; });
    js.insert(it, v);
  };
  if (host.is_segment()) {
    SegmentRec& s = segments_[host.id];
    const bool was = s.blocking();
    insert_sorted(s.junctions, j);
    set_kind(host.id, was);
  } else {
    insert_sorted(boundary_[host.id].junctions, j);
  }
}

void TTessellation::remove_junction(ObjRef host, SegId seg, std::uint8_t seg_end) {
  auto erase_from = [&](std::vector<Junction>& js) {
    auto it = std::find_if(js.begin(), js.end(), [&](const Junction& j) {
      return j.seg == seg && j.seg_end == seg_end;
    });
    assert(it != js.end());
    js.erase(it);
  };
  if (host.is_segment()) {
    SegmentRec& s = segments_[host.id];
    const bool was = s.blocking();
    erase_from(s.junctions);
    set_kind(host.id, was);
  } else {
    erase_from(boundary_[host.id].junctions);
  }
}

void TTessellation::apply_delta(const StatDelta& d) {
  u_ += d.u;
  a2_ += d.a2;
  angle_sum_ += d.angle_sum;
}

// ---------------------------------------------------------------------------
// Split

std::optional<SplitEffect> TTessellation::split_effect(const Split& s) const {
  if (s.cell < 0 || s.cell >= static_cast<int>(cells_.size()) || !cells_[s.cell].alive) {
    return std::nullopt;
  }
  const CellRec& cell = cells_[s.cell];
  const Line& L = s.line;
  const int n = static_cast<int>(cell.ring.size());

  std::vector<double> off(n);
  for (int i = 0; i < n; ++i) {
    off[i] = L.offset(cell.ring[i]);
    // A chord through (or within eps of) an existing vertex would break the
    // T-structure; the split measure gives such lines probability zero.
    if (std::abs(off[i]) <= eps_) return std::nullopt;
  }
  int ea = -1, eb = -1;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    if (off[i] < 0.0 && off[j] > 0.0) ea = i;
    if (off[i] > 0.0 && off[j] < 0.0) eb = i;
  }
  if (ea < 0 || eb < 0) return std::nullopt;  // line misses the cell

  SplitEffect eff;
  eff.op = s;
  eff.edge_a = ea;
  eff.edge_b = eb;
  eff.stop_a = cell.support[ea];
  eff.stop_b = cell.support[eb];
  const auto pa = intersect(L, line_of(eff.stop_a));
  const auto pb = intersect(L, line_of(eff.stop_b));
  if (!pa || !pb) return std::nullopt;
  eff.a = *pa;
  eff.b = *pb;
  eff.t_a = line_of(eff.stop_a).param(eff.a);
  eff.t_b = line_of(eff.stop_b).param(eff.b);
  if (!stopper_landing_ok(eff.stop_a, eff.t_a)) return std::nullopt;
  if (!stopper_landing_ok(eff.stop_b, eff.t_b)) return std::nullopt;
  eff.chord_len = distance(eff.a, eff.b);
  if (eff.chord_len <= eps_) return std::nullopt;

  // Areas and perimeters of the two halves, walking the ring from a to b.
  double area1 = 0.0, perim1 = 0.0;
  {
    Point prev = eff.a;
    double acc = 0.0, per = 0.0;
    for (int i = 1;; ++i) {
      const int k = (ea + i) % n;
      acc += cross(prev, cell.ring[k]);
      per += distance(prev, cell.ring[k]);
      prev = cell.ring[k];
      if (k == eb) break;
    }
    acc += cross(prev, eff.b);
    per += distance(prev, eff.b);
    acc += cross(eff.b, eff.a);
    per += eff.chord_len;
    area1 = 0.5 * acc;
    perim1 = per;
  }
  eff.area1 = area1;
  eff.perim1 = perim1;
  eff.area2 = cell.area - area1;
  eff.perim2 = cell.perimeter - (perim1 - eff.chord_len) + eff.chord_len;
  if (eff.area1 <= 0.0 || eff.area2 <= 0.0) return std::nullopt;

  StatDelta& d = eff.delta;
  d.nseint = 1.0;
  d.nnbseint = 1.0;
  d.u = 2.0 * eff.chord_len;
  d.a2 = eff.area1 * eff.area1 + eff.area2 * eff.area2 - cell.area * cell.area;
  for (const ObjRef& stop : {eff.stop_a, eff.stop_b}) {
    if (!stop.is_segment()) continue;
    const SegmentRec& host = segments_[stop.id];
    if (!host.blocking()) {
      d.nnbseint -= 1.0;
      d.nbseint += 1.0;
    }
    d.angle_sum += kPi / 2.0 - acute_angle(L, host.line);
  }
  return eff;
}

SegId TTessellation::apply_split(const Split& s) {
  const auto eff = split_effect(s);
  if (!eff) throw GeometryError("split rejected: chord absent or degenerate");
  return apply_split(*eff);
}

SegId TTessellation::apply_split(const SplitEffect& eff) {
  const int cid = eff.op.cell;
  const CellRec cell = cells_[cid];  // copy: the slot may be reused below
  const Line& L = eff.op.line;
  const int n = static_cast<int>(cell.ring.size());

  const SegId id = static_cast<SegId>(segments_.size());
  SegmentRec rec;
  rec.line = L;
  rec.alive = true;
  const double ta = L.param(eff.a);
  const double tb = L.param(eff.b);
  const std::uint8_t end_a = ta < tb ? 0 : 1;
  rec.end[end_a] = SegmentEnd{eff.stop_a, ta};
  rec.end[1 - end_a] = SegmentEnd{eff.stop_b, tb};
  segments_.push_back(rec);
  int_pos_.push_back(-1);
  nb_pos_.push_back(-1);
  b_pos_.push_back(-1);
  cells_on_segment_.emplace_back();
  list_add(internal_, int_pos_, id);
  list_add(nonblocking_, nb_pos_, id);
  add_junction(eff.stop_a, Junction{eff.t_a, id, end_a});
  add_junction(eff.stop_b, Junction{eff.t_b, id, static_cast<std::uint8_t>(1 - end_a)});

  const ObjRef chord_ref{ObjRef::Kind::segment, id};
  std::vector<Point> ring1, ring2;
  std::vector<ObjRef> sup1, sup2;
  ring1.push_back(eff.a);
  sup1.push_back(cell.support[eff.edge_a]);
  for (int i = 1;; ++i) {
    const int k = (eff.edge_a + i) % n;
    ring1.push_back(cell.ring[k]);
    if (k == eff.edge_b) break;
    sup1.push_back(cell.support[k]);
  }
  ring1.push_back(eff.b);
  sup1.push_back(cell.support[eff.edge_b]);
  sup1.push_back(chord_ref);

  ring2.push_back(eff.b);
  sup2.push_back(cell.support[eff.edge_b]);
  for (int i = 1;; ++i) {
    const int k = (eff.edge_b + i) % n;
    ring2.push_back(cell.ring[k]);
    if (k == eff.edge_a) break;
    sup2.push_back(cell.support[k]);
  }
  ring2.push_back(eff.a);
  sup2.push_back(cell.support[eff.edge_a]);
  sup2.push_back(chord_ref);

  index_remove(cid);
  drop_cell(cid);
  const int c1 = make_cell(std::move(ring1), std::move(sup1));
  const int c2 = make_cell(std::move(ring2), std::move(sup2));
  index_add(c1);
  index_add(c2);
  apply_delta(eff.delta);
  return id;
}

// ---------------------------------------------------------------------------
// Merge

std::optional<MergeEffect> TTessellation::merge_effect(const Merge& m) const {
  if (m.seg < 0 || m.seg >= static_cast<SegId>(segments_.size()) || !segments_[m.seg].alive) {
    return std::nullopt;
  }
  const SegmentRec& s = segments_[m.seg];
  if (s.blocking()) return std::nullopt;
  const ObjRef self{ObjRef::Kind::segment, m.seg};
  const double t_mid = 0.5 * (s.end[0].t + s.end[1].t);
  const auto [c1, k1] = cell_on(self, t_mid, -1);
  const auto [c2, k2] = cell_on(self, t_mid, +1);
  if (c1 < 0 || c2 < 0) return std::nullopt;

  MergeEffect eff;
  eff.op = m;
  eff.cell1 = c1;
  eff.cell2 = c2;
  const CellRec& a = cells_[c1];
  const CellRec& b = cells_[c2];
  union_rings(a.ring, a.support, k1, b.ring, b.support, k2, eff.ring, eff.support);
  eff.area = a.area + b.area;
  eff.perimeter = a.perimeter + b.perimeter - 2.0 * s.length();

  StatDelta& d = eff.delta;
  d.nseint = -1.0;
  d.nnbseint = -1.0;
  d.u = -2.0 * s.length();
  d.a2 = eff.area * eff.area - a.area * a.area - b.area * b.area;
  for (int e = 0; e < 2; ++e) {
    const ObjRef stop = s.end[e].stopper;
    if (!stop.is_segment()) continue;
    const SegmentRec& host = segments_[stop.id];
    if (host.junctions.size() == 1) {  // only this segment blocked it
      d.nbseint -= 1.0;
      d.nnbseint += 1.0;
    }
    d.angle_sum -= kPi / 2.0 - acute_angle(s.line, host.line);
  }
  return eff;
}

Split TTessellation::apply_merge(const Merge& m) {
  const auto eff = merge_effect(m);
  if (!eff) throw ValidationError("merge rejected: segment is blocking, boundary or unknown");
  return apply_merge(*eff);
}

Split TTessellation::apply_merge(const MergeEffect& eff) {
  const SegId id = eff.op.seg;
  const Line line = segments_[id].line;
  for (int e = 0; e < 2; ++e) {
    remove_junction(segments_[id].end[e].stopper, id, static_cast<std::uint8_t>(e));
  }
  list_remove(nonblocking_, nb_pos_, id);
  list_remove(internal_, int_pos_, id);
  segments_[id].alive = false;
  segments_[id].junctions.clear();

  index_remove(eff.cell1);
  index_remove(eff.cell2);
  drop_cell(eff.cell1);
  drop_cell(eff.cell2);
  const int merged = make_cell(eff.ring, eff.support);
  index_add(merged);
  apply_delta(eff.delta);
  return Split{merged, line};
}

// ---------------------------------------------------------------------------
// Flip

std::optional<FlipEffect> TTessellation::flip_effect(const Flip& f) const {
  if (f.seg < 0 || f.seg >= static_cast<SegId>(segments_.size()) || !segments_[f.seg].alive) {
    return std::nullopt;
  }
  const SegmentRec& s = segments_[f.seg];
  if (!s.blocking()) return std::nullopt;
  const int e = f.end ? 1 : 0;
  const double t_end = s.end[e].t;
  const Junction j = (e == 0) ? s.junctions.front() : s.junctions.back();

  FlipEffect eff;
  eff.op = Flip{f.seg, static_cast<std::uint8_t>(e)};
  eff.tau = j.seg;
  eff.tau_end = j.seg_end;
  eff.x0 = s.line.at(t_end);
  eff.x1 = s.line.at(j.t);
  eff.omega = s.end[e].stopper;
  eff.len_removed = std::abs(j.t - t_end);

  const SegmentRec& tau = segments_[j.seg];
  const Point tau_far = tau.line.at(tau.end[1 - j.seg_end].t);
  const double far_off = s.line.offset(tau_far);
  if (std::abs(far_off) <= eps_) return std::nullopt;
  const int side_tau = far_off > 0.0 ? +1 : -1;

  const ObjRef self{ObjRef::Kind::segment, f.seg};
  const double t_mid = 0.5 * (t_end + j.t);
  const auto [f1, kf] = cell_on(self, t_mid, side_tau);
  const auto [f3, k3] = cell_on(self, t_mid, -side_tau);
  if (f1 < 0 || f3 < 0) return std::nullopt;
  eff.cell_grow = f1;
  eff.cell_shrink = f3;

  // Extend tau's line beyond the pivot until it exits the far cell.
  eff.t_x1_on_tau = tau.end[j.seg_end].t;
  const double ext_sign = (j.seg_end == 0) ? -1.0 : +1.0;
  const CellRec& c3 = cells_[f3];
  const int n3 = static_cast<int>(c3.ring.size());
  int ke = -1;
  double best_adv = std::numeric_limits<double>::infinity();
  Point y{};
  double t_y_obst = 0.0;
  for (int k = 0; k < n3; ++k) {
    if (c3.support[k] == self) continue;
    const Line& el = line_of(c3.support[k]);
    const auto hit = intersect(tau.line, el);
    if (!hit) continue;
    const double adv = (tau.line.param(*hit) - eff.t_x1_on_tau) * ext_sign;
    if (adv <= eps_ || adv >= best_adv) continue;
    const double ta = el.param(c3.ring[k]);
    const double tb = el.param(c3.ring[(k + 1) % n3]);
    const double tp = el.param(*hit);
    if (tp < std::min(ta, tb) - eps_ || tp > std::max(ta, tb) + eps_) continue;
    ke = k;
    best_adv = adv;
    y = *hit;
    t_y_obst = tp;
  }
  if (ke < 0) return std::nullopt;
  {
    const Line& el = line_of(c3.support[ke]);
    const double ta = el.param(c3.ring[ke]);
    const double tb = el.param(c3.ring[(ke + 1) % n3]);
    if (std::abs(t_y_obst - ta) <= eps_ || std::abs(t_y_obst - tb) <= eps_) return std::nullopt;
  }
  eff.obstacle = c3.support[ke];
  if (!stopper_landing_ok(eff.obstacle, t_y_obst)) return std::nullopt;
  eff.y = y;
  eff.t_y_on_obstacle = t_y_obst;
  eff.t_y_on_tau = tau.line.param(y);
  eff.len_added = std::abs(eff.t_y_on_tau - eff.t_x1_on_tau);

  // Split the far cell by the chord x1 -> y; x1 sits inside edge k3.
  const ObjRef tau_ref{ObjRef::Kind::segment, j.seg};
  std::vector<Point> r1{eff.x1};
  std::vector<ObjRef> s1{c3.support[k3]};
  for (int i = 1;; ++i) {
    const int k = (k3 + i) % n3;
    r1.push_back(c3.ring[k]);
    if (k == ke) break;
    s1.push_back(c3.support[k]);
  }
  r1.push_back(y);
  s1.push_back(c3.support[ke]);
  s1.push_back(tau_ref);

  std::vector<Point> r2{y};
  std::vector<ObjRef> s2{c3.support[ke]};
  for (int i = 1;; ++i) {
    const int k = (ke + i) % n3;
    r2.push_back(c3.ring[k]);
    if (k == k3) break;
    s2.push_back(c3.support[k]);
  }
  r2.push_back(eff.x1);
  s2.push_back(c3.support[k3]);
  s2.push_back(tau_ref);

  // The part whose boundary contains the freed edge [x0, x1] migrates to the
  // growing cell; it is the one whose piece of edge k3 covers x0.
  const bool tail_is_x0 = std::abs(s.line.param(c3.ring[k3]) - t_end) <= eps_;
  std::vector<Point>& pa_ring = tail_is_x0 ? r2 : r1;
  std::vector<ObjRef>& pa_sup = tail_is_x0 ? s2 : s1;
  std::vector<Point>& pb_ring = tail_is_x0 ? r1 : r2;
  std::vector<ObjRef>& pb_sup = tail_is_x0 ? s1 : s2;
  // Index of the freed edge inside the migrating part.
  const int pa_edge = tail_is_x0 ? static_cast<int>(pa_ring.size()) - 2 : 0;

  const CellRec& c1 = cells_[f1];
  int kf1 = kf;  // shared edge in the growing cell
  union_rings(c1.ring, c1.support, kf1, pa_ring, pa_sup, pa_edge, eff.ring_grow,
              eff.support_grow);
  eff.ring_shrink = pb_ring;
  eff.support_shrink = pb_sup;

  const double area_pa = ring_area(pa_ring);
  const double area_grow = c1.area + area_pa;
  const double area_shrink = c3.area - area_pa;
  if (area_shrink <= 0.0 || area_pa <= 0.0) return std::nullopt;

  StatDelta& d = eff.delta;
  d.u = 2.0 * (eff.len_added - eff.len_removed);
  d.a2 = area_grow * area_grow + area_shrink * area_shrink - c1.area * c1.area -
         c3.area * c3.area;
  // Junction-count transitions. sigma loses its first junction, tau gains the
  // pivot, omega loses sigma, the obstacle gains tau. omega and the obstacle
  // may coincide, in which case its count is unchanged.
  if (s.junctions.size() == 1) {
    d.nbseint -= 1.0;
    d.nnbseint += 1.0;
  }
  if (tau.junctions.empty()) {
    d.nbseint += 1.0;
    d.nnbseint -= 1.0;
  }
  if (!(eff.omega == eff.obstacle)) {
    if (eff.omega.is_segment()) {
      const SegmentRec& host = segments_[eff.omega.id];
      if (host.junctions.size() == 1) {
        d.nbseint -= 1.0;
        d.nnbseint += 1.0;
      }
    }
    if (eff.obstacle.is_segment()) {
      const SegmentRec& host = segments_[eff.obstacle.id];
      if (!host.blocking()) {
        d.nbseint += 1.0;
        d.nnbseint -= 1.0;
      }
    }
  }
  if (eff.omega.is_segment()) {
    d.angle_sum -= kPi / 2.0 - acute_angle(s.line, segments_[eff.omega.id].line);
  }
  if (eff.obstacle.is_segment()) {
    d.angle_sum += kPi / 2.0 - acute_angle(tau.line, segments_[eff.obstacle.id].line);
  }
  eff.inverse = Flip{j.seg, j.seg_end};
  return eff;
}

Flip TTessellation::apply_flip(const Flip& f) {
  const auto eff = flip_effect(f);
  if (!eff) throw ValidationError("flip rejected: invalid segment/end or degenerate extension");
  return apply_flip(*eff);
}

Flip TTessellation::apply_flip(const FlipEffect& eff) {
  SegmentRec& s = segments_[eff.op.seg];
  const int e = eff.op.end;
  const Junction j = (e == 0) ? s.junctions.front() : s.junctions.back();
  assert(j.seg == eff.tau);

  // sigma retreats to the pivot and now terminates on tau.
  remove_junction(ObjRef{ObjRef::Kind::segment, eff.op.seg}, eff.tau, eff.tau_end);
  remove_junction(eff.omega, eff.op.seg, static_cast<std::uint8_t>(e));
  s.end[e] = SegmentEnd{ObjRef{ObjRef::Kind::segment, eff.tau}, j.t};
  add_junction(ObjRef{ObjRef::Kind::segment, eff.tau},
               Junction{eff.t_x1_on_tau, eff.op.seg, static_cast<std::uint8_t>(e)});

  // tau extends to the obstacle.
  SegmentRec& tau = segments_[eff.tau];
  tau.end[eff.tau_end] = SegmentEnd{eff.obstacle, eff.t_y_on_tau};
  add_junction(eff.obstacle, Junction{eff.t_y_on_obstacle, eff.tau, eff.tau_end});

  index_remove(eff.cell_grow);
  index_remove(eff.cell_shrink);
  drop_cell(eff.cell_grow);
  drop_cell(eff.cell_shrink);
  const int grown = make_cell(eff.ring_grow, eff.support_grow);
  const int shrunk = make_cell(eff.ring_shrink, eff.support_shrink);
  index_add(grown);
  index_add(shrunk);
  apply_delta(eff.delta);
  return eff.inverse;
}

// ---------------------------------------------------------------------------
// Enumeration, sampling, statistics

std::vector<Merge> TTessellation::enumerate_merges() const {
  std::vector<Merge> out;
  out.reserve(nonblocking_.size());
  for (SegId id : nonblocking_) out.push_back(Merge{id});
  return out;
}

std::vector<Flip> TTessellation::enumerate_flips() const {
  std::vector<Flip> out;
  out.reserve(2 * blocking_.size());
  for (SegId id : blocking_) {
    out.push_back(Flip{id, 0});
    out.push_back(Flip{id, 1});
  }
  return out;
}

double TTessellation::split_total_mass() const { return u_ / kPi; }

SplitEffect TTessellation::sample_split_effect(Rng& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    // Cell picked proportionally to its perimeter; their sum is u(T).
    double x = unit(rng) * u_;
    int cid = alive_cells_.back();
    for (int id : alive_cells_) {
      x -= cells_[id].perimeter;
      if (x <= 0.0) {
        cid = id;
        break;
      }
    }
    const CellRec& c = cells_[cid];
    std::uniform_real_distribution<double> angle(0.0, kPi);
    std::uniform_real_distribution<double> span(-1.0, 1.0);
    const double alpha = angle(rng);
    const Point n{std::cos(alpha), std::sin(alpha)};
    const double p = dot(c.enclosing.center, n) + c.enclosing.radius * span(rng);
    const auto eff = split_effect(Split{cid, Line{alpha, p}});
    if (eff) return *eff;
  }
}

Split TTessellation::sample_split(Rng& rng) const { return sample_split_effect(rng).op; }

BasicStats TTessellation::statistics_basic() const {
  BasicStats st;
  st.nseint = static_cast<double>(internal_.size());
  for (SegId id : internal_) {
    const SegmentRec& s = segments_[id];
    if (s.blocking()) {
      st.nbseint += 1.0;
    } else {
      st.nnbseint += 1.0;
    }
    for (int e = 0; e < 2; ++e) {
      if (!s.end[e].stopper.is_segment()) continue;
      const SegmentRec& host = segments_[s.end[e].stopper.id];
      st.angle_sum += kPi / 2.0 - acute_angle(s.line, host.line);
    }
  }
  for (int id : alive_cells_) {
    const CellRec& c = cells_[id];
    const double area = ring_area(c.ring);
    st.u += ring_perimeter(c.ring);
    st.a2 += area * area;
  }
  return st;
}

BasicStats TTessellation::cached_stats() const {
  BasicStats st;
  st.nseint = static_cast<double>(internal_.size());
  st.nnbseint = static_cast<double>(nonblocking_.size());
  st.nbseint = static_cast<double>(blocking_.size());
  st.u = u_;
  st.a2 = a2_;
  st.angle_sum = angle_sum_;
  return st;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

std::string describe(ObjRef o) {
  std::ostringstream os;
  os << (o.is_segment() ? "segment " : "boundary side ") << o.id;
  return os.str();
}

}  // namespace

void TTessellation::validate(bool rebuild) const {
  auto fail = [](const std::string& msg) { throw ValidationError("tessellation invalid: " + msg); };

  // Segments: ends, junctions, classification.
  for (SegId id : internal_) {
    const SegmentRec& s = segments_[id];
    if (!s.alive) fail("dead segment in index");
    if (s.end[0].t >= s.end[1].t - eps_) fail("segment with empty extent");
    for (int e = 0; e < 2; ++e) {
      const Point q = s.line.at(s.end[e].t);
      const Line& host = line_of(s.end[e].stopper);
      if (std::abs(host.offset(q)) > 64.0 * eps_) {
        fail("endpoint of segment " + std::to_string(id) + " not on its stopper (" +
             describe(s.end[e].stopper) + ")");
      }
    }
    double prev = s.end[0].t;
    for (const Junction& j : s.junctions) {
      if (j.t <= s.end[0].t + eps_ || j.t >= s.end[1].t - eps_) fail("junction outside extent");
      if (j.t <= prev - eps_) fail("junctions unsorted");
      prev = j.t;
      const SegmentRec& o = segments_[j.seg];
      if (!o.alive) fail("junction references dead segment");
      if (!(o.end[j.seg_end].stopper == ObjRef{ObjRef::Kind::segment, id})) {
        fail("junction back-reference mismatch");
      }
      const Point q = o.line.at(o.end[j.seg_end].t);
      if (distance(q, s.line.at(j.t)) > 64.0 * eps_) fail("junction location mismatch");
    }
    const bool in_nb = nb_pos_[id] >= 0;
    const bool in_b = b_pos_[id] >= 0;
    if (s.blocking() ? (!in_b || in_nb) : (!in_nb || in_b)) {
      fail("segment kind index inconsistent for segment " + std::to_string(id));
    }
  }

  // Maximality: no two collinear touching segments.
  for (std::size_t i = 0; i < internal_.size(); ++i) {
    for (std::size_t k = i + 1; k < internal_.size(); ++k) {
      const SegmentRec& a = segments_[internal_[i]];
      const SegmentRec& b = segments_[internal_[k]];
      const Point b0 = b.line.at(b.end[0].t);
      const Point b1 = b.line.at(b.end[1].t);
      if (std::abs(a.line.offset(b0)) > eps_ || std::abs(a.line.offset(b1)) > eps_) continue;
      const double p0 = a.line.param(b0);
      const double p1 = a.line.param(b1);
      if (std::max(p0, p1) >= a.end[0].t - eps_ && std::min(p0, p1) <= a.end[1].t + eps_) {
        fail("two collinear segments touch (maximality violated)");
      }
    }
  }

  // Cells: convexity, supports, partition.
  if (static_cast<int>(alive_cells_.size()) != nseint() + 1) {
    fail("cell count differs from nseint + 1");
  }
  double total_area = 0.0;
  for (int id : alive_cells_) {
    const CellRec& c = cells_[id];
    const int n = static_cast<int>(c.ring.size());
    if (n < 3 || c.support.size() != c.ring.size()) fail("malformed cell ring");
    for (int i = 0; i < n; ++i) {
      const Point a = c.ring[i];
      const Point b = c.ring[(i + 1) % n];
      const Point d = c.ring[(i + 2) % n];
      if (cross(b - a, d - b) <= 0.0) fail("cell not strictly convex");
      const Line& host = line_of(c.support[i]);
      if (std::abs(host.offset(a)) > 64.0 * eps_ || std::abs(host.offset(b)) > 64.0 * eps_) {
        fail("cell edge not on its support (" + describe(c.support[i]) + ")");
      }
    }
    total_area += ring_area(c.ring);
  }
  const double dom_area = domain_.area();
  if (std::abs(total_area - dom_area) > 1e-6 * dom_area) {
    fail("cells do not partition the domain");
  }

  if (rebuild) {
    std::vector<std::pair<Line, std::pair<Point, Point>>> raw;
    raw.reserve(internal_.size());
    for (SegId id : internal_) {
      const SegmentRec& s = segments_[id];
      raw.push_back({s.line, {s.line.at(s.end[0].t), s.line.at(s.end[1].t)}});
    }
    const TTessellation fresh = rebuild_tessellation(domain_, raw);
    // Compare cell multisets through canonical signatures.
    auto signatures = [&](const TTessellation& t) {
      std::vector<std::pair<double, Point>> sig;
      for (int id : t.alive_cells_) {
        const CellRec& c = t.cells_[id];
        double cx = 0.0, cy = 0.0;
        for (const Point& q : c.ring) {
          cx += q.x;
          cy += q.y;
        }
        sig.push_back({ring_area(c.ring), Point{cx / c.ring.size(), cy / c.ring.size()}});
      }
      std::sort(sig.begin(), sig.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        if (a.second.x != b.second.x) return a.second.x < b.second.x;
        return a.second.y < b.second.y;
      });
      return sig;
    };
    const auto sa = signatures(*this);
    const auto sb = signatures(fresh);
    if (sa.size() != sb.size()) fail("rebuild produced a different number of cells");
    const double tol = 1e-6 * std::max(1.0, dom_area);
    for (std::size_t i = 0; i < sa.size(); ++i) {
      if (std::abs(sa[i].first - sb[i].first) > tol ||
          distance(sa[i].second, sb[i].second) > 1e4 * eps_) {
        fail("rebuild produced different cells");
      }
    }
  }
}

}  // namespace ttessel
