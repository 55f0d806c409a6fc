#ifndef TTESSEL_TESSELLATION_HPP
#define TTESSEL_TESSELLATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ttessel/geometry.hpp"

namespace ttessel {

using SegId = std::int32_t;

/// Supporting object of a tessellation edge: either a side of the domain
/// boundary or an internal segment.
struct ObjRef {
  enum class Kind : std::uint8_t { boundary, segment };
  Kind kind{Kind::boundary};
  std::int32_t id{-1};

  bool operator==(const ObjRef&) const = default;
  bool is_segment() const { return kind == Kind::segment; }
};

/// A segment terminating on the interior of a host object: `seg`'s end
/// `seg_end` rests at curvilinear parameter `t` of the host line.
struct Junction {
  double t{0.0};
  SegId seg{-1};
  std::uint8_t seg_end{0};
};

struct SegmentEnd {
  ObjRef stopper;
  double t{0.0};  // parameter on the owning segment's line
};

/// Internal segment: a maximal union of aligned connected edges, stored with
/// its exact supporting line. Junctions are the T-vertices in its interior
/// (other segments terminating on it), kept sorted by parameter. A segment is
/// non-blocking iff it carries no junction (single edge).
struct SegmentRec {
  Line line;
  SegmentEnd end[2];  // end[0].t < end[1].t
  std::vector<Junction> junctions;
  bool alive{false};

  bool blocking() const { return !junctions.empty(); }
  double length() const { return end[1].t - end[0].t; }
};

struct BoundarySide {
  Line line;
  double t0{0.0}, t1{0.0};  // parameters of the side's corners, t0 < t1
  std::vector<Junction> junctions;
};

/// Cell of the tessellation: strictly convex CCW ring plus, for every edge
/// ring[k] -> ring[k+1], the object supporting it. T-vertices interior to a
/// straight boundary run of the cell are not ring vertices.
struct CellRec {
  std::vector<Point> ring;
  std::vector<ObjRef> support;
  double area{0.0};
  double perimeter{0.0};
  Circle enclosing;
  bool alive{false};
};

// ---------------------------------------------------------------------------
// Local operators

struct Split {
  int cell{-1};
  Line line;
};

struct Merge {
  SegId seg{-1};
};

struct Flip {
  SegId seg{-1};
  std::uint8_t end{0};  // 0 = low-parameter extremity, 1 = high
};

using LocalOp = std::variant<Split, Merge, Flip>;

/// Change of the six basic summaries caused by one local operation.
struct StatDelta {
  double nseint{0.0};
  double nnbseint{0.0};
  double nbseint{0.0};
  double u{0.0};
  double a2{0.0};
  double angle_sum{0.0};
};

/// Fully resolved split: where the chord lands and what it does, computed
/// without mutating the tessellation.
struct SplitEffect {
  Split op;
  Point a, b;              // chord endpoints
  int edge_a{-1}, edge_b{-1};
  ObjRef stop_a, stop_b;
  double t_a{0.0}, t_b{0.0};  // landing parameters on the stopper lines
  double chord_len{0.0};
  double area1{0.0}, area2{0.0}, perim1{0.0}, perim2{0.0};
  StatDelta delta;
};

struct MergeEffect {
  Merge op;
  int cell1{-1}, cell2{-1};
  std::vector<Point> ring;  // fused cell
  std::vector<ObjRef> support;
  double area{0.0}, perimeter{0.0};
  StatDelta delta;
};

struct FlipEffect {
  Flip op;
  SegId tau{-1};
  std::uint8_t tau_end{0};
  Point x0, x1, y;          // freed extremity, pivot T-vertex, new extremity
  ObjRef omega;             // old stopper at x0
  ObjRef obstacle;          // what the extended segment hits at y
  double t_y_on_obstacle{0.0};
  double t_x1_on_tau{0.0}, t_y_on_tau{0.0};
  int cell_shrink{-1};      // cell losing the region swept by the pivot
  int cell_grow{-1};
  std::vector<Point> ring_grow, ring_shrink;
  std::vector<ObjRef> support_grow, support_shrink;
  double len_removed{0.0}, len_added{0.0};
  StatDelta delta;
  Flip inverse;
};

struct BasicStats {
  double nseint{0.0};
  double nnbseint{0.0};
  double nbseint{0.0};
  double u{0.0};
  double a2{0.0};
  double angle_sum{0.0};
};

/// Planar T-tessellation of a convex polygonal domain. Every internal vertex
/// has degree three with two collinear incident edges; cells are convex and
/// partition the domain. Mutations go through the three local operators.
///
/// All coordinates are derived from supporting-line intersections, so round
/// trips of inverse operations are drift-free.
class TTessellation {
 public:
  explicit TTessellation(ConvexPolygon domain);
  static TTessellation empty(ConvexPolygon domain) { return TTessellation(std::move(domain)); }

  const ConvexPolygon& domain() const { return domain_; }
  double eps() const { return eps_; }

  // --- segments ------------------------------------------------------------
  int nseint() const { return static_cast<int>(internal_.size()); }
  int nnbseint() const { return static_cast<int>(nonblocking_.size()); }
  int nbseint() const { return static_cast<int>(blocking_.size()); }
  const std::vector<SegId>& internal_segments() const { return internal_; }
  const std::vector<SegId>& nonblocking_segments() const { return nonblocking_; }
  const std::vector<SegId>& blocking_segments() const { return blocking_; }
  const SegmentRec& segment(SegId id) const;
  Point segment_endpoint(SegId id, int end) const;

  // --- cells ---------------------------------------------------------------
  int cell_count() const { return static_cast<int>(alive_cells_.size()); }
  const std::vector<int>& cell_ids() const { return alive_cells_; }
  const CellRec& cell(int id) const;
  ConvexPolygon cell_polygon(int id) const;

  // --- local operations ------------------------------------------------------
  std::optional<SplitEffect> split_effect(const Split& s) const;
  std::optional<MergeEffect> merge_effect(const Merge& m) const;
  std::optional<FlipEffect> flip_effect(const Flip& f) const;

  /// Applies a split; returns the id of the created segment. Throws
  /// GeometryError when the chord is absent or degenerate.
  SegId apply_split(const Split& s);
  SegId apply_split(const SplitEffect& eff);
  /// Applies a merge; returns the inverse split. Throws on blocking or
  /// boundary segments.
  Split apply_merge(const Merge& m);
  Split apply_merge(const MergeEffect& eff);
  /// Applies a flip; returns the inverse flip.
  Flip apply_flip(const Flip& f);
  Flip apply_flip(const FlipEffect& eff);

  std::vector<Merge> enumerate_merges() const;
  std::vector<Flip> enumerate_flips() const;

  /// Total mass u(T)/pi of the uniform split measure.
  double split_total_mass() const;

  /// Draws a split from the normalized split measure: cell picked
  /// proportionally to its perimeter, then a uniform isotropic hitting line.
  /// Degenerate chords are resampled.
  Split sample_split(Rng& rng) const;
  SplitEffect sample_split_effect(Rng& rng) const;

  /// The six scalar summaries recomputed from the structure.
  BasicStats statistics_basic() const;
  /// The same summaries as maintained incrementally along operations.
  BasicStats cached_stats() const;

  double u() const { return u_; }

  /// Checks every structural invariant; throws ValidationError with a
  /// diagnostic on the first violation. With `rebuild` set, additionally
  /// rebuilds the tessellation from its line pattern and compares cells.
  void validate(bool rebuild = false) const;

 private:
  friend TTessellation rebuild_tessellation(
      const ConvexPolygon& domain,
      const std::vector<std::pair<Line, std::pair<Point, Point>>>& segments);

  ConvexPolygon domain_;
  double eps_{0.0};
  std::vector<BoundarySide> boundary_;
  std::vector<SegmentRec> segments_;  // ids are indices, never reused
  std::vector<CellRec> cells_;
  std::vector<int> free_cells_;
  std::vector<int> alive_cells_;
  std::vector<std::int32_t> cell_pos_;  // cell id -> index in alive_cells_

  std::vector<SegId> internal_, nonblocking_, blocking_;
  std::vector<std::int32_t> int_pos_, nb_pos_, b_pos_;

  std::vector<std::vector<int>> cells_on_segment_;
  std::vector<std::vector<int>> cells_on_side_;

  double u_{0.0}, a2_{0.0}, angle_sum_{0.0};

  const Line& line_of(ObjRef obj) const;
  bool stopper_landing_ok(ObjRef obj, double t) const;
  std::pair<int, int> cell_on(ObjRef obj, double t_mid, int side) const;  // (cell, edge)
  int make_cell(std::vector<Point> ring, std::vector<ObjRef> support);
  void drop_cell(int id);
  void index_add(int cell);
  void index_remove(int cell);
  void set_kind(SegId id, bool was_blocking);
  void add_junction(ObjRef host, const Junction& j);
  void remove_junction(ObjRef host, SegId seg, std::uint8_t seg_end);
  void apply_delta(const StatDelta& d);
  StatDelta merge_delta_core(const SegmentRec& seg, double area1, double area2) const;
};

/// Builds a tessellation from its raw line pattern: segment records carrying
/// line, extent and stoppers but no junctions, cells or classification.
/// Validates the full T-structure and throws ValidationError with a
/// diagnostic when the input is not a T-tessellation. This is the route used
/// by the JSON loader and serves as the from-scratch oracle for the
/// incremental operators.
TTessellation rebuild_tessellation(const ConvexPolygon& domain,
                                   const std::vector<std::pair<Line, std::pair<Point, Point>>>& segments);

}  // namespace ttessel

#endif
