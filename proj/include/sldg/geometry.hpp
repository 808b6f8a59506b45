#pragma once

// Predicates and constructions on quadratic parametric arcs and segments:
// intersections, inclusion tests, the signed convex partition of a
// six-node curved triangle, and clipping between convex curved regions.
//
// Every curve is parameterized over [0, 1].

#include <array>
#include <optional>
#include <utility>
#include <span>
#include <vector>

#include "sldg/point.hpp"

namespace sldg {

/// Relative tolerance below which an arc is considered straight.
inline constexpr double kStraightTol = 1e-10;
/// Relative snap distance (times the local diameter) for merging vertices.
inline constexpr double kSnapTol = 1e-12;
/// Padding applied to parameter ranges when accepting intersections.
inline constexpr double kParamTol = 1e-12;

/// x(t) = a t^2 + b t + c, t in [0, 1].
struct ParametricArc {
  Vec2 a;
  Vec2 b;
  Vec2 c;

  Vec2 eval(double t) const { return (a * t + b) * t + c; }
  Vec2 deriv(double t) const { return 2.0 * t * a + b; }
  Vec2 start() const { return c; }
  Vec2 end() const { return a + b + c; }
  Vec2 mid() const { return eval(0.5); }

  /// True when the curve deviates from its chord line by at most
  /// rel_tol * chord length (the quadratic term is collinear with the chord).
  bool is_straight(double rel_tol = kStraightTol) const;
  /// Restriction to [t0, t1] re-parameterized over [0, 1]; t1 < t0 reverses.
  ParametricArc sub(double t0, double t1) const;
  ParametricArc reversed() const { return sub(1.0, 0.0); }
  BBox bbox() const;
  /// Parameter of the point of the arc closest to p.
  double closest_param(Vec2 p) const;
};

/// The quadratic with x(0)=p_start, x(1/2)=p_mid, x(1)=p_end.
/// Throws DegenerateError when two of the points coincide.
ParametricArc arc_through_3_points(Vec2 p_start, Vec2 p_mid, Vec2 p_end);

struct Segment {
  Vec2 p0;
  Vec2 p1;
  Vec2 eval(double t) const { return p0 + t * (p1 - p0); }
  double length() const { return distance(p0, p1); }
};

enum class EdgeKind { Line, Arc };

/// One boundary piece: a straight segment or a quadratic arc, oriented
/// along increasing parameter.
class Edge {
 public:
  static Edge line(Vec2 p0, Vec2 p1);
  /// Straight-flagged arcs become lines between their endpoints.
  static Edge arc(const ParametricArc& arc);

  EdgeKind kind() const { return kind_; }
  bool is_line() const { return kind_ == EdgeKind::Line; }
  const ParametricArc& curve() const { return curve_; }
  Segment segment() const { return {p0_, p1_}; }
  /// Endpoints are stored exactly (the polynomial's a+b+c can be off by round-off).
  Vec2 start() const { return p0_; }
  Vec2 end() const { return p1_; }
  Vec2 eval(double t) const { return curve_.eval(t); }
  Vec2 deriv(double t) const { return curve_.deriv(t); }
  BBox bbox() const { return curve_.bbox(); }
  /// Piece between parameters t0 and t1 with endpoints pinned to the given points.
  Edge sub(double t0, double t1, Vec2 from, Vec2 to) const;
  Edge reversed() const;
  /// Closest parameter and distance from p.
  std::pair<double, double> project(Vec2 p) const;

 private:
  Edge(EdgeKind k, const ParametricArc& c) : kind_(k), curve_(c) {}
  EdgeKind kind_;
  ParametricArc curve_;
  Vec2 p0_;
  Vec2 p1_;
};

/// A crossing between two curves: the point and the parameter on each.
struct Intersection {
  Vec2 point;
  double s = 0.0;  // parameter on the first curve
  double t = 0.0;  // parameter on the second curve
};

std::optional<Intersection> intersect_line_line(const Segment& l1, const Segment& l2);
/// Up to two points; eliminates the line parameter to a quadratic in the arc parameter.
std::vector<Intersection> intersect_arc_line(const ParametricArc& arc, const Segment& line);
/// Up to four points from the quartic in the second arc's parameter.
/// Throws OverlapError when the arcs coincide over a stretch.
std::vector<Intersection> intersect_arc_arc(const ParametricArc& arc1, const ParametricArc& arc2);
std::vector<Intersection> intersect_edges(const Edge& e1, const Edge& e2);

/// Closed inclusion in a CCW triangle: every edge cross product >= -tol * edge length.
bool point_in_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c, double tol = 0.0);

/// Region between a quadratic arc and the chord joining its endpoints.
struct ParabolicSegment {
  ParametricArc arc;
  Segment chord;
  Vec2 apex;  // arc point at t = 1/2; fixes the bulge side

  explicit ParabolicSegment(const ParametricArc& a)
      : arc(a), chord{a.start(), a.end()}, apex(a.mid()) {}
};

/// Half-plane test against the chord, then the perpendicular through p is
/// intersected with the arc. With two crossings on the arc (projection
/// beyond the chord) p is inside iff the crossings straddle p; with one
/// crossing p is inside iff that crossing lies on the far side of p from
/// the chord. Straight arcs enclose nothing.
bool point_in_parabolic_segment(Vec2 p, const ParabolicSegment& seg, double tol = 0.0);

/// Convex region bounded by a closed CCW loop of line and arc edges.
class ConvexRegion {
 public:
  ConvexRegion() = default;
  explicit ConvexRegion(std::vector<Edge> edges);

  static ConvexRegion triangle(Vec2 a, Vec2 b, Vec2 c);
  /// Oriented CCW regardless of the arc's bulge side.
  static ConvexRegion parabolic_segment(const ParametricArc& arc);

  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<Vec2> vertices() const;
  const BBox& bbox() const { return bbox_; }
  double diameter() const { return bbox_.diagonal(); }
  /// Exact signed area of the loop (Green's theorem, 2-point Gauss per edge).
  double signed_area() const;
  /// Closed inclusion with absolute tolerance tol.
  bool contains(Vec2 p, double tol = 0.0) const;
  bool empty() const { return edges_.empty(); }

 private:
  std::vector<Edge> edges_;
  BBox bbox_;
};

struct SignedPiece {
  ConvexRegion region;
  int sign = +1;
};

/// Signed convex partition of the curved triangle with corners nodes[0..2]
/// (CCW) and midside nodes nodes[3] (0-1), nodes[4] (1-2), nodes[5] (2-0).
/// The corner triangle is "+"; each curved edge adds a "+" segment when it
/// bulges outward and a "-" segment when it bulges inward.
/// Throws GeometryError for a self-intersecting or inverted boundary.
std::vector<SignedPiece> convex_partition_tria6(std::span<const Vec2, 6> nodes);

/// Intersection of two convex regions. Vertices are the boundary crossings
/// plus the vertices of each region inside the other, ordered CCW by polar
/// angle about their centroid; consecutive vertices are joined by pieces of
/// the original edges. Returns nullopt for empty or measure-zero overlap.
std::optional<ConvexRegion> clip_convex(const ConvexRegion& p, const ConvexRegion& q);

/// Permutation sorting vertices by polar angle about the centroid (or the
/// hint), ties broken by radius then input index.
/// Throws DegenerateError when all points are collinear and no hint is given.
std::vector<std::size_t> order_ccw_indices(std::span<const Vec2> vertices,
                                           std::optional<Vec2> center_hint = std::nullopt);
std::vector<Vec2> order_ccw(std::span<const Vec2> vertices,
                            std::optional<Vec2> center_hint = std::nullopt);

/// x(t) = a t^3 + b t^2 + c t + d.
struct CubicArc {
  Vec2 a;
  Vec2 b;
  Vec2 c;
  Vec2 d;
  Vec2 eval(double t) const { return ((a * t + b) * t + c) * t + d; }
};

/// Parameters in [0, 1] where the curvature numerator
/// 6(ay bx - ax by) t^2 + 6(ay cx - ax cy) t + 2(by cx - bx cy) changes sign.
std::vector<double> inflection_params_cubic(const CubicArc& cubic);

/// Polyline samples of every edge (for debug dumps).
std::vector<Vec2> sample_boundary(const ConvexRegion& region, int samples_per_edge = 32);

}  // namespace sldg
