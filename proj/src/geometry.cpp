#include "sldg/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "sldg/errors.hpp"
#include "sldg/roots.hpp"

namespace sldg {

namespace {

bool in_unit_range(double t) { return t >= -kParamTol && t <= 1.0 + kParamTol; }
double clamp01(double t) { return std::clamp(t, 0.0, 1.0); }

// Drops points closer than tol to an earlier one.
void dedupe(std::vector<Intersection>& xs, double tol) {
  std::vector<Intersection> out;
  for (const auto& x : xs) {
    bool dup = false;
    for (const auto& o : out) {
      if (distance(o.point, x.point) <= tol) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(x);
  }
  xs = std::move(out);
}

double arc_scale(const ParametricArc& arc) { return norm(arc.a) + norm(arc.b) + norm(arc.c); }

Intersection swapped(Intersection x) {
  std::swap(x.s, x.t);
  return x;
}

// Polynomial helpers on coefficient arrays (index = power).
using Poly3 = std::array<double, 3>;
std::array<double, 5> poly_mul(const Poly3& p, const Poly3& q) {
  std::array<double, 5> r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i + j] += p[i] * q[j];
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// ParametricArc

bool ParametricArc::is_straight(double rel_tol) const {
  const Vec2 d = end() - start();
  const double len2 = dot(d, d);
  if (len2 == 0.0) return false;
  return std::abs(cross(a, d)) <= 4.0 * rel_tol * len2;
}

ParametricArc ParametricArc::sub(double t0, double t1) const {
  const double dt = t1 - t0;
  return {a * (dt * dt), (2.0 * t0 * a + b) * dt, eval(t0)};
}

BBox ParametricArc::bbox() const {
  BBox box;
  box.expand(start());
  box.expand(end());
  if (a.x != 0.0) {
    const double t = -b.x / (2.0 * a.x);
    if (t > 0.0 && t < 1.0) box.expand(eval(t));
  }
  if (a.y != 0.0) {
    const double t = -b.y / (2.0 * a.y);
    if (t > 0.0 && t < 1.0) box.expand(eval(t));
  }
  return box;
}

double ParametricArc::closest_param(Vec2 p) const {
  const Vec2 w = c - p;
  const std::array<double, 4> coeffs{dot(b, w), dot(b, b) + 2.0 * dot(a, w), 3.0 * dot(a, b),
                                     2.0 * dot(a, a)};
  double best_t = 0.0;
  double best_d = distance(start(), p);
  const double d1 = distance(end(), p);
  if (d1 < best_d) {
    best_d = d1;
    best_t = 1.0;
  }
  for (double t : polynomial_real_roots(coeffs)) {
    if (t <= 0.0 || t >= 1.0) continue;
    const double d = distance(eval(t), p);
    if (d < best_d) {
      best_d = d;
      best_t = t;
    }
  }
  return best_t;
}

ParametricArc arc_through_3_points(Vec2 p_start, Vec2 p_mid, Vec2 p_end) {
  const double scale =
      std::max({norm(p_start), norm(p_mid), norm(p_end), distance(p_start, p_end)});
  const double tiny = 1e-14 * scale;
  if (distance(p_start, p_end) <= tiny || distance(p_start, p_mid) <= tiny ||
      distance(p_mid, p_end) <= tiny) {
    throw DegenerateError("arc_through_3_points: coincident points");
  }
  // Lagrange interpolation at t = 0, 1/2, 1; (p_start + p_end) keeps the
  // quadratic term identical for the reversed traversal.
  const Vec2 a = 2.0 * ((p_start + p_end) - 2.0 * p_mid);
  const Vec2 b = 4.0 * p_mid - 3.0 * p_start - p_end;
  return {a, b, p_start};
}

// ---------------------------------------------------------------------------
// Edge

Edge Edge::line(Vec2 p0, Vec2 p1) {
  Edge e(EdgeKind::Line, ParametricArc{{0.0, 0.0}, p1 - p0, p0});
  e.p0_ = p0;
  e.p1_ = p1;
  return e;
}

Edge Edge::arc(const ParametricArc& arc) {
  if (arc.is_straight()) return line(arc.start(), arc.end());
  Edge e(EdgeKind::Arc, arc);
  e.p0_ = arc.start();
  e.p1_ = arc.end();
  return e;
}

Edge Edge::sub(double t0, double t1, Vec2 from, Vec2 to) const {
  if (is_line()) return line(from, to);
  // A sliver of an arc bounds no measurable area against its chord.
  const double scale = std::max({norm(from), norm(to), distance(p0_, p1_)});
  if (distance(from, to) <= kSnapTol * scale) return line(from, to);
  const Vec2 mid = curve_.eval(0.5 * (t0 + t1));
  Edge e(EdgeKind::Arc, arc_through_3_points(from, mid, to));
  e.p0_ = from;
  e.p1_ = to;
  return e;
}

Edge Edge::reversed() const {
  if (is_line()) return line(p1_, p0_);
  Edge e(EdgeKind::Arc, curve_.reversed());
  e.p0_ = p1_;
  e.p1_ = p0_;
  return e;
}

std::pair<double, double> Edge::project(Vec2 p) const {
  if (is_line()) {
    const Vec2 d = p1_ - p0_;
    const double len2 = dot(d, d);
    const double t = len2 > 0.0 ? clamp01(dot(p - p0_, d) / len2) : 0.0;
    return {t, distance(p0_ + t * d, p)};
  }
  const double t = curve_.closest_param(p);
  return {t, distance(curve_.eval(t), p)};
}

// ---------------------------------------------------------------------------
// Intersections

std::optional<Intersection> intersect_line_line(const Segment& l1, const Segment& l2) {
  const Vec2 d1 = l1.p1 - l1.p0;
  const Vec2 d2 = l2.p1 - l2.p0;
  const double den = cross(d1, d2);
  if (std::abs(den) <= 1e-14 * norm(d1) * norm(d2)) return std::nullopt;
  const Vec2 w = l2.p0 - l1.p0;
  const double s = cross(w, d2) / den;
  const double t = cross(w, d1) / den;
  if (!in_unit_range(s) || !in_unit_range(t)) return std::nullopt;
  const double sc = clamp01(s);
  const double tc = clamp01(t);
  Vec2 point = l1.eval(sc);
  if (sc == 0.0 || sc == 1.0) point = sc == 0.0 ? l1.p0 : l1.p1;
  else if (tc == 0.0 || tc == 1.0) point = tc == 0.0 ? l2.p0 : l2.p1;
  return Intersection{point, sc, tc};
}

std::vector<Intersection> intersect_arc_line(const ParametricArc& arc, const Segment& line) {
  if (arc.is_straight()) {
    auto x = intersect_line_line({arc.start(), arc.end()}, line);
    if (!x) return {};
    return {*x};
  }
  const Vec2 d = line.p1 - line.p0;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return {};
  const Vec2 w = arc.c - line.p0;
  const double c2 = cross(d, arc.a);
  const double c1 = cross(d, arc.b);
  const double c0 = cross(d, w);
  std::vector<Intersection> out;
  for (double xi : quadratic_roots(c2, c1, c0)) {
    if (!in_unit_range(xi)) continue;
    // One Newton step on cross(d, x(xi) - q0) = 0.
    const double f = cross(d, arc.eval(xi) - line.p0);
    const double df = cross(d, arc.deriv(xi));
    if (df != 0.0) {
      const double next = xi - f / df;
      if (std::abs(next - xi) < 1e-6) xi = next;
    }
    if (!in_unit_range(xi)) continue;
    xi = clamp01(xi);
    const Vec2 p = arc.eval(xi);
    const double eta = dot(p - line.p0, d) / len2;
    if (!in_unit_range(eta)) continue;
    out.push_back({p, xi, clamp01(eta)});
  }
  dedupe(out, 1e-12 * (arc_scale(arc) + std::sqrt(len2)));
  return out;
}

std::vector<Intersection> intersect_arc_arc(const ParametricArc& arc1, const ParametricArc& arc2) {
  const bool s1 = arc1.is_straight();
  const bool s2 = arc2.is_straight();
  if (s1 && s2) {
    auto x = intersect_line_line({arc1.start(), arc1.end()}, {arc2.start(), arc2.end()});
    if (!x) return {};
    return {*x};
  }
  if (s1) {
    auto xs = intersect_arc_line(arc2, {arc1.start(), arc1.end()});
    for (auto& x : xs) x = swapped(x);
    return xs;
  }
  if (s2) return intersect_arc_line(arc1, {arc2.start(), arc2.end()});

  // x1(xi) = x2(eta):  a1 xi^2 + b1 xi = alpha(eta), beta(eta).
  const Poly3 alpha{arc2.c.x - arc1.c.x, arc2.b.x, arc2.a.x};
  const Poly3 beta{arc2.c.y - arc1.c.y, arc2.b.y, arc2.a.y};
  const double det = cross(arc1.a, arc1.b);
  const double det_scale = norm(arc1.a) * norm(arc1.b);

  std::vector<std::pair<double, double>> params;  // (xi, eta)
  auto check_overlap = [](std::span<const double> quartic, double ref) {
    double m = 0.0;
    for (double v : quartic) m = std::max(m, std::abs(v));
    if (m <= 1e-12 * ref) throw OverlapError("intersect_arc_arc: arcs overlap");
  };

  if (std::abs(det) > 1e-8 * det_scale) {
    // [xi^2; xi] = [[a1x, b1x]; [a1y, b1y]]^{-1} [alpha; beta]
    Poly3 sq{}, lin{};
    for (int i = 0; i < 3; ++i) {
      sq[i] = (arc1.b.y * alpha[i] - arc1.b.x * beta[i]) / det;
      lin[i] = (arc1.a.x * beta[i] - arc1.a.y * alpha[i]) / det;
    }
    auto quartic = poly_mul(lin, lin);
    for (int i = 0; i < 3; ++i) quartic[i] -= sq[i];
    double ref = 0.0;
    for (int i = 0; i < 3; ++i) ref = std::max({ref, lin[i] * lin[i], std::abs(sq[i])});
    check_overlap(quartic, ref);
    for (double eta : polynomial_real_roots(quartic)) {
      if (!in_unit_range(eta)) continue;
      params.emplace_back(polyval(lin, eta), eta);
    }
  } else {
    // Singular 2x2 system: eliminate xi with the Sylvester resultant of
    // p(xi) = a1x xi^2 + b1x xi - alpha(eta) and q(xi) = a1y xi^2 + b1y xi - beta(eta).
    const double p2 = arc1.a.x, p1 = arc1.b.x, q2 = arc1.a.y, q1 = arc1.b.y;
    Poly3 p0{}, q0{};
    for (int i = 0; i < 3; ++i) {
      p0[i] = -alpha[i];
      q0[i] = -beta[i];
    }
    Poly3 u{}, v{};  // u = p2 q0 - p0 q2, v = p1 q0 - p0 q1
    for (int i = 0; i < 3; ++i) {
      u[i] = p2 * q0[i] - p0[i] * q2;
      v[i] = p1 * q0[i] - p0[i] * q1;
    }
    const double w = p2 * q1 - p1 * q2;
    auto res = poly_mul(u, u);
    for (int i = 0; i < 3; ++i) res[i] -= w * v[i];
    double ref = 0.0;
    for (int i = 0; i < 3; ++i) ref = std::max({ref, u[i] * u[i], std::abs(w * v[i])});
    check_overlap(res, ref);
    for (double eta : polynomial_real_roots(res)) {
      if (!in_unit_range(eta)) continue;
      const double pe = polyval(p0, eta);
      const double qe = polyval(q0, eta);
      const bool use_p = std::abs(p2) + std::abs(p1) >= std::abs(q2) + std::abs(q1);
      const auto cand = use_p ? quadratic_roots(p2, p1, pe) : quadratic_roots(q2, q1, qe);
      for (double xi : cand) {
        const double other = use_p ? (q2 * xi + q1) * xi + qe : (p2 * xi + p1) * xi + pe;
        const double scale = std::abs(use_p ? qe : pe) + std::abs(q2) + std::abs(q1) +
                             std::abs(p2) + std::abs(p1);
        if (std::abs(other) <= 1e-8 * scale) params.emplace_back(xi, eta);
      }
    }
  }

  const double scale = arc_scale(arc1) + arc_scale(arc2);
  std::vector<Intersection> out;
  for (auto [xi, eta] : params) {
    // Newton polish on the bivariate system x1(xi) - x2(eta) = 0.
    for (int iter = 0; iter < 3; ++iter) {
      const Vec2 r = arc1.eval(xi) - arc2.eval(eta);
      const Vec2 j1 = arc1.deriv(xi);
      const Vec2 j2 = -arc2.deriv(eta);
      const double dj = cross(j1, j2);
      if (dj == 0.0) break;
      const double dxi = cross(r, j2) / dj;
      const double deta = cross(j1, r) / dj;
      const double nxi = xi - dxi, neta = eta - deta;
      if (norm(arc1.eval(nxi) - arc2.eval(neta)) >= norm(r)) break;
      xi = nxi;
      eta = neta;
    }
    if (!in_unit_range(xi) || !in_unit_range(eta)) continue;
    xi = clamp01(xi);
    eta = clamp01(eta);
    const Vec2 p1 = arc1.eval(xi), p2 = arc2.eval(eta);
    if (distance(p1, p2) > 1e-9 * scale) continue;
    out.push_back({0.5 * (p1 + p2), xi, eta});
  }
  dedupe(out, 1e-12 * scale);
  return out;
}

std::vector<Intersection> intersect_edges(const Edge& e1, const Edge& e2) {
  if (e1.is_line() && e2.is_line()) {
    auto x = intersect_line_line(e1.segment(), e2.segment());
    if (!x) return {};
    return {*x};
  }
  if (e2.is_line()) return intersect_arc_line(e1.curve(), e2.segment());
  if (e1.is_line()) {
    auto xs = intersect_arc_line(e2.curve(), e1.segment());
    for (auto& x : xs) x = swapped(x);
    return xs;
  }
  return intersect_arc_arc(e1.curve(), e2.curve());
}

// ---------------------------------------------------------------------------
// Inclusion

bool point_in_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c, double tol) {
  const std::array<Vec2, 3> v{a, b, c};
  for (int i = 0; i < 3; ++i) {
    const Vec2 e = v[(i + 1) % 3] - v[i];
    if (cross(e, p - v[i]) < -tol * norm(e)) return false;
  }
  return true;
}

bool point_in_parabolic_segment(Vec2 p, const ParabolicSegment& seg, double tol) {
  const ParametricArc& arc = seg.arc;
  if (arc.is_straight()) return false;
  const Vec2 d = seg.chord.p1 - seg.chord.p0;
  const double len = norm(d);
  if (len == 0.0) return false;
  const Vec2 dhat = d / len;
  Vec2 n = perp(dhat);
  if (dot(n, seg.apex - seg.chord.p0) < 0.0) n = -n;

  // Same half-plane as the apex.
  const double h = dot(n, p - seg.chord.p0);
  if (h < -tol) return false;

  // Perpendicular through p: parameter 0 at p, positive toward the chord.
  // Crossings with the arc solve dhat . (x(t) - p) = 0.
  std::vector<double> taus;
  for (double t : quadratic_roots(dot(dhat, arc.a), dot(dhat, arc.b), dot(dhat, arc.c - p))) {
    if (!in_unit_range(t)) continue;
    taus.push_back(dot(n, p - arc.eval(clamp01(t))));
  }
  const double foot = dot(dhat, p - seg.chord.p0) / len;
  if (taus.size() >= 2) {
    // Projection beyond the chord: crossings must straddle p.
    return taus[0] * taus[1] <= 0.0 || std::min(std::abs(taus[0]), std::abs(taus[1])) <= tol;
  }
  if (taus.size() == 1) {
    // Projection on the chord: the arc crossing lies on the far side of p.
    if (foot < -kParamTol || foot > 1.0 + kParamTol) return std::abs(taus[0]) <= tol;
    return taus[0] <= tol;
  }
  return false;
}

// ---------------------------------------------------------------------------
// ConvexRegion

ConvexRegion::ConvexRegion(std::vector<Edge> edges) : edges_(std::move(edges)) {
  for (const auto& e : edges_) bbox_.expand(e.bbox());
}

ConvexRegion ConvexRegion::triangle(Vec2 a, Vec2 b, Vec2 c) {
  return ConvexRegion({Edge::line(a, b), Edge::line(b, c), Edge::line(c, a)});
}

ConvexRegion ConvexRegion::parabolic_segment(const ParametricArc& arc) {
  const Vec2 p0 = arc.start(), p1 = arc.end();
  if (orient2d(p0, p1, arc.mid()) < 0.0) return ConvexRegion({Edge::arc(arc), Edge::line(p1, p0)});
  return ConvexRegion({Edge::line(p0, p1), Edge::arc(arc.reversed())});
}

std::vector<Vec2> ConvexRegion::vertices() const {
  std::vector<Vec2> v;
  v.reserve(edges_.size());
  for (const auto& e : edges_) v.push_back(e.start());
  return v;
}

double ConvexRegion::signed_area() const {
  if (edges_.empty()) return 0.0;
  // 1/2 * loop integral of (x dy - y dx) about the first vertex; the
  // integrand is cubic in t so 2-point Gauss is exact.
  const Vec2 o = edges_.front().start();
  constexpr double g = 0.21132486540518711775;  // (1 - 1/sqrt(3)) / 2
  double acc = 0.0;
  for (const auto& e : edges_) {
    for (double t : {g, 1.0 - g}) {
      const Vec2 r = e.eval(t) - o;
      acc += 0.5 * cross(r, e.deriv(t));
    }
  }
  return 0.5 * acc;
}

bool ConvexRegion::contains(Vec2 p, double tol) const {
  if (edges_.empty() || !bbox_.inflated(tol).contains(p)) return false;
  const auto verts = vertices();
  if (verts.size() >= 3) {
    bool inside = true;
    for (std::size_t i = 0; i < verts.size() && inside; ++i) {
      const Vec2 a = verts[i], b = verts[(i + 1) % verts.size()];
      if (cross(b - a, p - a) < -tol * distance(a, b)) inside = false;
    }
    if (inside) return true;
  }
  for (const auto& e : edges_) {
    if (e.is_line()) continue;
    if (point_in_parabolic_segment(p, ParabolicSegment(e.curve()), tol)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Partition

std::vector<SignedPiece> convex_partition_tria6(std::span<const Vec2, 6> nodes) {
  const std::array<Vec2, 3> corner{nodes[0], nodes[1], nodes[2]};
  const std::array<Vec2, 3> mid{nodes[3], nodes[4], nodes[5]};
  if (orient2d(corner[0], corner[1], corner[2]) <= 0.0) {
    throw GeometryError("convex_partition_tria6: inverted corner triangle");
  }
  BBox box;
  for (Vec2 p : nodes) box.expand(p);
  const double diam = box.diagonal();

  std::vector<SignedPiece> pieces;
  pieces.push_back({ConvexRegion::triangle(corner[0], corner[1], corner[2]), +1});

  std::array<Edge, 3> edges{Edge::line(corner[0], corner[1]), Edge::line(corner[1], corner[2]),
                            Edge::line(corner[2], corner[0])};
  for (int i = 0; i < 3; ++i) {
    const Vec2 p0 = corner[i], p1 = corner[(i + 1) % 3];
    ParametricArc arc;
    try {
      arc = arc_through_3_points(p0, mid[i], p1);
    } catch (const DegenerateError&) {
      throw GeometryError("convex_partition_tria6: collapsed edge");
    }
    if (arc.is_straight()) {
      const Vec2 d = p1 - p0;
      const double t = dot(mid[i] - p0, d) / dot(d, d);
      if (t <= 0.0 || t >= 1.0) throw GeometryError("convex_partition_tria6: folded edge");
      continue;
    }
    edges[i] = Edge::arc(arc);
    const int sign = orient2d(p0, p1, mid[i]) < 0.0 ? +1 : -1;
    pieces.push_back({ConvexRegion::parabolic_segment(arc), sign});
  }

  // The curved boundary may only meet itself at shared corners.
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const Vec2 shared = (j == i + 1) ? corner[j] : corner[0];
      std::vector<Intersection> xs;
      try {
        xs = intersect_edges(edges[i], edges[j]);
      } catch (const OverlapError&) {
        throw GeometryError("convex_partition_tria6: overlapping edges");
      }
      for (const auto& x : xs) {
        if (distance(x.point, shared) > 1e-8 * diam) {
          throw GeometryError("convex_partition_tria6: self-intersecting boundary");
        }
      }
    }
  }

  double total = 0.0;
  for (const auto& pc : pieces) total += pc.sign * pc.region.signed_area();
  if (total <= 0.0) throw GeometryError("convex_partition_tria6: non-positive area");
  return pieces;
}

// ---------------------------------------------------------------------------
// Ordering

namespace {

// Largest distance of any point from the line through the farthest pair,
// and that pair's length.
std::pair<double, double> collinearity(std::span<const Vec2> v, std::size_t* ia = nullptr,
                                       std::size_t* ib = nullptr) {
  std::size_t bi = 0, bj = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (double d = distance(v[i], v[j]); d > best) {
        best = d;
        bi = i;
        bj = j;
      }
  if (ia) *ia = bi;
  if (ib) *ib = bj;
  if (best <= 0.0) return {0.0, 0.0};
  double dev = 0.0;
  const Vec2 d = v[bj] - v[bi];
  for (Vec2 p : v) dev = std::max(dev, std::abs(cross(d, p - v[bi])) / best);
  return {dev, best};
}

}  // namespace

std::vector<std::size_t> order_ccw_indices(std::span<const Vec2> vertices,
                                           std::optional<Vec2> center_hint) {
  const std::size_t n = vertices.size();
  Vec2 center;
  if (center_hint) {
    center = *center_hint;
  } else {
    if (n < 3) throw DegenerateError("order_ccw: need at least 3 vertices");
    auto [dev, len] = collinearity(vertices);
    if (dev <= 1e-12 * len) throw DegenerateError("order_ccw: collinear vertices");
    for (Vec2 p : vertices) center += p;
    center = center / static_cast<double>(n);
  }
  struct Key {
    double angle;
    double radius;
    std::size_t index;
  };
  std::vector<Key> keys;
  keys.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 r = vertices[i] - center;
    keys.push_back({std::atan2(r.y, r.x), norm(r), i});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    if (a.angle != b.angle) return a.angle < b.angle;
    if (a.radius != b.radius) return a.radius < b.radius;
    return a.index < b.index;
  });
  std::vector<std::size_t> order;
  order.reserve(n);
  for (const auto& k : keys) order.push_back(k.index);
  return order;
}

std::vector<Vec2> order_ccw(std::span<const Vec2> vertices, std::optional<Vec2> center_hint) {
  std::vector<Vec2> out;
  for (std::size_t i : order_ccw_indices(vertices, center_hint)) out.push_back(vertices[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Clipping

namespace {

struct Membership {
  int region;  // 0 = P, 1 = Q
  int edge;
  double param;
};

struct ClipVertex {
  Vec2 p;
  std::vector<Membership> on;

  bool has(int region, int edge) const {
    return std::any_of(on.begin(), on.end(),
                       [&](const Membership& m) { return m.region == region && m.edge == edge; });
  }
};

class VertexSet {
 public:
  explicit VertexSet(double snap) : snap_(snap) {}

  void add(Vec2 p, std::initializer_list<Membership> ms) {
    for (auto& v : verts_) {
      if (distance(v.p, p) <= snap_) {
        for (const auto& m : ms)
          if (!v.has(m.region, m.edge)) v.on.push_back(m);
        return;
      }
    }
    verts_.push_back({p, ms});
  }
  std::vector<ClipVertex>& verts() { return verts_; }

 private:
  double snap_;
  std::vector<ClipVertex> verts_;
};

// Joins consecutive vertices (in the given cyclic order) by the outermost
// original edge piece lying inside both regions.
std::vector<Edge> connect(const std::vector<ClipVertex>& verts, const std::vector<std::size_t>& order,
                          const std::array<const ConvexRegion*, 2>& regions, double tol) {
  const std::size_t n = order.size();
  std::vector<Edge> edges;
  edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ClipVertex& va = verts[order[i]];
    const ClipVertex& vb = verts[order[(i + 1) % n]];
    std::optional<Edge> best;
    double best_score = 0.0;
    for (const auto& ma : va.on) {
      for (const auto& mb : vb.on) {
        if (ma.region != mb.region || ma.edge != mb.edge) continue;
        const Edge& src = regions[ma.region]->edges()[ma.edge];
        if (!src.is_line() && ma.param == mb.param) continue;
        const Vec2 mid = src.is_line() ? 0.5 * (va.p + vb.p) : src.eval(0.5 * (ma.param + mb.param));
        if (!regions[0]->contains(mid, tol) || !regions[1]->contains(mid, tol)) continue;
        const double score = cross(vb.p - va.p, mid - va.p);
        if (!best || score < best_score) {
          best = src.sub(ma.param, mb.param, va.p, vb.p);
          best_score = score;
        }
      }
    }
    edges.push_back(best ? *best : Edge::line(va.p, vb.p));
  }
  return edges;
}

}  // namespace

std::optional<ConvexRegion> clip_convex(const ConvexRegion& p, const ConvexRegion& q) {
  if (p.empty() || q.empty()) return std::nullopt;
  BBox box = p.bbox();
  box.expand(q.bbox());
  const double diam = box.diagonal();
  const double snap = kSnapTol * diam;
  const double tol = 4.0 * snap;
  if (!p.bbox().inflated(snap).intersects(q.bbox())) return std::nullopt;

  const std::array<const ConvexRegion*, 2> regions{&p, &q};
  VertexSet set(snap);

  // Boundary-boundary crossings.
  const auto& pe = p.edges();
  const auto& qe = q.edges();
  for (int i = 0; i < static_cast<int>(pe.size()); ++i) {
    for (int j = 0; j < static_cast<int>(qe.size()); ++j) {
      if (!pe[i].bbox().inflated(snap).intersects(qe[j].bbox())) continue;
      std::vector<Intersection> xs;
      try {
        xs = intersect_edges(pe[i], qe[j]);
      } catch (const OverlapError&) {
        continue;  // coincident stretch: its ends are found as contained vertices
      }
      for (const auto& x : xs) set.add(x.point, {{0, i, x.s}, {1, j, x.t}});
    }
  }
  // Vertices of one region inside the other.
  for (int r = 0; r < 2; ++r) {
    const auto& edges = regions[r]->edges();
    const ConvexRegion& other = *regions[1 - r];
    const int n = static_cast<int>(edges.size());
    for (int k = 0; k < n; ++k) {
      const Vec2 v = edges[k].start();
      if (other.contains(v, tol)) set.add(v, {{r, (k + n - 1) % n, 1.0}, {r, k, 0.0}});
    }
  }

  auto& verts = set.verts();
  if (verts.size() < 2) return std::nullopt;
  for (auto& v : verts) {
    for (int r = 0; r < 2; ++r) {
      const auto& edges = regions[r]->edges();
      for (int k = 0; k < static_cast<int>(edges.size()); ++k) {
        if (v.has(r, k)) continue;
        auto [t, d] = edges[k].project(v.p);
        if (d <= tol) v.on.push_back({r, k, t});
      }
    }
  }

  std::vector<Vec2> pts;
  for (const auto& v : verts) pts.push_back(v.p);
  std::size_t ia = 0, ib = 0;
  const auto [dev, len] = collinearity(pts, &ia, &ib);

  std::vector<Edge> best_edges;
  double best_area = 0.0;
  auto try_order = [&](const std::vector<std::size_t>& order) {
    auto edges = connect(verts, order, regions, tol);
    const double area = ConvexRegion(edges).signed_area();
    if (area > best_area) {
      best_area = area;
      best_edges = std::move(edges);
    }
  };

  if (pts.size() >= 3 && dev > tol) {
    try_order(order_ccw_indices(pts));
  } else {
    // Collinear vertices: the region is a cap between the line and an arc.
    // Order along the line and keep the orientation with positive area.
    const Vec2 d = pts[ib] - pts[ia];
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return dot(pts[x], d) < dot(pts[y], d); });
    try_order(order);
    std::reverse(order.begin(), order.end());
    try_order(order);
  }

  if (best_edges.empty() || best_area <= 1e-16 * diam * diam) return std::nullopt;
  return ConvexRegion(std::move(best_edges));
}

// ---------------------------------------------------------------------------

std::vector<double> inflection_params_cubic(const CubicArc& cubic) {
  const Vec2 a = cubic.a, b = cubic.b, c = cubic.c;
  const double q2 = 6.0 * (a.y * b.x - a.x * b.y);
  const double q1 = 6.0 * (a.y * c.x - a.x * c.y);
  const double q0 = 2.0 * (b.y * c.x - b.x * c.y);
  const double scale = std::max({std::abs(q2), std::abs(q1), std::abs(q0)});
  if (scale == 0.0) return {};
  std::vector<double> out;
  if (std::abs(q2) <= 1e-15 * scale) {
    if (std::abs(q1) <= 1e-15 * scale) return {};
    const double t = -q0 / q1;
    if (t >= 0.0 && t <= 1.0) out.push_back(t);
    return out;
  }
  const double disc = q1 * q1 - 4.0 * q2 * q0;
  if (disc <= 1e-13 * std::max(q1 * q1, std::abs(4.0 * q2 * q0))) return {};  // no sign change
  for (double t : quadratic_roots(q2, q1, q0))
    if (t >= 0.0 && t <= 1.0) out.push_back(t);
  return out;
}

std::vector<Vec2> sample_boundary(const ConvexRegion& region, int samples_per_edge) {
  std::vector<Vec2> pts;
  for (const auto& e : region.edges())
    for (int i = 0; i < samples_per_edge; ++i)
      pts.push_back(e.eval(static_cast<double>(i) / samples_per_edge));
  if (!region.empty()) pts.push_back(region.edges().front().start());
  return pts;
}

}  // namespace sldg
