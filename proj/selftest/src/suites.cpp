#include "sldg_selftest/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "sldg/errors.hpp"
#include "sldg/quadrature.hpp"
#include "sldg_selftest/oracles.hpp"

namespace sldg::oracle {

namespace {

double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

double min_angle(Vec2 a, Vec2 b, Vec2 c) {
  auto ang = [](Vec2 p, Vec2 q, Vec2 r) {
    const Vec2 u = q - p, v = r - p;
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
  };
  return std::min({ang(a, b, c), ang(b, c, a), ang(c, a, b)});
}

std::string format_result(const char* what, double metric, double threshold) {
  std::ostringstream s;
  s.precision(3);
  s << what << " " << std::scientific << metric << " (threshold " << threshold << ")";
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::array<Vec2, 3> random_triangle(std::mt19937_64& rng) {
  for (;;) {
    std::array<Vec2, 3> t;
    for (auto& p : t) p = {uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0)};
    if (min_angle(t[0], t[1], t[2]) < 0.09) continue;
    if (orient2d(t[0], t[1], t[2]) < 0.0) std::swap(t[1], t[2]);
    return t;
  }
}

std::array<Vec2, 6> random_tria6(std::mt19937_64& rng, double bulge) {
  for (;;) {
    const auto c = random_triangle(rng);
    if (std::abs(orient2d(c[0], c[1], c[2])) < 0.1) continue;
    std::array<Vec2, 6> n{c[0], c[1], c[2], {}, {}, {}};
    for (int i = 0; i < 3; ++i) {
      const Vec2 a = c[i], b = c[(i + 1) % 3];
      const Vec2 d = b - a;
      n[3 + i] = 0.5 * (a + b) + uniform(rng, -bulge, bulge) * perp(d) + uniform(rng, -0.05, 0.05) * d;
    }
    try {
      convex_partition_tria6(n);
      return n;
    } catch (const GeometryError&) {
    }
  }
}

ParametricArc random_arc(std::mt19937_64& rng) {
  for (;;) {
    const Vec2 p0{uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0)};
    const Vec2 p1{uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0)};
    if (distance(p0, p1) < 0.3) continue;
    double off = uniform(rng, 0.05, 0.35);
    if (uniform(rng, 0.0, 1.0) < 0.5) off = -off;
    const Vec2 mid = 0.5 * (p0 + p1) + off * perp(p1 - p0) + uniform(rng, -0.1, 0.1) * (p1 - p0);
    return arc_through_3_points(p0, mid, p1);
  }
}

SuiteResult straight_clip_suite(std::mt19937_64& rng, int pairs, double tol) {
  SuiteResult r{"straight-clip", false, 0.0, tol, ""};
  int nonempty = 0;
  for (int i = 0; i < pairs; ++i) {
    const auto a = random_triangle(rng);
    const auto b = random_triangle(rng);
    const double ref = polygon_area(sutherland_hodgman({a.begin(), a.end()}, {b.begin(), b.end()}));
    const auto clip = clip_convex(ConvexRegion::triangle(a[0], a[1], a[2]),
                                  ConvexRegion::triangle(b[0], b[1], b[2]));
    const double got = clip ? clip->signed_area() : 0.0;
    if (clip) ++nonempty;
    r.metric = std::max(r.metric, std::abs(got - ref));
  }
  r.passed = r.metric <= tol;
  r.detail = format_result("max |area - oracle|", r.metric, tol) + ", " + std::to_string(pairs) +
             " pairs, " + std::to_string(nonempty) + " overlapping";
  return r;
}

SuiteResult tria6_area_suite(std::mt19937_64& rng, int cells, std::int64_t samples, double sigmas) {
  SuiteResult r{"tria6-monte-carlo", false, 0.0, sigmas, ""};
  const auto t0 = std::chrono::steady_clock::now();
  double worst_abs = 0.0;
  for (int i = 0; i < cells; ++i) {
    const auto n = random_tria6(rng);
    double area = 0.0;
    for (const auto& piece : convex_partition_tria6(n)) area += piece.sign * piece.region.signed_area();
    const CurvedLoop loop({arc_through_3_points(n[0], n[3], n[1]), arc_through_3_points(n[1], n[4], n[2]),
                           arc_through_3_points(n[2], n[5], n[0])});
    const auto mc = monte_carlo_area(loop, samples, rng);
    const double z = std::abs(area - mc.area) / mc.sigma;
    r.metric = std::max(r.metric, z);
    worst_abs = std::max(worst_abs, std::abs(area - mc.area));
  }
  r.passed = r.metric <= sigmas;
  std::ostringstream s;
  s << format_result("max |area - MC| / sigma", r.metric, sigmas) << ", " << cells << " cells x " << samples
    << " samples, max abs diff " << worst_abs << ", " << seconds_since(t0) << " s";
  r.detail = s.str();
  return r;
}

SuiteResult intersection_suite(std::mt19937_64& rng, int trials, double tol) {
  SuiteResult r{"intersection-residuals", false, 0.0, tol, ""};
  constexpr int kSamples = 4000;
  int found = 0, missed = 0;
  for (int i = 0; i < trials; ++i) {
    const ParametricArc arc = random_arc(rng);
    std::vector<double> found_s;
    // Signed implicit function of the second curve, and that curve's parameter at a point.
    std::function<double(Vec2)> implicit;
    std::function<double(Vec2)> param;
    if (i % 2 == 0) {
      const Vec2 p = arc.eval(uniform(rng, 0.0, 1.0)) + Vec2{uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2)};
      const double ang = uniform(rng, 0.0, 2.0 * std::acos(-1.0));
      const Vec2 d{std::cos(ang), std::sin(ang)};
      const Segment line{p - 0.8 * d, p + 0.8 * d};
      for (const auto& x : intersect_arc_line(arc, line)) {
        r.metric = std::max({r.metric, distance(arc.eval(x.s), line.eval(x.t)), distance(x.point, arc.eval(x.s))});
        found_s.push_back(x.s);
      }
      implicit = [line](Vec2 q) { return cross(line.p1 - line.p0, q - line.p0); };
      param = [line](Vec2 q) { return dot(q - line.p0, line.p1 - line.p0) / dot(line.p1 - line.p0, line.p1 - line.p0); };
    } else {
      const ParametricArc other = random_arc(rng);
      for (const auto& x : intersect_arc_arc(arc, other)) {
        r.metric = std::max({r.metric, distance(arc.eval(x.s), other.eval(x.t)), distance(x.point, arc.eval(x.s))});
        found_s.push_back(x.s);
      }
      // p - c = a t^2 + b t gives t = cross(a, p - c) / D and t^2 = -cross(b, p - c) / D.
      const double D = cross(other.a, other.b);
      implicit = [other, D](Vec2 q) {
        const double u = cross(other.a, q - other.c);
        return u * u + D * cross(other.b, q - other.c);
      };
      param = [other, D](Vec2 q) { return cross(other.a, q - other.c) / D; };
    }
    found += static_cast<int>(found_s.size());
    double f0 = implicit(arc.eval(0.0));
    for (int k = 1; k <= kSamples; ++k) {
      const double s = static_cast<double>(k) / kSamples;
      const double f1 = implicit(arc.eval(s));
      if ((f0 < 0.0) != (f1 < 0.0)) {
        const double sm = s - 0.5 / kSamples;
        const double t = param(arc.eval(sm));
        if (sm > 0.01 && sm < 0.99 && t > 0.01 && t < 0.99) {
          const bool hit = std::any_of(found_s.begin(), found_s.end(),
                                       [&](double fs) { return std::abs(fs - sm) <= 2.0 / kSamples; });
          if (!hit) ++missed;
        }
      }
      f0 = f1;
    }
  }
  r.passed = r.metric <= tol && missed == 0;
  r.detail = format_result("max residual", r.metric, tol) + ", " + std::to_string(found) + " points, " +
             std::to_string(missed) + " missed crossings";
  return r;
}

SuiteResult green_suite(std::mt19937_64& rng, int regions, double tol) {
  SuiteResult r{"green-vs-adaptive", false, 0.0, tol, ""};
  int built = 0, arc_arc = 0;
  while (built < regions) {
    const ConvexRegion p = ConvexRegion::parabolic_segment(random_arc(rng));
    ConvexRegion q;
    if (built % 2 == 0) {
      const auto t = random_triangle(rng);
      q = ConvexRegion::triangle(t[0], t[1], t[2]);
    } else {
      q = ConvexRegion::parabolic_segment(random_arc(rng));
    }
    const auto clip = clip_convex(p, q);
    if (!clip) continue;
    const auto& edges = clip->edges();
    if (std::none_of(edges.begin(), edges.end(), [](const Edge& e) { return !e.is_line(); })) continue;
    if (clip->signed_area() < 1e-3) continue;
    ++built;
    if (built % 2 == 0) ++arc_arc;

    const BBox& box = clip->bbox();
    const Vec2 origin = 0.5 * (box.lo + box.hi);
    const double h = 0.5 * std::max(box.hi.x - box.lo.x, box.hi.y - box.lo.y);
    for (int d = 0; d <= 4; ++d) {
      for (int px = 0; px <= d; ++px) {
        // (2 + X)^px (2 + Y)^(d - px): positive on the region, every monomial present.
        BivariatePoly f = BivariatePoly::constant(1.0);
        BivariatePoly fx(1), fy(1);
        fx.at(0, 0) = 2.0;
        fx.at(1, 0) = 1.0;
        fy.at(0, 0) = 2.0;
        fy.at(0, 1) = 1.0;
        for (int k = 0; k < px; ++k) f = f * fx;
        for (int k = 0; k < d - px; ++k) f = f * fy;
        const double got = integrate_edges(edges, f, origin, h);
        const double ref = intersection_integral(
            p, q, [&](double x, double y) { return f((x - origin.x) / h, (y - origin.y) / h); });
        r.metric = std::max(r.metric, std::abs(got - ref) / std::abs(ref));
      }
    }
  }
  r.passed = r.metric <= tol;
  r.detail = format_result("max relative difference", r.metric, tol) + ", " + std::to_string(regions) +
             " regions (" + std::to_string(arc_arc) + " arc/arc), degrees 0-4";
  return r;
}

std::vector<SuiteResult> run_all_suites(const SelftestOptions& options) {
  std::vector<SuiteResult> out;
  std::mt19937_64 g1(options.seed), g2(options.seed + 1), g3(options.seed + 2), g4(options.seed + 3);
  out.push_back(straight_clip_suite(g1));
  out.push_back(tria6_area_suite(g2, options.mc_cells, options.mc_samples));
  out.push_back(intersection_suite(g3));
  out.push_back(green_suite(g4));
  return out;
}

}  // namespace sldg::oracle
