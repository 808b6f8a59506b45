#include "sldg_selftest/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace sldg::oracle {

double polygon_area(const Polygon& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2 u = p[i], v = p[(i + 1) % p.size()];
    a += u.x * v.y - v.x * u.y;
  }
  return 0.5 * a;
}

Polygon sutherland_hodgman(const Polygon& subject, const Polygon& clip) {
  Polygon out = subject;
  for (std::size_t i = 0; i < clip.size() && !out.empty(); ++i) {
    const Vec2 a = clip[i], b = clip[(i + 1) % clip.size()];
    auto side = [&](Vec2 p) { return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x); };
    Polygon in = std::move(out);
    out.clear();
    for (std::size_t j = 0; j < in.size(); ++j) {
      const Vec2 cur = in[j], prev = in[(j + in.size() - 1) % in.size()];
      const double sc = side(cur), sp = side(prev);
      if (sc >= 0.0) {
        if (sp < 0.0) out.push_back(prev + (sp / (sp - sc)) * (cur - prev));
        out.push_back(cur);
      } else if (sp >= 0.0) {
        out.push_back(prev + (sp / (sp - sc)) * (cur - prev));
      }
    }
  }
  return out;
}

CurvedLoop::CurvedLoop(std::vector<ParametricArc> arcs) {
  for (const auto& a : arcs) {
    double ylo = std::min(a.start().y, a.end().y), yhi = std::max(a.start().y, a.end().y);
    if (a.a.y != 0.0) {
      const double t = -a.b.y / (2.0 * a.a.y);
      if (t > 0.0 && t < 1.0) {
        const double y = a.eval(t).y;
        ylo = std::min(ylo, y);
        yhi = std::max(yhi, y);
      }
    }
    pieces_.push_back({a, ylo, yhi});
    box_.expand(a.bbox());
  }
}

bool CurvedLoop::contains(Vec2 p) const {
  // Half-open parameter convention [0, 1) so shared endpoints count once.
  int crossings = 0;
  for (const auto& pc : pieces_) {
    if (p.y < pc.ylo || p.y > pc.yhi) continue;
    const ParametricArc& a = pc.arc;
    const double A = a.a.y, B = a.b.y, C = a.c.y - p.y;
    double roots[2];
    int n = 0;
    if (std::abs(A) < 1e-300) {
      if (B != 0.0) roots[n++] = -C / B;
    } else {
      const double disc = B * B - 4.0 * A * C;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
        roots[n++] = q / A;
        if (q != 0.0) roots[n++] = C / q;
      }
    }
    for (int i = 0; i < n; ++i) {
      const double t = roots[i];
      if (t < 0.0 || t >= 1.0) continue;
      if (a.eval(t).x > p.x) ++crossings;
    }
  }
  return (crossings & 1) != 0;
}

MonteCarloEstimate monte_carlo_area(const CurvedLoop& loop, std::int64_t samples, std::mt19937_64& rng) {
  const BBox& b = loop.bbox();
  std::uniform_real_distribution<double> ux(b.lo.x, b.hi.x), uy(b.lo.y, b.hi.y);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const Vec2 p{ux(rng), uy(rng)};
    if (loop.contains(p)) ++hits;
  }
  const double box_area = (b.hi.x - b.lo.x) * (b.hi.y - b.lo.y);
  const double frac = static_cast<double>(hits) / static_cast<double>(samples);
  return {frac * box_area, box_area * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples))};
}

bool vertical_slice(const ConvexRegion& r, double x, double& ylo, double& yhi) {
  ylo = std::numeric_limits<double>::infinity();
  yhi = -ylo;
  for (const auto& e : r.edges()) {
    const Vec2 p0 = e.start(), p1 = e.end();
    if (e.is_line()) {
      const double lo = std::min(p0.x, p1.x), hi = std::max(p0.x, p1.x);
      if (x < lo || x > hi) continue;
      if (p1.x == p0.x) {
        ylo = std::min({ylo, p0.y, p1.y});
        yhi = std::max({yhi, p0.y, p1.y});
        continue;
      }
      const double y = p0.y + (x - p0.x) / (p1.x - p0.x) * (p1.y - p0.y);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
      continue;
    }
    const ParametricArc& a = e.curve();
    const double A = a.a.x, B = a.b.x, C = a.c.x - x;
    double roots[2];
    int n = 0;
    if (std::abs(A) <= 1e-15 * (std::abs(B) + std::abs(a.c.x) + 1.0)) {
      if (B != 0.0) roots[n++] = -C / B;
    } else {
      const double disc = B * B - 4.0 * A * C;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
        roots[n++] = q / A;
        if (q != 0.0) roots[n++] = C / q;
      }
    }
    for (int i = 0; i < n; ++i) {
      const double t = roots[i];
      if (t < -1e-12 || t > 1.0 + 1e-12) continue;
      const double y = a.eval(std::clamp(t, 0.0, 1.0)).y;
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  return ylo <= yhi;
}

namespace {

// x positions where a region's slice is not smooth.
void region_breaks(const ConvexRegion& r, std::vector<double>& xs) {
  for (const auto& e : r.edges()) {
    xs.push_back(e.start().x);
    if (!e.is_line() && e.curve().a.x != 0.0) {
      const double t = -e.curve().b.x / (2.0 * e.curve().a.x);
      if (t > 0.0 && t < 1.0) xs.push_back(e.curve().eval(t).x);
    }
  }
}

// Sign changes of g on [a, b] by sampling plus bisection.
void sign_changes(const std::function<double(double)>& g, double a, double b, int samples,
                  std::vector<double>& xs) {
  double x0 = a, g0 = g(a);
  for (int i = 1; i <= samples; ++i) {
    const double x1 = a + (b - a) * i / samples;
    const double g1 = g(x1);
    if (std::isfinite(g0) && std::isfinite(g1) && (g0 < 0.0) != (g1 < 0.0)) {
      double lo = x0, hi = x1, glo = g0;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (std::abs(lo) + 1.0); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      xs.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    g0 = g1;
  }
}

}  // namespace

double intersection_integral(const ConvexRegion& p, const ConvexRegion& q,
                             const std::function<double(double, double)>& f, int y_points) {
  const double xa = std::max(p.bbox().lo.x, q.bbox().lo.x);
  const double xb = std::min(p.bbox().hi.x, q.bbox().hi.x);
  if (!(xa < xb)) return 0.0;

  auto slice = [&](double x, double& lo, double& hi) {
    double plo, phi, qlo, qhi;
    if (!vertical_slice(p, x, plo, phi) || !vertical_slice(q, x, qlo, qhi)) return false;
    lo = std::max(plo, qlo);
    hi = std::min(phi, qhi);
    return lo < hi;
  };
  auto slice_diff = [&](int which) {
    return [&, which](double x) {
      double plo, phi, qlo, qhi;
      if (!vertical_slice(p, x, plo, phi) || !vertical_slice(q, x, qlo, qhi)) return std::nan("");
      switch (which) {
        case 0: return plo - qlo;
        case 1: return phi - qhi;
        case 2: return phi - qlo;
        default: return qhi - plo;
      }
    };
  };

  std::vector<double> xs{xa, xb};
  region_breaks(p, xs);
  region_breaks(q, xs);
  const double eps = 1e-13 * (xb - xa);
  for (int which = 0; which < 4; ++which) sign_changes(slice_diff(which), xa + eps, xb - eps, 2000, xs);
  std::sort(xs.begin(), xs.end());
  std::vector<double> cuts;
  for (double x : xs) {
    if (x < xa || x > xb) continue;
    if (cuts.empty() || x - cuts.back() > 1e-14 * (xb - xa)) cuts.push_back(x);
  }

  auto g = [&](double x) {
    double lo, hi;
    if (!slice(x, lo, hi)) return 0.0;
    // Exact for polynomials of degree <= 2 y_points - 1 in y.
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    double acc = 0.0;
    switch (y_points) {
      case 6:
        acc = boost::math::quadrature::gauss<double, 6>::integrate(
            [&](double s) { return f(x, mid + half * s); }, -1.0, 1.0);
        break;
      default:
        acc = boost::math::quadrature::gauss<double, 10>::integrate(
            [&](double s) { return f(x, mid + half * s); }, -1.0, 1.0);
        break;
    }
    return acc * half;
  };

  boost::math::quadrature::tanh_sinh<double> integrator(15);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    total += integrator.integrate(g, cuts[i], cuts[i + 1], 1e-15);
  }
  return total;
}

int locate_brute_force(const Mesh& mesh, Vec2 p, double tol) {
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto c = mesh.corners(e);
    if (point_in_triangle(p, c[0], c[1], c[2], tol)) return e;
  }
  return -1;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  if (const char* s = std::getenv("SLDG_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
    }
  }
  return fallback;
}

}  // namespace sldg::oracle
