#include "sldg/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "sldg/errors.hpp"

namespace sldg {

namespace {

GaussRule make_gauss(int n) {
  GaussRule r;
  r.n = n;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    r.weights[n - 1 - i] = 0.5 * w;
  }
  return r;
}

}  // namespace

const GaussRule& gauss_rule(int n) {
  static const std::vector<GaussRule> rules = [] {
    std::vector<GaussRule> v;
    for (int k = 1; k <= 16; ++k) v.push_back(make_gauss(k));
    return v;
  }();
  if (n < 1 || n > 16) throw ParameterError("gauss_rule: n must be in [1, 16]");
  return rules[n - 1];
}

BivariatePoly green_antiderivative(const BivariatePoly& f) { return f.antiderivative_x(); }

BoundaryPath::BoundaryPath(std::vector<Edge> edges) : edges_(std::move(edges)) {
  if (edges_.empty()) throw TopologyError("BoundaryPath: no edges");
  BBox box;
  for (const auto& e : edges_) box.expand(e.bbox());
  const double tol = kSnapTol * std::max(box.diagonal(), 1e-300);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Vec2 end = edges_[i].end();
    const Vec2 next = edges_[(i + 1) % edges_.size()].start();
    if (distance(end, next) > tol) throw TopologyError("BoundaryPath: open path");
  }
  if (integrate_edges(edges_, BivariatePoly::constant(1.0), box.lo) <= 0.0) {
    throw OrientationError("BoundaryPath: loop is not counter-clockwise");
  }
}

double integrate_edges(std::span<const Edge> edges, const BivariatePoly& f, Vec2 origin,
                       double scale, int n) {
  const BivariatePoly q = green_antiderivative(f);
  const GaussRule& g = gauss_rule(n);
  double acc = 0.0;
  for (const auto& e : edges) {
    double edge_acc = 0.0;
    for (int i = 0; i < g.n; ++i) {
      const double t = g.nodes[i];
      const Vec2 x = (e.eval(t) - origin) / scale;
      // dy in physical units; Q is in scaled units so the area picks up one scale factor.
      edge_acc += g.weights[i] * q(x) * e.deriv(t).y;
    }
    acc += edge_acc;
  }
  return acc * scale;
}

double integrate_over_region(const BoundaryPath& path, const BivariatePoly& f, int n) {
  return integrate_edges(path.edges(), f, {}, 1.0, n);
}

double region_area(const BoundaryPath& path) {
  return integrate_over_region(path, BivariatePoly::constant(1.0));
}

std::vector<double> region_moments(std::span<const Edge> edges, Vec2 origin, double scale,
                                   int degree) {
  std::vector<double> m(monomial_count(degree), 0.0);
  // Integrand degree in t is 2 (degree + 1) + 1 on arcs.
  const GaussRule& g = gauss_rule(std::max(2, degree + 2));
  std::vector<double> xp(degree + 2), yq(degree + 1);
  for (const auto& e : edges) {
    for (int i = 0; i < g.n; ++i) {
      const double t = g.nodes[i];
      const Vec2 x = (e.eval(t) - origin) / scale;
      const double w = g.weights[i] * e.deriv(t).y * scale;
      xp[0] = 1.0;
      yq[0] = 1.0;
      for (int k = 1; k <= degree + 1; ++k) xp[k] = xp[k - 1] * x.x;
      for (int k = 1; k <= degree; ++k) yq[k] = yq[k - 1] * x.y;
      for (int p = 0; p <= degree; ++p)
        for (int q = 0; p + q <= degree; ++q) m[monomial_index(p, q)] += w * xp[p + 1] * yq[q] / (p + 1);
    }
  }
  return m;
}

const TriangleRule& triangle_rule_deg6() {
  static const TriangleRule rule = [] {
    TriangleRule r;
    r.exact_degree = 6;
    auto add3 = [&](double a, double b, double w) {
      r.bary.push_back({a, b, b});
      r.bary.push_back({b, a, b});
      r.bary.push_back({b, b, a});
      for (int i = 0; i < 3; ++i) r.weights.push_back(w);
    };
    auto add6 = [&](double a, double b, double c, double w) {
      for (auto p : {std::array<double, 3>{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b},
                     {c, b, a}}) {
        r.bary.push_back(p);
        r.weights.push_back(w);
      }
    };
    add3(0.501426509658179, 0.249286745170910, 0.116786275726379);
    add3(0.873821971016996, 0.063089014491502, 0.050844906370207);
    add6(0.053145049844817, 0.310352451033784, 0.636502499121399, 0.082851075618374);
    // Published abscissae carry 15 digits; make each triple sum to 1 exactly.
    for (auto& b : r.bary) b[0] = 1.0 - b[1] - b[2];
    return r;
  }();
  return rule;
}

TriangleRule collapsed_triangle_rule(int n) {
  const GaussRule& g = gauss_rule(n);
  TriangleRule r;
  r.exact_degree = 2 * n - 2;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = g.nodes[i], v = g.nodes[j];
      const double x = u, y = v * (1.0 - u);
      r.bary.push_back({1.0 - x - y, x, y});
      r.weights.push_back(2.0 * g.weights[i] * g.weights[j] * (1.0 - u));
    }
  return r;
}

}  // namespace sldg
