#pragma once

// Gauss rules, triangle rules, and area integrals of polynomials over
// regions bounded by lines and quadratic arcs (Green's theorem with P = 0).

#include <array>
#include <span>
#include <vector>

#include "sldg/geometry.hpp"
#include "sldg/poly.hpp"

namespace sldg {

/// Gauss-Legendre rule on [0, 1]; exact for degree <= 2n - 1.
struct GaussRule {
  int n = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule, 1 <= n <= 16; throws ParameterError otherwise.
const GaussRule& gauss_rule(int n);

/// Q with dQ/dx = f (and P = 0): c_pq x^p y^q -> c_pq x^(p+1) y^q / (p+1).
BivariatePoly green_antiderivative(const BivariatePoly& f);

/// Closed CCW loop of edges. The constructor checks closure (consecutive
/// endpoints within the snap tolerance) and positive orientation.
class BoundaryPath {
 public:
  explicit BoundaryPath(std::vector<Edge> edges);
  explicit BoundaryPath(const ConvexRegion& region) : BoundaryPath(region.edges()) {}
  const std::vector<Edge>& edges() const { return edges_; }

 private:
  std::vector<Edge> edges_;
};

/// Sum over edges of the integral of Q(x(t), y(t)) y'(t) with an n-point Gauss rule.
double integrate_over_region(const BoundaryPath& path, const BivariatePoly& f, int n = 8);
double region_area(const BoundaryPath& path);

/// Same integral without closure/orientation checks; f is expressed in the
/// coordinates (x - origin) / scale.
double integrate_edges(std::span<const Edge> edges, const BivariatePoly& f, Vec2 origin = {},
                       double scale = 1.0, int n = 8);

/// Moments m[monomial_index(p, q)] = integral of X^p Y^q dx dy for p + q <= degree,
/// with X = (x - origin) / scale, Y = (y - origin) / scale.
std::vector<double> region_moments(std::span<const Edge> edges, Vec2 origin, double scale,
                                   int degree);

/// Symmetric rule on a triangle in barycentric coordinates; weights sum to 1.
struct TriangleRule {
  std::vector<std::array<double, 3>> bary;
  std::vector<double> weights;
  int exact_degree = 0;
};

/// 12-point rule exact to degree 6.
const TriangleRule& triangle_rule_deg6();
/// Collapsed (Duffy) n x n Gauss product rule, exact to degree 2n - 2.
TriangleRule collapsed_triangle_rule(int n);

}  // namespace sldg
