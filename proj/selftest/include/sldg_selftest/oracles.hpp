#pragma once

// Independent reference computations used to check the library: polygon
// clipping, Monte Carlo area, slice-wise adaptive quadrature, brute-force
// point location.

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "sldg/geometry.hpp"
#include "sldg/mesh.hpp"

namespace sldg::oracle {

using Polygon = std::vector<Vec2>;

/// Shoelace signed area.
double polygon_area(const Polygon& p);
/// Sutherland-Hodgman: subject clipped by a convex CCW clip polygon.
Polygon sutherland_hodgman(const Polygon& subject, const Polygon& clip);

/// Closed curve made of quadratic arcs (lines are arcs with a = 0); inclusion
/// by counting crossings of the rightward horizontal ray.
class CurvedLoop {
 public:
  explicit CurvedLoop(std::vector<ParametricArc> arcs);
  bool contains(Vec2 p) const;
  const BBox& bbox() const { return box_; }

 private:
  struct Piece {
    ParametricArc arc;
    double ylo, yhi;
  };
  std::vector<Piece> pieces_;
  BBox box_;
};

struct MonteCarloEstimate {
  double area = 0.0;
  double sigma = 0.0;
};

/// Uniform sampling of the loop's bounding box.
MonteCarloEstimate monte_carlo_area(const CurvedLoop& loop, std::int64_t samples, std::mt19937_64& rng);

/// Vertical extent of a convex region at abscissa x, from its edges alone.
/// Returns false when the line misses the region.
bool vertical_slice(const ConvexRegion& r, double x, double& ylo, double& yhi);

/// Integral of f over the intersection of two convex regions: slices from
/// both regions intersected per x, Gauss-Legendre in y, adaptive tanh-sinh in
/// x between breakpoints (vertices, vertical tangents, slice crossings).
double intersection_integral(const ConvexRegion& p, const ConvexRegion& q,
                             const std::function<double(double, double)>& f, int y_points = 6);

/// Index of an element containing p by checking every element (-1 if none).
int locate_brute_force(const Mesh& mesh, Vec2 p, double tol = 0.0);

/// Seed from SLDG_SEED when set, otherwise the given default.
std::uint64_t seed_from_env(std::uint64_t fallback);

}  // namespace sldg::oracle
