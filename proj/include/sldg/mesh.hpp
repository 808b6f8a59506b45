#pragma once

// Unstructured straight-sided triangular meshes, midpoint refinement, and
// the rectangular bin grid used to find overlap candidates.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sldg/point.hpp"

namespace sldg {

struct ElementMetrics {
  double area = 0.0;
  double perimeter = 0.0;
  double r = 0.0;  // 2 * area / perimeter
};

/// Throws DegenerateError for a zero-area triangle. Orientation-independent.
ElementMetrics element_metrics(Vec2 a, Vec2 b, Vec2 c);

struct Element {
  int id = 0;
  std::array<int, 3> corner_ids{};  // CCW
  /// neighbor_ids[i] is across the edge (corner i, corner i+1); -1 on the boundary.
  std::array<int, 3> neighbor_ids{-1, -1, -1};
  double area = 0.0;
  double perimeter = 0.0;
  double r = 0.0;
  Vec2 centroid;
  double diameter = 0.0;  // longest edge
  BBox bbox;
};

class Mesh {
 public:
  Mesh() = default;
  /// Builds adjacency and metrics; clockwise triangles are reoriented.
  /// Throws TopologyError for a non-manifold edge or a bad index.
  Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Element>& elements() const { return elements_; }
  const Element& element(int id) const { return elements_[id]; }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  std::array<Vec2, 3> corners(int id) const;
  /// (element, local edge) pairs without a neighbor.
  const std::vector<std::pair<int, int>>& boundary_edges() const { return boundary_edges_; }
  bool is_boundary_element(int id) const;
  int interior_edge_count() const { return interior_edges_; }

  double r_max() const { return r_max_; }
  double r_min() const { return r_min_; }
  double total_area() const { return total_area_; }
  const BBox& bbox() const { return bbox_; }

 private:
  std::vector<Vec2> vertices_;
  std::vector<Element> elements_;
  std::vector<std::pair<int, int>> boundary_edges_;
  int interior_edges_ = 0;
  double r_max_ = 0.0;
  double r_min_ = 0.0;
  double total_area_ = 0.0;
  BBox bbox_;
};

/// Text format: "nv ne", nv lines "x y", ne lines "i0 i1 i2" (0-based).
/// Throws ParseError with the offending line number.
Mesh load_mesh(const std::string& path);
Mesh parse_mesh(const std::string& text);
void save_mesh(const Mesh& mesh, const std::string& path);

/// Each triangle split into four by its edge midpoints. With snap_radius,
/// midpoints of boundary edges are pushed radially onto that circle.
Mesh refine_midpoint(const Mesh& mesh, std::optional<double> snap_radius = std::nullopt);

/// Hexagon fan about the origin with corners on the circle, refined `level`
/// times with boundary snapping: 6 * 4^level elements.
Mesh circle_fan_mesh(int level, double radius);

/// "level:N" selects circle_fan_mesh(N, radius); anything else is a file path.
Mesh load_or_generate(const std::string& spec, double radius);

struct AuxGrid {
  Vec2 origin;
  double cell_dx = 0.0;
  double cell_dy = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<std::vector<int>> bins;  // row-major, index iy * nx + ix

  /// Every element whose bounding box meets box, sorted, without duplicates.
  std::vector<int> candidates_for_box(const BBox& box) const;
};

/// Throws ParameterError for a non-positive bin size.
AuxGrid build_aux_grid(const Mesh& mesh, double target_bin_size);
/// Twice the mean element diameter.
double default_bin_size(const Mesh& mesh);
inline AuxGrid build_aux_grid(const Mesh& mesh) { return build_aux_grid(mesh, default_bin_size(mesh)); }

}  // namespace sldg
