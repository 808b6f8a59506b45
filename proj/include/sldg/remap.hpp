#pragma once

// The conservative semi-Lagrangian update: overlaps of upstream elements
// with the Eulerian mesh, signed intersection integrals, and limiters.

#include <string>
#include <vector>

#include "sldg/dgcore.hpp"
#include "sldg/geometry.hpp"
#include "sldg/mesh.hpp"
#include "sldg/transport.hpp"

namespace sldg {

struct SignedRegion {
  ConvexRegion region;
  int sign = +1;
};

/// A intersected with B for signed convex decompositions: every nonempty
/// pairwise clip, carrying the product of the piece signs.
std::vector<SignedRegion> signed_intersection(const std::vector<SignedPiece>& a,
                                              const std::vector<SignedPiece>& b);
double signed_area(const std::vector<SignedRegion>& regions);

struct OverlapRecord {
  int upstream = -1;    // Eulerian element whose upstream region this is
  int background = -1;  // Eulerian element being intersected
  std::vector<SignedRegion> pieces;

  double signed_area() const { return sldg::signed_area(pieces); }
};

struct OverlapResult {
  std::vector<OverlapRecord> records;
  double upstream_area = 0.0;
  double covered_area = 0.0;
  /// True when some candidate lies on the mesh boundary, in which case part
  /// of the upstream region may fall outside the mesh.
  bool near_boundary = false;
};

/// Clips every piece of the upstream element against every candidate
/// element from the grid. Throws RemapConsistencyError when the covered area
/// differs from the upstream area by more than 1e-8 relative (for regions
/// away from the boundary) or exceeds it (near the boundary).
OverlapResult find_overlaps(const UpstreamElement& up, const Mesh& mesh, const AuxGrid& grid);

struct LimiterConfig {
  bool weno_enabled = false;
  /// TVB constant M: jumps below M h^2 are never flagged.
  double weno_threshold = 1.0;
  bool pp_enabled = false;
  double pp_epsilon = 1e-15;
};

struct StepOptions {
  TraceConfig trace;
  LimiterConfig limiters;
  /// Fall back to straight-sided upstream elements when the curved one is invalid.
  bool relaxed = false;
  /// Use straight-sided upstream elements everywhere.
  bool straight_upstream = false;
  int threads = 1;
};

struct StepReport {
  int step = 0;
  double t = 0.0;
  double mass_before = 0.0;
  double mass_after = 0.0;
  double theta_min = 1.0;
  int pp_limited = 0;
  int pp_clamped = 0;
  int flagged = 0;
  int relaxed_elements = 0;
  /// Largest relative deficit (upstream - covered) / upstream over elements.
  double max_outflow_fraction = 0.0;
  double wall_seconds = 0.0;

  /// step=<n> t=<t> mass=<v> dmass=<v> theta_min=<v> flagged=<count>
  std::string log_line() const;
};

/// Precomputed per-mesh data shared by all steps.
class Remapper {
 public:
  Remapper(const Mesh& mesh, const BasisSet& basis, StepOptions options = {});

  const Mesh& mesh() const { return *mesh_; }
  const BasisSet& basis() const { return *basis_; }
  const AuxGrid& grid() const { return grid_; }
  const StepOptions& options() const { return options_; }
  StepOptions& options() { return options_; }

  /// Coefficients of u^{n+1} on element e from u^n (no limiting).
  void remap_element(const DGField& u_old, const VelocityField& v, double t, double dt, int e,
                     double* out, StepReport* report = nullptr) const;

  /// One full step: remap every element, then WENO, then PP.
  /// Throws StepError naming the element whose upstream region is invalid.
  StepReport step(const DGField& u_old, DGField& u_new, const VelocityField& v, double t, double dt) const;

 private:
  const Mesh* mesh_;
  const BasisSet* basis_;
  AuxGrid grid_;
  StepOptions options_;
  /// Test functions at the seven Eulerian nodes, per element: [e][m][q].
  std::vector<std::array<std::array<double, 7>, kMaxModes>> node_values_;
  std::vector<std::array<Vec2, 7>> nodes_;
};

/// RHS_m = sum over overlap pieces of sign * integral of u^n|K_l psi*_m.
std::vector<double> remap_rhs(const DGField& u_old, const std::vector<AdjointPoly>& psi_star,
                              const OverlapResult& overlaps);

struct PPStats {
  double theta_min = 1.0;
  int limited = 0;
  int clamped = 0;
};

/// Minimum over the element of its polynomial (vertices, edge critical
/// points, interior critical point).
double element_minimum(const DGField& field, int e);
/// Scales each cell's non-constant modes by theta = min(1, |(avg - eps) / (avg - min)|);
/// cells with avg < eps become constant.
PPStats apply_pp(DGField& field, double epsilon = 1e-15);

/// Troubled-cell detection (TVB minmod on edge midpoints against neighbour
/// averages) and an average-preserving WENO blend with neighbour polynomials
/// in flagged cells. Returns the number of flagged cells.
int apply_weno(DGField& field, double tvb_m = 1.0, std::vector<int>* flagged_ids = nullptr);
std::vector<int> weno_troubled_cells(const DGField& field, double tvb_m);

}  // namespace sldg
