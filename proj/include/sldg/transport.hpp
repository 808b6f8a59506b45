#pragma once

// Velocity fields, backward characteristic tracing, six-node curved
// upstream elements and the least-squares pullback of test functions.

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sldg/geometry.hpp"
#include "sldg/mesh.hpp"
#include "sldg/poly.hpp"

namespace sldg {

class VelocityField {
 public:
  virtual ~VelocityField() = default;
  virtual Vec2 operator()(Vec2 p, double t) const = 0;
  virtual std::string name() const = 0;
};

/// (a, b) = (-y, x).
class RigidRotation final : public VelocityField {
 public:
  Vec2 operator()(Vec2 p, double) const override { return {-p.y, p.x}; }
  std::string name() const override { return "rigid-rotation"; }
};

/// a = -cos^2(x/2) sin(y) g(t), b = sin(x) cos^2(y/2) g(t), g(t) = pi cos(pi t / T).
class Swirling final : public VelocityField {
 public:
  explicit Swirling(double period);
  Vec2 operator()(Vec2 p, double t) const override;
  std::string name() const override;
  double period() const { return period_; }

 private:
  double period_;
};

class ConstantVelocity final : public VelocityField {
 public:
  ConstantVelocity(double a, double b) : v_{a, b} {}
  Vec2 operator()(Vec2, double) const override { return v_; }
  std::string name() const override;

 private:
  Vec2 v_;
};

/// "rigid-rotation", "swirling:T=<r>", "constant:a=<r>,b=<r>".
/// Throws ParameterError for anything else.
std::unique_ptr<VelocityField> make_velocity(const std::string& spec);

struct TraceConfig {
  int rk_order = 4;  // only RK4 is implemented
  int substeps = 4;
  /// Upper bound on the RK4 step length in time units; the effective number
  /// of substeps is max(substeps, ceil(|t_end - t_start| / max_substep)).
  double max_substep = 0.02;
  /// Traced points closer than this times the mesh's smallest r_j to their
  /// starting point are put back on it, so slow regions reuse the Eulerian
  /// geometry exactly instead of producing sub-tolerance slivers.
  double snap_relative = 1e-9;
};

/// Solves dx/dt = V(x, t) from t_end back to t_start (t_start <= t_end) with RK4.
Vec2 trace_back(Vec2 p, const VelocityField& v, double t_end, double t_start,
                const TraceConfig& config = {});

/// trace_back of each Eulerian node with the snap of TraceConfig::snap_relative applied.
std::array<Vec2, 7> trace_nodes(const Mesh& mesh, const std::array<Vec2, 7>& nodes, const VelocityField& v,
                                double t_new, double t_old, const TraceConfig& config = {});

/// Reference nodes of the six-node triangle: corners (0,0), (1,0), (0,1),
/// then midsides of 1-2, 2-3, 3-1.
inline constexpr std::array<Vec2, 6> kTria6RefNodes{
    Vec2{0.0, 0.0}, Vec2{1.0, 0.0}, Vec2{0.0, 1.0}, Vec2{0.5, 0.0}, Vec2{0.5, 0.5}, Vec2{0.0, 0.5}};
std::array<double, 6> tria6_shape(double xi, double eta);
Vec2 tria6_map(std::span<const Vec2, 6> nodes, double xi, double eta);

struct UpstreamElement {
  int source = -1;
  /// Traced corners, traced midsides (0-1, 1-2, 2-0), traced barycenter.
  std::array<Vec2, 7> nodes;
  std::array<ParametricArc, 3> edges;
  std::vector<SignedPiece> pieces;
  BBox bbox;
  bool straight = false;

  double signed_area() const;
};

/// The seven Eulerian nodes of element e: corners, edge midpoints, centroid.
std::array<Vec2, 7> eulerian_nodes(const Mesh& mesh, int e);

/// Traces the seven nodes of element e from t_new back to t_old and builds
/// the curved upstream element. With straight = true the edges are the
/// chords of the traced corners (midsides are still traced for the fit).
/// Throws GeometryError when the traced boundary folds or self-intersects.
UpstreamElement build_upstream(const Mesh& mesh, int e, const VelocityField& v, double t_new,
                               double t_old, const TraceConfig& config = {}, bool straight = false);
/// Same from already traced nodes.
UpstreamElement make_upstream(int source, const std::array<Vec2, 7>& traced, bool straight = false);

/// P2 polynomial in the coordinates (x - origin) / scale.
struct AdjointPoly {
  BivariatePoly poly{2};
  Vec2 origin;
  double scale = 1.0;

  double operator()(Vec2 p) const { return poly((p - origin) / scale); }
  /// The same polynomial in the coordinates (x - new_origin) / new_scale.
  BivariatePoly in_frame(Vec2 new_origin, double new_scale) const {
    return poly.affine((new_origin - origin) / scale, new_scale / scale);
  }
};

/// Least-squares fit over P2 of values given at the seven traced nodes.
/// The normal equations are factored once and reused for every right-hand side.
class AdjointFit {
 public:
  /// Throws ConditioningError when the traced nodes do not determine a P2 fit.
  explicit AdjointFit(const UpstreamElement& up);
  AdjointPoly fit(std::span<const double, 7> values) const;

 private:
  Vec2 origin_;
  double scale_ = 1.0;
  Eigen::Matrix<double, 7, 6> A_;
  Eigen::LDLT<Eigen::Matrix<double, 6, 6>> ldlt_;
};

/// psi* for the test polynomial psi given on element e (a function of global
/// coordinates): fits psi's values at the Eulerian nodes to the traced nodes.
AdjointPoly reconstruct_adjoint(const std::function<double(Vec2)>& psi,
                                const std::array<Vec2, 7>& eulerian, const UpstreamElement& up);

/// Mean distance between the traced images of `samples` points per Eulerian
/// edge and the corresponding points of the fitted arcs.
double upstream_edge_distance(const Mesh& mesh, int e, const VelocityField& v, double t_new,
                              double t_old, int samples, const TraceConfig& config = {});

}  // namespace sldg
