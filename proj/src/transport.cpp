#include "sldg/transport.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "sldg/errors.hpp"

namespace sldg {

Swirling::Swirling(double period) : period_(period) {
  if (!(period > 0.0)) throw ParameterError("swirling: period must be positive");
}

Vec2 Swirling::operator()(Vec2 p, double t) const {
  const double g = std::numbers::pi * std::cos(std::numbers::pi * t / period_);
  const double cx = std::cos(0.5 * p.x), cy = std::cos(0.5 * p.y);
  return {-cx * cx * std::sin(p.y) * g, std::sin(p.x) * cy * cy * g};
}

std::string Swirling::name() const {
  std::ostringstream s;
  s << "swirling:T=" << period_;
  return s.str();
}

std::string ConstantVelocity::name() const {
  std::ostringstream s;
  s << "constant:a=" << v_.x << ",b=" << v_.y;
  return s.str();
}

namespace {

double parse_number(const std::string& text, const std::string& spec) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ParameterError("bad number in velocity spec '" + spec + "'");
  return v;
}

}  // namespace

std::unique_ptr<VelocityField> make_velocity(const std::string& spec) {
  if (spec == "rigid-rotation") return std::make_unique<RigidRotation>();
  if (spec.rfind("swirling:T=", 0) == 0) {
    return std::make_unique<Swirling>(parse_number(spec.substr(11), spec));
  }
  if (spec.rfind("constant:a=", 0) == 0) {
    const std::string rest = spec.substr(11);
    const auto comma = rest.find(",b=");
    if (comma == std::string::npos) throw ParameterError("bad velocity spec '" + spec + "'");
    return std::make_unique<ConstantVelocity>(parse_number(rest.substr(0, comma), spec),
                                              parse_number(rest.substr(comma + 3), spec));
  }
  throw ParameterError("unknown velocity field '" + spec + "'");
}

Vec2 trace_back(Vec2 p, const VelocityField& v, double t_end, double t_start, const TraceConfig& config) {
  if (config.rk_order != 4) throw ParameterError("trace_back: only RK4 is implemented");
  if (config.substeps < 1) throw ParameterError("trace_back: substeps must be >= 1");
  if (t_start > t_end) throw ParameterError("trace_back: t_start must not exceed t_end");
  const double span = t_end - t_start;
  if (span == 0.0) return p;
  int n = config.substeps;
  if (config.max_substep > 0.0) n = std::max(n, static_cast<int>(std::ceil(span / config.max_substep)));
  const double h = -span / n;
  double t = t_end;
  for (int i = 0; i < n; ++i) {
    const Vec2 k1 = v(p, t);
    const Vec2 k2 = v(p + 0.5 * h * k1, t + 0.5 * h);
    const Vec2 k3 = v(p + 0.5 * h * k2, t + 0.5 * h);
    const Vec2 k4 = v(p + h * k3, t + h);
    p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = t_end + (i + 1) * h;
  }
  return p;
}

std::array<double, 6> tria6_shape(double xi, double eta) {
  return {1.0 - 3.0 * xi - 3.0 * eta + 2.0 * xi * xi + 2.0 * eta * eta + 4.0 * xi * eta,
          2.0 * xi * xi - xi,
          2.0 * eta * eta - eta,
          4.0 * xi - 4.0 * xi * eta - 4.0 * xi * xi,
          4.0 * xi * eta,
          4.0 * eta - 4.0 * xi * eta - 4.0 * eta * eta};
}

Vec2 tria6_map(std::span<const Vec2, 6> nodes, double xi, double eta) {
  const auto n = tria6_shape(xi, eta);
  Vec2 p;
  for (int i = 0; i < 6; ++i) p += n[i] * nodes[i];
  return p;
}

double UpstreamElement::signed_area() const {
  double a = 0.0;
  for (const auto& pc : pieces) a += pc.sign * pc.region.signed_area();
  return a;
}

std::array<Vec2, 7> eulerian_nodes(const Mesh& mesh, int e) {
  const auto c = mesh.corners(e);
  return {c[0], c[1], c[2], 0.5 * (c[0] + c[1]), 0.5 * (c[1] + c[2]), 0.5 * (c[2] + c[0]),
          (c[0] + c[1] + c[2]) / 3.0};
}

UpstreamElement make_upstream(int source, const std::array<Vec2, 7>& traced, bool straight) {
  UpstreamElement up;
  up.source = source;
  up.nodes = traced;
  up.straight = straight;
  std::array<Vec2, 6> six{};
  for (int i = 0; i < 3; ++i) {
    six[i] = traced[i];
    six[3 + i] = straight ? 0.5 * (traced[i] + traced[(i + 1) % 3]) : traced[3 + i];
  }
  for (int i = 0; i < 3; ++i) {
    try {
      up.edges[i] = arc_through_3_points(six[i], six[3 + i], six[(i + 1) % 3]);
    } catch (const DegenerateError&) {
      throw GeometryError("upstream element collapsed");
    }
  }
  up.pieces = convex_partition_tria6(std::span<const Vec2, 6>(six));
  for (const auto& pc : up.pieces) up.bbox.expand(pc.region.bbox());
  return up;
}

UpstreamElement build_upstream(const Mesh& mesh, int e, const VelocityField& v, double t_new,
                               double t_old, const TraceConfig& config, bool straight) {
  return make_upstream(e, trace_nodes(mesh, eulerian_nodes(mesh, e), v, t_new, t_old, config), straight);
}

std::array<Vec2, 7> trace_nodes(const Mesh& mesh, const std::array<Vec2, 7>& nodes, const VelocityField& v,
                                double t_new, double t_old, const TraceConfig& config) {
  const double snap = config.snap_relative * mesh.r_min();
  std::array<Vec2, 7> traced{};
  for (int i = 0; i < 7; ++i) {
    traced[i] = trace_back(nodes[i], v, t_new, t_old, config);
    if (distance(traced[i], nodes[i]) <= snap) traced[i] = nodes[i];
  }
  return traced;
}

AdjointFit::AdjointFit(const UpstreamElement& up) {
  origin_ = up.nodes[6];
  double h = 0.0;
  for (int i = 0; i < 6; ++i) h = std::max(h, distance(up.nodes[i], origin_));
  if (!(h > 0.0)) throw ConditioningError("adjoint fit: collapsed upstream nodes");
  scale_ = h;
  for (int q = 0; q < 7; ++q) {
    const Vec2 x = (up.nodes[q] - origin_) / scale_;
    A_.row(q) << 1.0, x.x, x.y, x.x * x.x, x.x * x.y, x.y * x.y;
  }
  const Eigen::Matrix<double, 6, 6> N = A_.transpose() * A_;
  ldlt_.compute(N);
  if (ldlt_.info() != Eigen::Success || !(ldlt_.rcond() > 1e-12)) {
    throw ConditioningError("adjoint fit: rank-deficient normal equations");
  }
}

AdjointPoly AdjointFit::fit(std::span<const double, 7> values) const {
  Eigen::Matrix<double, 7, 1> b;
  for (int q = 0; q < 7; ++q) b[q] = values[q];
  const Eigen::Matrix<double, 6, 1> c = ldlt_.solve(A_.transpose() * b);
  AdjointPoly r;
  r.origin = origin_;
  r.scale = scale_;
  r.poly.at(0, 0) = c[0];
  r.poly.at(1, 0) = c[1];
  r.poly.at(0, 1) = c[2];
  r.poly.at(2, 0) = c[3];
  r.poly.at(1, 1) = c[4];
  r.poly.at(0, 2) = c[5];
  return r;
}

AdjointPoly reconstruct_adjoint(const std::function<double(Vec2)>& psi,
                                const std::array<Vec2, 7>& eulerian, const UpstreamElement& up) {
  std::array<double, 7> values{};
  for (int q = 0; q < 7; ++q) values[q] = psi(eulerian[q]);
  return AdjointFit(up).fit(values);
}

double upstream_edge_distance(const Mesh& mesh, int e, const VelocityField& v, double t_new,
                              double t_old, int samples, const TraceConfig& config) {
  if (samples < 1) throw ParameterError("upstream_edge_distance: samples must be >= 1");
  const UpstreamElement up = build_upstream(mesh, e, v, t_new, t_old, config);
  const auto c = mesh.corners(e);
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Vec2 a = c[i], b = c[(i + 1) % 3];
    for (int s = 0; s < samples; ++s) {
      const double th = (s + 0.5) / samples;
      const Vec2 exact = trace_back(a + th * (b - a), v, t_new, t_old, config);
      acc += distance(exact, up.edges[i].eval(th));
    }
  }
  return acc / (3.0 * samples);
}

}  // namespace sldg
