#include "sldg/remap.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "sldg/errors.hpp"
#include "sldg/parallel.hpp"
#include "sldg/quadrature.hpp"

namespace sldg {

std::vector<SignedRegion> signed_intersection(const std::vector<SignedPiece>& a,
                                              const std::vector<SignedPiece>& b) {
  std::vector<SignedRegion> out;
  for (const auto& pa : a) {
    for (const auto& pb : b) {
      if (!pa.region.bbox().intersects(pb.region.bbox())) continue;
      if (auto r = clip_convex(pa.region, pb.region)) out.push_back({std::move(*r), pa.sign * pb.sign});
    }
  }
  return out;
}

double signed_area(const std::vector<SignedRegion>& regions) {
  double s = 0.0;
  for (const auto& r : regions) s += r.sign * r.region.signed_area();
  return s;
}

OverlapResult find_overlaps(const UpstreamElement& up, const Mesh& mesh, const AuxGrid& grid) {
  OverlapResult res;
  res.upstream_area = up.signed_area();
  const BBox box = up.bbox.inflated(kSnapTol * up.bbox.diagonal());
  for (int l : grid.candidates_for_box(box)) {
    const Element& el = mesh.element(l);
    if (!el.bbox.intersects(box)) continue;
    if (mesh.is_boundary_element(l)) res.near_boundary = true;
    const auto c = mesh.corners(l);
    const std::vector<SignedPiece> tri{{ConvexRegion::triangle(c[0], c[1], c[2]), +1}};
    auto pieces = signed_intersection(up.pieces, tri);
    if (pieces.empty()) continue;
    OverlapRecord rec;
    rec.upstream = up.source;
    rec.background = l;
    rec.pieces = std::move(pieces);
    res.covered_area += rec.signed_area();
    res.records.push_back(std::move(rec));
  }
  const double tol = 1e-8 * std::abs(res.upstream_area);
  const double gap = res.covered_area - res.upstream_area;
  if ((!res.near_boundary && std::abs(gap) > tol) || (res.near_boundary && gap > tol)) {
    std::ostringstream msg;
    msg << "area closure violated for upstream of element " << up.source << ": covered "
        << std::setprecision(17) << res.covered_area << " vs " << res.upstream_area;
    throw RemapConsistencyError(msg.str());
  }
  return res;
}

std::vector<double> remap_rhs(const DGField& u_old, const std::vector<AdjointPoly>& psi_star,
                              const OverlapResult& overlaps) {
  const int n = static_cast<int>(psi_star.size());
  std::vector<double> rhs(n, 0.0);
  const int k = u_old.degree();
  const int deg = k + 2;
  for (const auto& rec : overlaps.records) {
    const ElementBasis& bl = u_old.basis().elements[rec.background];
    std::vector<double> moments(monomial_count(deg), 0.0);
    for (const auto& piece : rec.pieces) {
      const auto m = region_moments(piece.region.edges(), bl.center, bl.h, deg);
      for (std::size_t i = 0; i < m.size(); ++i) moments[i] += piece.sign * m[i];
    }
    const BivariatePoly ul = u_old.local_poly(rec.background);
    for (int mm = 0; mm < n; ++mm) {
      const BivariatePoly prod = ul * psi_star[mm].in_frame(bl.center, bl.h);
      const auto& c = prod.coeffs();
      double acc = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) acc += c[i] * moments[i];
      rhs[mm] += acc;
    }
  }
  return rhs;
}

std::string StepReport::log_line() const {
  std::ostringstream s;
  s << "step=" << step << " t=" << std::setprecision(12) << t << std::setprecision(17)
    << " mass=" << mass_after << " dmass=" << (mass_after - mass_before)
    << " theta_min=" << theta_min << " flagged=" << flagged;
  return s.str();
}

Remapper::Remapper(const Mesh& mesh, const BasisSet& basis, StepOptions options)
    : mesh_(&mesh), basis_(&basis), grid_(build_aux_grid(mesh)), options_(options) {
  const int ne = mesh.num_elements();
  nodes_.resize(ne);
  node_values_.resize(ne);
  for (int e = 0; e < ne; ++e) {
    nodes_[e] = eulerian_nodes(mesh, e);
    double phi[kMaxModes];
    for (int q = 0; q < 7; ++q) {
      basis.elements[e].eval_all(nodes_[e][q], phi);
      for (int m = 0; m < basis.size(); ++m) node_values_[e][m][q] = phi[m];
    }
  }
}

void Remapper::remap_element(const DGField& u_old, const VelocityField& v, double t, double dt,
                             int e, double* out, StepReport* report) const {
  const auto traced = trace_nodes(*mesh_, nodes_[e], v, t + dt, t, options_.trace);

  auto build = [&](bool straight) {
    UpstreamElement up = make_upstream(e, traced, straight);
    OverlapResult ov = find_overlaps(up, *mesh_, grid_);
    return std::make_pair(std::move(up), std::move(ov));
  };
  std::pair<UpstreamElement, OverlapResult> built;
  try {
    built = build(options_.straight_upstream);
  } catch (const Error& err) {
    if (!options_.relaxed || options_.straight_upstream) throw StepError(err.what(), e);
    try {
      built = build(true);
    } catch (const Error& err2) {
      throw StepError(err2.what(), e);
    }
    if (report) ++report->relaxed_elements;
  }
  const auto& [up, ov] = built;
  if (report && ov.upstream_area > 0.0) {
    report->max_outflow_fraction =
        std::max(report->max_outflow_fraction, (ov.upstream_area - ov.covered_area) / ov.upstream_area);
  }

  std::vector<AdjointPoly> psi_star;
  try {
    const AdjointFit fit(up);
    for (int m = 0; m < basis_->size(); ++m) psi_star.push_back(fit.fit(node_values_[e][m]));
  } catch (const Error& err) {
    throw StepError(err.what(), e);
  }
  const auto rhs = remap_rhs(u_old, psi_star, ov);
  std::copy(rhs.begin(), rhs.end(), out);
}

StepReport Remapper::step(const DGField& u_old, DGField& u_new, const VelocityField& v, double t,
                          double dt) const {
  const auto start = std::chrono::steady_clock::now();
  StepReport report;
  report.t = t + dt;
  report.mass_before = total_mass(u_old);
  const int ne = mesh_->num_elements();
  std::vector<StepReport> per(ne);
  parallel_for(ne, options_.threads,
               [&](int e) { remap_element(u_old, v, t, dt, e, u_new.coeffs(e), &per[e]); });
  for (const auto& r : per) {
    report.relaxed_elements += r.relaxed_elements;
    report.max_outflow_fraction = std::max(report.max_outflow_fraction, r.max_outflow_fraction);
  }
  const LimiterConfig& lim = options_.limiters;
  if (lim.weno_enabled) report.flagged = apply_weno(u_new, lim.weno_threshold);
  if (lim.pp_enabled) {
    const PPStats s = apply_pp(u_new, lim.pp_epsilon);
    report.theta_min = s.theta_min;
    report.pp_limited = s.limited;
    report.pp_clamped = s.clamped;
  }
  report.mass_after = total_mass(u_new);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------------------
// Positivity

double element_minimum(const DGField& field, int e) {
  const ElementBasis& eb = field.basis().elements[e];
  const BivariatePoly p = field.local_poly(e);
  const auto c = field.mesh().corners(e);
  const std::array<Vec2, 3> v{eb.local(c[0]), eb.local(c[1]), eb.local(c[2])};
  double vmin = std::min({p(v[0]), p(v[1]), p(v[2])});
  if (p.degree() < 2) return vmin;
  for (int i = 0; i < 3; ++i) {
    const Vec2 a = v[i], b = v[(i + 1) % 3];
    const double f0 = p(a), fm = p(0.5 * (a + b)), f1 = p(b);
    const double qa = 2.0 * f0 - 4.0 * fm + 2.0 * f1;
    const double qb = -3.0 * f0 + 4.0 * fm - f1;
    if (qa > 0.0) {
      const double s = -qb / (2.0 * qa);
      if (s > 0.0 && s < 1.0) vmin = std::min(vmin, p(a + s * (b - a)));
    }
  }
  const double c20 = p.coeff(2, 0), c11 = p.coeff(1, 1), c02 = p.coeff(0, 2);
  const double det = 4.0 * c20 * c02 - c11 * c11;
  if (det > 1e-14 * (c20 * c20 + c11 * c11 + c02 * c02)) {
    const double gx = -p.coeff(1, 0), gy = -p.coeff(0, 1);
    const Vec2 x{(2.0 * c02 * gx - c11 * gy) / det, (2.0 * c20 * gy - c11 * gx) / det};
    if (point_in_triangle(x, v[0], v[1], v[2])) vmin = std::min(vmin, p(x));
  }
  return vmin;
}

PPStats apply_pp(DGField& field, double epsilon) {
  if (!(epsilon > 0.0)) throw ParameterError("apply_pp: epsilon must be positive");
  PPStats stats;
  const int n = field.modes();
  for (int e = 0; e < field.num_elements(); ++e) {
    double* c = field.coeffs(e);
    const double avg = field.cell_average(e);
    if (avg < epsilon) {
      bool any = false;
      for (int m = 1; m < n; ++m) {
        any = any || c[m] != 0.0;
        c[m] = 0.0;
      }
      if (any) ++stats.clamped;
      continue;
    }
    const double vmin = element_minimum(field, e);
    if (vmin >= epsilon) continue;
    const double theta = std::min(1.0, std::abs((avg - epsilon) / (avg - vmin)));
    for (int m = 1; m < n; ++m) c[m] *= theta;
    stats.theta_min = std::min(stats.theta_min, theta);
    ++stats.limited;
  }
  return stats;
}

// ---------------------------------------------------------------------------
// WENO

namespace {

double minmod(double a, double b) {
  if (a > 0.0 && b > 0.0) return std::min(a, b);
  if (a < 0.0 && b < 0.0) return std::max(a, b);
  return 0.0;
}

// Smoothness indicator sum over 1 <= |alpha| <= k of |K|^(|alpha|-1) int (D^alpha p)^2,
// p given in the local frame of scale h.
double smoothness(const BivariatePoly& p, const std::vector<Vec2>& pts, const std::vector<double>& w,
                  double area, double h) {
  const BivariatePoly px = p.dx(), py = p.dy();
  double beta = 0.0;
  for (std::size_t q = 0; q < pts.size(); ++q) {
    const double gx = px(pts[q]) / h, gy = py(pts[q]) / h;
    beta += w[q] * (gx * gx + gy * gy);
  }
  if (p.degree() >= 2) {
    const double hh = h * h;
    const double dxx = 2.0 * p.coeff(2, 0) / hh, dxy = p.coeff(1, 1) / hh, dyy = 2.0 * p.coeff(0, 2) / hh;
    beta += area * area * (dxx * dxx + dxy * dxy + dyy * dyy);
  }
  return beta;
}

}  // namespace

std::vector<int> weno_troubled_cells(const DGField& field, double tvb_m) {
  const Mesh& mesh = field.mesh();
  std::vector<int> flagged;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.element(e);
    const auto c = mesh.corners(e);
    const double avg = field.cell_average(e);
    const double bound = tvb_m * el.diameter * el.diameter;
    bool trouble = false;
    for (int i = 0; i < 3 && !trouble; ++i) {
      const int nb = el.neighbor_ids[i];
      if (nb < 0) continue;
      const double du = field.eval_unchecked(e, 0.5 * (c[i] + c[(i + 1) % 3])) - avg;
      if (std::abs(du) <= bound) continue;
      const double jump = field.cell_average(nb) - avg;
      if (minmod(du, 1.5 * jump) != du) trouble = true;
    }
    if (trouble) flagged.push_back(e);
  }
  return flagged;
}

int apply_weno(DGField& field, double tvb_m, std::vector<int>* flagged_ids) {
  const auto flagged = weno_troubled_cells(field, tvb_m);
  if (flagged_ids) *flagged_ids = flagged;
  if (flagged.empty()) return 0;
  const DGField old = field;
  const Mesh& mesh = field.mesh();
  const TriangleRule& rule = triangle_rule_deg6();
  constexpr double kLinearNeighbor = 0.001;
  constexpr double kEps = 1e-6;

  for (int e : flagged) {
    const Element& el = mesh.element(e);
    const ElementBasis& b0 = field.basis().elements[e];
    const auto c = mesh.corners(e);
    std::vector<Vec2> global, local;
    std::vector<double> w;
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto& l = rule.bary[q];
      const Vec2 x = l[0] * c[0] + l[1] * c[1] + l[2] * c[2];
      global.push_back(x);
      local.push_back(b0.local(x));
      w.push_back(rule.weights[q] * el.area);
    }
    const double avg = old.cell_average(e);

    std::vector<BivariatePoly> polys{old.local_poly(e)};
    std::vector<double> gamma{1.0};
    for (int nb : el.neighbor_ids) {
      if (nb < 0) continue;
      const ElementBasis& bn = field.basis().elements[nb];
      BivariatePoly p = old.local_poly(nb).affine((b0.center - bn.center) / bn.h, b0.h / bn.h);
      double mean = 0.0;
      for (std::size_t q = 0; q < local.size(); ++q) mean += w[q] * p(local[q]);
      mean /= el.area;
      p.at(0, 0) += avg - mean;
      polys.push_back(std::move(p));
      gamma.push_back(kLinearNeighbor);
      gamma[0] -= kLinearNeighbor;
    }
    std::vector<double> omega(polys.size());
    double total = 0.0;
    for (std::size_t i = 0; i < polys.size(); ++i) {
      const double beta = smoothness(polys[i], local, w, el.area, b0.h);
      omega[i] = gamma[i] / ((kEps + beta) * (kEps + beta));
      total += omega[i];
    }
    BivariatePoly blend(field.degree());
    for (std::size_t i = 0; i < polys.size(); ++i) blend += (omega[i] / total) * polys[i];

    double* coeffs = field.coeffs(e);
    const double c0 = coeffs[0];
    double phi[kMaxModes];
    for (int m = 0; m < field.modes(); ++m) coeffs[m] = 0.0;
    for (std::size_t q = 0; q < local.size(); ++q) {
      b0.eval_all(global[q], phi);
      const double val = w[q] * blend(local[q]);
      for (int m = 0; m < field.modes(); ++m) coeffs[m] += val * phi[m];
    }
    coeffs[0] = c0;
  }
  return static_cast<int>(flagged.size());
}

}  // namespace sldg
