#pragma once

// Benchmark problems, CFL time stepping, convergence and CFL studies.

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sldg/dgcore.hpp"
#include "sldg/mesh.hpp"
#include "sldg/remap.hpp"
#include "sldg/transport.hpp"

namespace sldg {

double gaussian_hill(double x, double y);
/// r0 cos^6(r pi / (2 r0)) about (0.45 pi, 0), r0 = 0.45 pi.
double cosine_bell(double x, double y);
/// Slotted disk, cone and smooth hump (unit-square layout scaled to [-pi, pi]^2).
double slotted_composite(double x, double y);
double slotted_disk(double x, double y);

struct ProblemDef {
  std::string name;
  /// "rigid-rotation" or "swirling" (period = final time).
  std::string velocity;
  std::string initial;
  double default_t_final = 0.0;
};

/// rotation-gaussian, rotation-slotted, rotation-disk, swirling-bell, swirling-gaussian, swirling-slotted,
/// still-gaussian (zero velocity).
const std::vector<ProblemDef>& problem_catalog();
const ProblemDef& find_problem(const std::string& name);
ScalarFunction initial_condition(const std::string& name);

struct ProblemSpec {
  std::string problem = "rotation-gaussian";
  /// File path, "level:N" (fan generator) or "circle:i" (i-th committed mesh).
  std::string mesh = "circle:0";
  int degree = 2;
  double cfl = 10.0;
  std::optional<double> t_final;
  double radius = 3.14159265358979323846;
  StepOptions step;
  /// Output directory; empty disables files.
  std::string out_dir;
  /// Write field_<step>.txt every this many steps (0: first and last only).
  int dump_every = 0;
  /// Step log lines go here when set.
  std::ostream* log = nullptr;
};

/// Resolves the mesh part of a spec.
Mesh load_problem_mesh(const std::string& mesh_spec, double radius);
/// Directory holding the committed circle meshes (SLDG_MESH_DIR overrides).
std::string mesh_directory();
/// Committed circle meshes ordered by size.
std::vector<std::string> committed_meshes();

/// CFL * min r_j / max over faces of |V . n| at two Gauss points per face.
/// Infinite when the velocity vanishes on every face.
double compute_dt(const Mesh& mesh, const VelocityField& v, double cfl, double t);

struct RunResult {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const BasisSet> basis;
  std::shared_ptr<DGField> initial;
  std::shared_ptr<DGField> final;
  NormReport errors;  // final against the initial projection
  int elements = 0;
  double r_max = 0.0;
  double dt = 0.0;
  int steps = 0;
  double mass_initial = 0.0;
  double mass_final = 0.0;
  double max_step_rel_dmass = 0.0;
  double cumulative_rel_dmass = 0.0;
  /// Smallest point value (true polynomial minimum) over all steps.
  double min_value = 0.0;
  double max_abs_initial = 0.0;
  int relaxed_elements = 0;
  double max_outflow_fraction = 0.0;
  double wall_seconds = 0.0;
  std::vector<StepReport> reports;
};

RunResult run(const ProblemSpec& spec);
/// Runs on an already built mesh (shared so the result may keep it alive).
RunResult run_on(const ProblemSpec& spec, std::shared_ptr<const Mesh> mesh);

struct ConvergenceRow {
  int elements = 0;
  double r_max = 0.0;
  double l1 = 0.0, l2 = 0.0, linf = 0.0;
  double order_l1 = 0.0, order_l2 = 0.0, order_linf = 0.0;  // 0 on the first row
  int steps = 0;
};

/// Meshes for `levels` successive refinements starting from spec.mesh.
std::vector<std::string> mesh_series(const std::string& first, int levels);
std::vector<ConvergenceRow> converge(const ProblemSpec& spec, int levels);
std::vector<ConvergenceRow> converge_on(const ProblemSpec& spec, const std::vector<std::string>& meshes);
void fill_orders(std::vector<ConvergenceRow>& rows);
void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path);

struct SweepRow {
  double cfl = 0.0;
  int steps = 0;
  double l1 = 0.0, l2 = 0.0, linf = 0.0;
  double max_abs = 0.0;  // largest |u| at quadrature points of the final field
};

std::vector<SweepRow> cfl_sweep(const ProblemSpec& spec, const std::vector<double>& cfls);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace sldg
