#include "sldg/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sldg/errors.hpp"
#include "sldg/quadrature.hpp"

#ifndef SLDG_DATA_DIR
#define SLDG_DATA_DIR "data"
#endif

namespace sldg {

namespace {

constexpr double kPi = std::numbers::pi;

// Unit-square coordinates of the composite test (x = 2 pi (X - 1/2)).
Vec2 unit_square(double x, double y) { return {x / (2.0 * kPi) + 0.5, y / (2.0 * kPi) + 0.5}; }

double disk_part(Vec2 p) {
  const double r = distance(p, {0.5, 0.75});
  if (r > 0.15) return 0.0;
  if (std::abs(p.x - 0.5) < 0.025 && p.y < 0.85) return 0.0;
  return 1.0;
}

}  // namespace

double gaussian_hill(double x, double y) { return std::exp(-3.0 * x * x - 3.0 * y * y); }

double cosine_bell(double x, double y) {
  const double r0 = 0.45 * kPi;
  const double r = std::hypot(x - 0.45 * kPi, y);
  if (r >= r0) return 0.0;
  return r0 * std::pow(std::cos(r * kPi / (2.0 * r0)), 6);
}

double slotted_disk(double x, double y) { return disk_part(unit_square(x, y)); }

double slotted_composite(double x, double y) {
  const Vec2 p = unit_square(x, y);
  double v = disk_part(p);
  const double rc = distance(p, {0.5, 0.25}) / 0.15;
  if (rc <= 1.0) v += 1.0 - rc;
  const double rh = distance(p, {0.25, 0.5}) / 0.15;
  if (rh <= 1.0) v += 0.25 * (1.0 + std::cos(kPi * rh));
  return v;
}

const std::vector<ProblemDef>& problem_catalog() {
  static const std::vector<ProblemDef> catalog{
      {"rotation-gaussian", "rigid-rotation", "gaussian", 2.0 * kPi},
      {"rotation-slotted", "rigid-rotation", "slotted-composite", 2.0 * kPi},
      {"rotation-disk", "rigid-rotation", "slotted-disk", 2.0 * kPi},
      {"swirling-bell", "swirling", "cosine-bell", 1.5},
      {"swirling-gaussian", "swirling", "gaussian", 1.5},
      {"swirling-slotted", "swirling", "slotted-composite", 1.5},
      {"still-gaussian", "constant:a=0,b=0", "gaussian", 1.0},
  };
  return catalog;
}

const ProblemDef& find_problem(const std::string& name) {
  for (const auto& p : problem_catalog())
    if (p.name == name) return p;
  throw ParameterError("unknown problem '" + name + "'");
}

ScalarFunction initial_condition(const std::string& name) {
  if (name == "gaussian") return gaussian_hill;
  if (name == "cosine-bell") return cosine_bell;
  if (name == "slotted-composite") return slotted_composite;
  if (name == "slotted-disk") return slotted_disk;
  throw ParameterError("unknown initial condition '" + name + "'");
}

std::string mesh_directory() {
  if (const char* env = std::getenv("SLDG_MESH_DIR")) return env;
  return std::string(SLDG_DATA_DIR) + "/meshes";
}

std::vector<std::string> committed_meshes() {
  std::vector<std::pair<int, std::string>> found;
  const std::filesystem::path dir(mesh_directory());
  if (std::filesystem::is_directory(dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      const std::string stem = entry.path().stem().string();
      if (entry.path().extension() != ".msh" || stem.rfind("circle_", 0) != 0) continue;
      try {
        found.emplace_back(std::stoi(stem.substr(7)), entry.path().string());
      } catch (const std::exception&) {
      }
    }
  }
  std::sort(found.begin(), found.end());
  std::vector<std::string> out;
  for (auto& f : found) out.push_back(f.second);
  return out;
}

Mesh load_problem_mesh(const std::string& mesh_spec, double radius) {
  if (const auto at = mesh_spec.rfind("@r"); at != std::string::npos) {
    Mesh m = load_problem_mesh(mesh_spec.substr(0, at), radius);
    const int times = std::stoi(mesh_spec.substr(at + 2));
    for (int i = 0; i < times; ++i) m = refine_midpoint(m, radius);
    return m;
  }
  if (mesh_spec.rfind("circle:", 0) == 0) {
    const auto meshes = committed_meshes();
    int i = -1;
    try {
      i = std::stoi(mesh_spec.substr(7));
    } catch (const std::exception&) {
    }
    if (i < 0 || i >= static_cast<int>(meshes.size())) {
      throw ParameterError("no committed mesh '" + mesh_spec + "' in " + mesh_directory());
    }
    return load_mesh(meshes[i]);
  }
  return load_or_generate(mesh_spec, radius);
}

double compute_dt(const Mesh& mesh, const VelocityField& v, double cfl, double t) {
  if (!(cfl > 0.0)) throw ParameterError("compute_dt: cfl must be positive");
  const GaussRule& g = gauss_rule(2);
  double vmax = 0.0;
  for (const auto& e : mesh.elements()) {
    const auto c = mesh.corners(e.id);
    for (int i = 0; i < 3; ++i) {
      const Vec2 a = c[i], b = c[(i + 1) % 3];
      const Vec2 n = perp(b - a) / distance(a, b);
      for (double s : g.nodes) vmax = std::max(vmax, std::abs(dot(v(a + s * (b - a), t), n)));
    }
  }
  if (vmax == 0.0) return std::numeric_limits<double>::infinity();
  return cfl * mesh.r_min() / vmax;
}

RunResult run(const ProblemSpec& spec) {
  return run_on(spec, std::make_shared<const Mesh>(load_problem_mesh(spec.mesh, spec.radius)));
}

RunResult run_on(const ProblemSpec& spec, std::shared_ptr<const Mesh> mesh) {
  const auto wall0 = std::chrono::steady_clock::now();
  const ProblemDef& def = find_problem(spec.problem);
  const double t_final = spec.t_final.value_or(def.default_t_final);
  if (!(t_final > 0.0)) throw ParameterError("run: final time must be positive");
  std::string vel = def.velocity;
  if (vel == "swirling") {
    std::ostringstream s;
    s << std::setprecision(17) << "swirling:T=" << t_final;
    vel = s.str();
  }
  const auto velocity = make_velocity(vel);

  RunResult res;
  res.mesh = mesh;
  res.basis = std::make_shared<const BasisSet>(build_basis(*mesh, spec.degree));
  res.initial = std::make_shared<DGField>(project(initial_condition(def.initial), *mesh, *res.basis));
  res.final = std::make_shared<DGField>(*res.initial);
  // The starting state obeys the same bounds the limiter enforces after every step.
  if (spec.step.limiters.pp_enabled) apply_pp(*res.final, spec.step.limiters.pp_epsilon);
  res.elements = mesh->num_elements();
  res.r_max = mesh->r_max();
  res.mass_initial = total_mass(*res.initial);
  res.max_abs_initial = error_norms(*res.initial, [](double, double) { return 0.0; }).linf;

  const Remapper remapper(*mesh, *res.basis, spec.step);
  double dt = compute_dt(*mesh, *velocity, spec.cfl, 0.0);
  if (!std::isfinite(dt) || dt > t_final) dt = t_final;
  res.dt = dt;
  const int nsteps = std::max(1, static_cast<int>(std::ceil(t_final / dt - 1e-9)));

  std::ofstream mass_csv;
  const bool files = !spec.out_dir.empty();
  if (files) {
    std::filesystem::create_directories(spec.out_dir);
    mass_csv.open(spec.out_dir + "/mass.csv");
    mass_csv << "step,t,mass,dmass\n" << std::setprecision(17);
    mass_csv << 0 << ',' << 0.0 << ',' << res.mass_initial << ',' << 0.0 << '\n';
    write_field_dump(*res.final, spec.out_dir + "/field_0.txt");
  }

  DGField next(*res.initial);
  double t = 0.0;
  res.min_value = std::numeric_limits<double>::infinity();
  for (int n = 0; n < nsteps; ++n) {
    const double h = (n == nsteps - 1) ? t_final - t : dt;
    StepReport rep = remapper.step(*res.final, next, *velocity, t, h);
    rep.step = n + 1;
    t = (n == nsteps - 1) ? t_final : t + h;
    rep.t = t;
    std::swap(*res.final, next);
    const double rel = std::abs(rep.mass_after - rep.mass_before) / std::max(1.0, std::abs(rep.mass_before));
    res.max_step_rel_dmass = std::max(res.max_step_rel_dmass, rel);
    res.relaxed_elements += rep.relaxed_elements;
    res.max_outflow_fraction = std::max(res.max_outflow_fraction, rep.max_outflow_fraction);
    for (int e = 0; e < mesh->num_elements(); ++e)
      res.min_value = std::min(res.min_value, element_minimum(*res.final, e));
    if (spec.log) *spec.log << rep.log_line() << '\n';
    if (files) {
      mass_csv << rep.step << ',' << rep.t << ',' << rep.mass_after << ','
               << rep.mass_after - rep.mass_before << '\n';
      if ((spec.dump_every > 0 && rep.step % spec.dump_every == 0) || n == nsteps - 1) {
        write_field_dump(*res.final, spec.out_dir + "/field_" + std::to_string(rep.step) + ".txt");
      }
    }
    res.reports.push_back(rep);
  }
  res.steps = nsteps;
  res.mass_final = total_mass(*res.final);
  res.cumulative_rel_dmass =
      std::abs(res.mass_final - res.mass_initial) / std::max(1.0, std::abs(res.mass_initial));
  res.errors = error_norms(*res.final, *res.initial);
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();

  if (files) {
    std::ofstream err(spec.out_dir + "/errors.csv");
    err << "M,r_max,L1,L2,Linf,steps,dt\n" << std::setprecision(17);
    err << res.elements << ',' << res.r_max << ',' << res.errors.l1 << ',' << res.errors.l2 << ','
        << res.errors.linf << ',' << res.steps << ',' << res.dt << '\n';
    std::ofstream rep(spec.out_dir + "/report.txt");
    rep << std::setprecision(10);
    rep << "problem " << spec.problem << "\nvelocity " << velocity->name() << "\nmesh " << spec.mesh
        << "\nelements " << res.elements << "\nr_max " << res.r_max << "\ndegree " << spec.degree
        << "\ncfl " << spec.cfl << "\nt_final " << t_final << "\ndt " << res.dt << "\nsteps " << res.steps
        << "\nL1 " << res.errors.l1 << "\nL2 " << res.errors.l2 << "\nLinf " << res.errors.linf
        << "\nmass_initial " << std::setprecision(17) << res.mass_initial << "\nmass_final " << res.mass_final
        << std::setprecision(6) << "\nmax_step_rel_dmass " << res.max_step_rel_dmass
        << "\ncumulative_rel_dmass " << res.cumulative_rel_dmass << "\nmin_value " << res.min_value
        << "\nrelaxed_elements " << res.relaxed_elements << "\nmax_outflow_fraction "
        << res.max_outflow_fraction << "\nwall_seconds " << res.wall_seconds << '\n';
    for (const auto& r : res.reports) rep << r.log_line() << '\n';
  }
  return res;
}

std::vector<std::string> mesh_series(const std::string& first, int levels) {
  if (levels < 1) throw ParameterError("mesh_series: need at least one level");
  std::vector<std::string> out;
  for (const char* prefix : {"circle:", "level:"}) {
    if (first.rfind(prefix, 0) == 0) {
      const int start = std::stoi(first.substr(std::string(prefix).size()));
      for (int i = 0; i < levels; ++i) out.push_back(prefix + std::to_string(start + i));
      return out;
    }
  }
  for (int i = 0; i < levels; ++i) out.push_back(i == 0 ? first : first + "@r" + std::to_string(i));
  return out;
}

void fill_orders(std::vector<ConvergenceRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    auto& b = rows[i];
    const double lr = std::log(a.r_max / b.r_max);
    b.order_l1 = std::log(a.l1 / b.l1) / lr;
    b.order_l2 = std::log(a.l2 / b.l2) / lr;
    b.order_linf = std::log(a.linf / b.linf) / lr;
  }
}

std::vector<ConvergenceRow> converge_on(const ProblemSpec& spec, const std::vector<std::string>& meshes) {
  std::vector<ConvergenceRow> rows;
  for (const auto& m : meshes) {
    ProblemSpec s = spec;
    s.mesh = m;
    s.out_dir.clear();
    const RunResult r = run(s);
    ConvergenceRow row;
    row.elements = r.elements;
    row.r_max = r.r_max;
    row.l1 = r.errors.l1;
    row.l2 = r.errors.l2;
    row.linf = r.errors.linf;
    row.steps = r.steps;
    rows.push_back(row);
  }
  fill_orders(rows);
  return rows;
}

std::vector<ConvergenceRow> converge(const ProblemSpec& spec, int levels) {
  if (levels < 2) throw ParameterError("converge: need at least two levels");
  auto rows = converge_on(spec, mesh_series(spec.mesh, levels));
  if (!spec.out_dir.empty()) {
    std::filesystem::create_directories(spec.out_dir);
    write_convergence_csv(rows, spec.out_dir + "/errors.csv");
  }
  return rows;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << "M,r_max,L1,L1_order,L2,L2_order,Linf,Linf_order,steps\n" << std::setprecision(10);
  for (const auto& r : rows)
    f << r.elements << ',' << r.r_max << ',' << r.l1 << ',' << r.order_l1 << ',' << r.l2 << ','
      << r.order_l2 << ',' << r.linf << ',' << r.order_linf << ',' << r.steps << '\n';
}

std::vector<SweepRow> cfl_sweep(const ProblemSpec& spec, const std::vector<double>& cfls) {
  if (cfls.empty()) throw ParameterError("cfl_sweep: empty CFL list");
  std::vector<SweepRow> rows;
  const auto mesh = std::make_shared<const Mesh>(load_problem_mesh(spec.mesh, spec.radius));
  for (double cfl : cfls) {
    ProblemSpec s = spec;
    s.cfl = cfl;
    s.out_dir.clear();
    const RunResult r = run_on(s, mesh);
    SweepRow row;
    row.cfl = cfl;
    row.steps = r.steps;
    row.l1 = r.errors.l1;
    row.l2 = r.errors.l2;
    row.linf = r.errors.linf;
    row.max_abs = error_norms(*r.final, [](double, double) { return 0.0; }).linf;
    rows.push_back(row);
  }
  if (!spec.out_dir.empty()) {
    std::filesystem::create_directories(spec.out_dir);
    write_sweep_csv(rows, spec.out_dir + "/errors.csv");
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << "CFL,steps,L1,L2,Linf,max_abs\n" << std::setprecision(10);
  for (const auto& r : rows)
    f << r.cfl << ',' << r.steps << ',' << r.l1 << ',' << r.l2 << ',' << r.linf << ',' << r.max_abs << '\n';
}

}  // namespace sldg
