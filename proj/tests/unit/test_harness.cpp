#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sldg/errors.hpp"
#include "sldg/harness.hpp"

using namespace sldg;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string first_line(const std::string& path) {
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  return line;
}

std::string tmp(const std::string& name) { return std::string(SLDG_TEST_TMP) + "/" + name; }

}  // namespace

TEST_CASE("time step") {
  const Mesh m = load_problem_mesh("circle:0", kPi);
  const RigidRotation rot;
  const double dt1 = compute_dt(m, rot, 1.0, 0.0);
  CHECK(compute_dt(m, rot, 10.0, 0.0) == doctest::Approx(10.0 * dt1).epsilon(1e-14));
  CHECK(compute_dt(m, ConstantVelocity(2.0, 0.0), 1.0, 0.0) ==
        doctest::Approx(0.5 * compute_dt(m, ConstantVelocity(1.0, 0.0), 1.0, 0.0)).epsilon(1e-14));
  CHECK(std::isinf(compute_dt(m, ConstantVelocity(0.0, 0.0), 1.0, 0.0)));
  CHECK_THROWS_AS(compute_dt(m, rot, 0.0, 0.0), ParameterError);

  ProblemSpec s;
  s.mesh = "circle:0";
  s.t_final = 1.0;
  s.cfl = 1.0;
  const int n1 = run(s).steps;
  s.cfl = 10.0;
  const int n10 = run(s).steps;
  CHECK(std::abs(n1 - 10 * n10) <= 10);
}

TEST_CASE("zero velocity run is a single identity step") {
  ProblemSpec s;
  s.problem = "still-gaussian";
  s.mesh = "circle:0";
  const auto r = run(s);
  CHECK(r.steps == 1);
  CHECK(r.errors.linf <= 1e-13);
  CHECK(r.cumulative_rel_dmass <= 1e-14);
}

TEST_CASE("unknown names are rejected") {
  ProblemSpec s;
  s.problem = "nope";
  CHECK_THROWS_AS(run(s), ParameterError);
  CHECK_THROWS_AS(load_problem_mesh("circle:99", kPi), ParameterError);
  CHECK_THROWS_AS(initial_condition("nope"), ParameterError);
}

TEST_CASE("initial conditions") {
  CHECK(gaussian_hill(0.0, 0.0) == 1.0);
  CHECK(gaussian_hill(1.0, 0.0) == doctest::Approx(std::exp(-3.0)));
  CHECK(cosine_bell(0.45 * kPi, 0.0) == doctest::Approx(0.45 * kPi));
  CHECK(cosine_bell(0.45 * kPi + 0.45 * kPi, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cosine_bell(-2.0, 0.0) == 0.0);
  for (double x : {-3.0, -1.0, 0.0, 1.0, 3.0})
    for (double y : {-3.0, 0.0, 2.0}) {
      const double v = slotted_composite(x, y);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
}

TEST_CASE("output files") {
  const std::string dir = tmp("run_out");
  std::filesystem::remove_all(dir);
  ProblemSpec s;
  s.mesh = "circle:0";
  s.t_final = 0.5;
  s.out_dir = dir;
  const auto r = run(s);
  CHECK(first_line(dir + "/errors.csv") == "M,r_max,L1,L2,Linf,steps,dt");
  CHECK(first_line(dir + "/mass.csv") == "step,t,mass,dmass");
  CHECK(std::filesystem::exists(dir + "/field_0.txt"));
  CHECK(std::filesystem::exists(dir + "/field_" + std::to_string(r.steps) + ".txt"));
  const DGField back = read_field_dump(dir + "/field_" + std::to_string(r.steps) + ".txt", *r.mesh, *r.basis);
  CHECK(back.data() == r.final->data());

  std::ifstream mass(dir + "/mass.csv");
  std::string line;
  int lines = 0;
  while (std::getline(mass, line)) ++lines;
  CHECK(lines == r.steps + 2);
}

TEST_CASE("runs are deterministic") {
  ProblemSpec s;
  s.mesh = "circle:0";
  s.t_final = 1.0;
  s.out_dir = tmp("det_a");
  run(s);
  s.out_dir = tmp("det_b");
  run(s);
  CHECK(slurp(tmp("det_a") + "/errors.csv") == slurp(tmp("det_b") + "/errors.csv"));
  CHECK(slurp(tmp("det_a") + "/mass.csv") == slurp(tmp("det_b") + "/mass.csv"));
}

TEST_CASE("convergence bookkeeping") {
  std::vector<ConvergenceRow> rows(3);
  for (int i = 0; i < 3; ++i) {
    rows[i].r_max = std::pow(0.5, i);
    rows[i].l1 = std::pow(rows[i].r_max, 3);
    rows[i].l2 = std::pow(rows[i].r_max, 2);
    rows[i].linf = 1.0;
  }
  fill_orders(rows);
  CHECK(rows[0].order_l1 == 0.0);
  CHECK(rows[2].order_l1 == doctest::Approx(3.0));
  CHECK(rows[2].order_l2 == doctest::Approx(2.0));
  CHECK(rows[1].order_linf == doctest::Approx(0.0));
  write_convergence_csv(rows, tmp("conv.csv"));
  CHECK(first_line(tmp("conv.csv")) == "M,r_max,L1,L1_order,L2,L2_order,Linf,Linf_order,steps");

  const auto series = mesh_series("circle:0", 3);
  REQUIRE(series.size() == 3);
  CHECK(load_problem_mesh(series[1], kPi).num_elements() > load_problem_mesh(series[0], kPi).num_elements());
}

TEST_CASE("large steps complete") {
  ProblemSpec s;
  s.problem = "swirling-bell";
  s.mesh = "circle:0";
  s.t_final = 1.0;
  s.step.relaxed = true;
  const auto rows = cfl_sweep(s, {200.0});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].steps == 1);
  CHECK(std::isfinite(rows[0].linf));
}

TEST_CASE("positivity on the slotted disk") {
  ProblemSpec s;
  s.problem = "rotation-disk";
  s.mesh = "circle:1";
  s.step.limiters.pp_enabled = false;
  const auto off = run(s);
  CHECK(off.min_value < -1e-3);
  s.step.limiters.pp_enabled = true;
  const auto on = run(s);
  CHECK(on.min_value >= -1e-14);
}

TEST_CASE("weno keeps slotted disk averages in range over ten revolutions") {
  ProblemSpec s;
  s.problem = "rotation-disk";
  s.mesh = "circle:1";
  s.t_final = 20.0 * kPi;
  s.step.limiters.weno_enabled = true;
  // Discontinuous data: a TVB constant well below the smooth-data default.
  s.step.limiters.weno_threshold = 0.01;
  const auto r = run(s);
  double lo = 1.0, hi = 0.0;
  for (int e = 0; e < r.final->num_elements(); ++e) {
    lo = std::min(lo, r.final->cell_average(e));
    hi = std::max(hi, r.final->cell_average(e));
  }
  CHECK(lo >= -0.05);
  CHECK(hi <= 1.05);
}
