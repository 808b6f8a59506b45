#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sldg/errors.hpp"
#include "sldg/harness.hpp"
#include "sldg_selftest/oracles.hpp"
#include "sldg_selftest/suites.hpp"

namespace {

struct RunFlags {
  std::string problem = "rotation-gaussian";
  std::string mesh = "circle:0";
  int degree = 2;
  double cfl = 10.0;
  double t_final = 0.0;
  bool weno = false;
  bool pp = false;
  bool relaxed = false;
  bool straight = false;
  double weno_m = 1.0;
  int threads = 1;
  std::string out;
  bool quiet = false;
};

void add_run_flags(CLI::App* app, RunFlags& f) {
  app->add_option("--problem", f.problem, "rotation-gaussian|rotation-slotted|rotation-disk|swirling-bell|"
                                          "swirling-gaussian|swirling-slotted");
  app->add_option("--mesh", f.mesh, "mesh file, level:N, circle:i, optionally suffixed @rK");
  app->add_option("--degree", f.degree)->check(CLI::IsMember({1, 2}));
  app->add_option("--cfl", f.cfl)->check(CLI::PositiveNumber);
  app->add_option("--tfinal", f.t_final, "final time (problem default when omitted)");
  app->add_flag("--weno", f.weno);
  app->add_option("--weno-m", f.weno_m, "TVB constant of the troubled-cell detector");
  app->add_flag("--pp", f.pp);
  app->add_flag("--relaxed", f.relaxed, "fall back to straight upstream elements when curved ones fail");
  app->add_flag("--straight", f.straight, "straight-sided upstream elements everywhere");
  app->add_option("--threads", f.threads)->check(CLI::PositiveNumber);
  app->add_option("--out", f.out, "output directory");
  app->add_flag("--quiet", f.quiet, "no per-step log");
}

sldg::ProblemSpec to_spec(const RunFlags& f) {
  sldg::ProblemSpec s;
  s.problem = f.problem;
  s.mesh = f.mesh;
  s.degree = f.degree;
  s.cfl = f.cfl;
  if (f.t_final > 0.0) s.t_final = f.t_final;
  s.step.limiters.weno_enabled = f.weno;
  s.step.limiters.weno_threshold = f.weno_m;
  s.step.limiters.pp_enabled = f.pp;
  s.step.relaxed = f.relaxed;
  s.step.straight_upstream = f.straight;
  s.step.threads = f.threads;
  s.out_dir = f.out;
  if (!f.quiet) s.log = &std::cerr;
  return s;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-Lagrangian DG transport on unstructured triangles"};
  app.require_subcommand(1);

  RunFlags run_flags, conv_flags, sweep_flags;
  int levels = 3;
  std::string cfls = "1,10,100";
  std::int64_t samples = 10'000'000;

  auto* run = app.add_subcommand("run", "one benchmark run");
  add_run_flags(run, run_flags);
  auto* conv = app.add_subcommand("converge", "convergence study over successive meshes");
  add_run_flags(conv, conv_flags);
  conv->add_option("--levels", levels)->check(CLI::Range(2, 8));
  auto* sweep = app.add_subcommand("cfl-sweep", "errors versus CFL on one mesh");
  add_run_flags(sweep, sweep_flags);
  sweep->add_option("--cfls", cfls, "comma-separated CFL numbers");
  auto* geom = app.add_subcommand("geom-selftest", "geometry and quadrature oracle suites");
  geom->add_option("--samples", samples, "Monte Carlo samples per cell");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto res = sldg::run(to_spec(run_flags));
      std::cout << std::setprecision(6) << "M=" << res.elements << " r_max=" << res.r_max << " steps=" << res.steps
                << " L1=" << res.errors.l1 << " L2=" << res.errors.l2 << " Linf=" << res.errors.linf
                << " dmass=" << res.cumulative_rel_dmass << " min=" << res.min_value << '\n';
    } else if (*conv) {
      const auto rows = sldg::converge(to_spec(conv_flags), levels);
      std::cout << "M,r_max,L1,L1_order,L2,L2_order,Linf,Linf_order,steps\n" << std::setprecision(6);
      for (const auto& r : rows)
        std::cout << r.elements << ',' << r.r_max << ',' << r.l1 << ',' << r.order_l1 << ',' << r.l2 << ','
                  << r.order_l2 << ',' << r.linf << ',' << r.order_linf << ',' << r.steps << '\n';
    } else if (*sweep) {
      const auto rows = sldg::cfl_sweep(to_spec(sweep_flags), parse_list(cfls));
      std::cout << "CFL,steps,L1,L2,Linf,max_abs\n" << std::setprecision(6);
      for (const auto& r : rows)
        std::cout << r.cfl << ',' << r.steps << ',' << r.l1 << ',' << r.l2 << ',' << r.linf << ',' << r.max_abs
                  << '\n';
    } else if (*geom) {
      sldg::oracle::SelftestOptions opt;
      opt.seed = sldg::oracle::seed_from_env(opt.seed);
      opt.mc_samples = samples;
      bool ok = true;
      for (const auto& r : sldg::oracle::run_all_suites(opt)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        ok = ok && r.passed;
      }
      return ok ? 0 : 1;
    }
  } catch (const sldg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
