#pragma once

// Randomized checks of the geometry and quadrature kernels against the
// oracles. Each suite reports its worst-case metric and the threshold it
// was held to.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sldg/geometry.hpp"

namespace sldg::oracle {

struct SuiteResult {
  std::string name;
  bool passed = false;
  double metric = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Random CCW triangle with corners in [0, 1]^2 and minimum angle above ~5 degrees.
std::array<Vec2, 3> random_triangle(std::mt19937_64& rng);
/// Random valid six-node triangle of unit size: corners, then midsides 0-1, 1-2, 2-0.
std::array<Vec2, 6> random_tria6(std::mt19937_64& rng, double bulge = 0.15);
/// Random quadratic arc with visible curvature.
ParametricArc random_arc(std::mt19937_64& rng);

/// Clip area of random triangle pairs against Sutherland-Hodgman (absolute).
SuiteResult straight_clip_suite(std::mt19937_64& rng, int pairs = 1000, double tol = 1e-12);
/// Signed area of random six-node cells against Monte Carlo, in standard deviations.
SuiteResult tria6_area_suite(std::mt19937_64& rng, int cells = 100, std::int64_t samples = 10'000'000,
                             double sigmas = 4.0);
/// Residuals of arc/line and arc/arc intersections, plus missed crossings found by dense sampling.
SuiteResult intersection_suite(std::mt19937_64& rng, int trials = 2000, double tol = 1e-9);
/// Green's-theorem integrals of degree <= 4 polynomials over random curved
/// clip regions against slice-wise adaptive quadrature (relative).
SuiteResult green_suite(std::mt19937_64& rng, int regions = 100, double tol = 1e-10);

struct SelftestOptions {
  std::uint64_t seed = 20240601;
  std::int64_t mc_samples = 10'000'000;
  int mc_cells = 100;
};

/// All suites in order, each with its own generator seeded from options.seed.
std::vector<SuiteResult> run_all_suites(const SelftestOptions& options);

}  // namespace sldg::oracle
