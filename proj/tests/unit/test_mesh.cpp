#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "sldg/errors.hpp"
#include "sldg/geometry.hpp"
#include "sldg/harness.hpp"
#include "sldg/mesh.hpp"

using namespace sldg;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("single triangle") {
  const Mesh m = parse_mesh("3 1\n0 0\n1 0\n0 1\n0 1 2\n");
  CHECK(m.num_elements() == 1);
  CHECK(m.element(0).area == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.boundary_edges().size() == 3);
  CHECK(m.interior_edge_count() == 0);
  CHECK(m.is_boundary_element(0));
}

TEST_CASE("clockwise input is reoriented") {
  const Mesh m = parse_mesh("3 1\n0 0\n1 0\n0 1\n0 2 1\n");
  CHECK(m.element(0).area == doctest::Approx(0.5));
  const auto c = m.corners(0);
  CHECK(orient2d(c[0], c[1], c[2]) > 0.0);
}

TEST_CASE("two triangles share one edge") {
  const Mesh m = parse_mesh("4 2\n0 0\n1 0\n1 1\n0 1\n0 1 2\n0 2 3\n");
  CHECK(m.interior_edge_count() == 1);
  CHECK(m.boundary_edges().size() == 4);
  const auto& n0 = m.element(0).neighbor_ids;
  const auto& n1 = m.element(1).neighbor_ids;
  CHECK(std::count(n0.begin(), n0.end(), 1) == 1);
  CHECK(std::count(n1.begin(), n1.end(), 0) == 1);
  CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("parse errors carry the line number") {
  try {
    parse_mesh("3 1\n0 0\n1 zero\n0 1\n0 1 2\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_mesh("3 1\n0 0\n1 0\n0 1\n0 1 7\n"), ParseError);
  CHECK_THROWS_AS(parse_mesh("3 1\n0 0\n1 0\n0 1\n"), ParseError);
}

TEST_CASE("non-manifold edge is rejected") {
  CHECK_THROWS_AS(parse_mesh("5 3\n0 0\n1 0\n0 1\n0 -1\n1 1\n0 1 2\n1 0 3\n0 1 4\n"), TopologyError);
}

TEST_CASE("element metrics") {
  const auto m = element_metrics({0, 0}, {1, 0}, {0, 1});
  CHECK(m.area == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.perimeter == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-15));
  CHECK(m.r == doctest::Approx(1.0 / (2.0 + std::sqrt(2.0))).epsilon(1e-15));

  const auto eq = element_metrics({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0});
  CHECK(eq.r == doctest::Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-14));

  const auto scaled = element_metrics({0, 0}, {3, 0}, {0, 3});
  CHECK(scaled.r == doctest::Approx(3.0 * m.r).epsilon(1e-14));
  const auto flipped = element_metrics({0, 0}, {0, 1}, {1, 0});
  CHECK(flipped.area == doctest::Approx(m.area));

  CHECK_THROWS_AS(element_metrics({0, 0}, {1, 1}, {2, 2}), DegenerateError);
}

TEST_CASE("midpoint refinement counts") {
  const Mesh one = parse_mesh("3 1\n0 0\n1 0\n0 1\n0 1 2\n");
  const Mesh r1 = refine_midpoint(one);
  CHECK(r1.num_elements() == 4);
  CHECK(r1.vertices().size() == 6);
  CHECK(r1.total_area() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(refine_midpoint(r1).num_elements() == 16);
}

TEST_CASE("snapped refinement of a circle mesh halves r_max") {
  Mesh m = load_problem_mesh("circle:0", kPi);
  double r_prev = m.r_max();
  for (int level = 0; level < 2; ++level) {
    const int n_prev = m.num_elements();
    m = refine_midpoint(m, kPi);
    CHECK(m.num_elements() == 4 * n_prev);
    CHECK(m.r_max() / r_prev == doctest::Approx(0.5).epsilon(0.05));
    r_prev = m.r_max();
  }
  for (const auto& [e, i] : m.boundary_edges()) {
    const auto c = m.corners(e);
    CHECK(norm(c[i]) == doctest::Approx(kPi).epsilon(1e-12));
  }
}

TEST_CASE("fan mesh") {
  const Mesh m = circle_fan_mesh(2, kPi);
  CHECK(m.num_elements() == 6 * 16);
  CHECK(m.total_area() < kPi * kPi * kPi);
  CHECK(m.total_area() > 0.9 * kPi * kPi * kPi);
}

TEST_CASE("aux grid") {
  const Mesh one = parse_mesh("3 1\n0 0\n1 0\n0 1\n0 1 2\n");
  const AuxGrid g1 = build_aux_grid(one, 10.0);
  CHECK(g1.nx * g1.ny == 1);
  CHECK(g1.bins[0] == std::vector<int>{0});

  const AuxGrid g4 = build_aux_grid(one, 0.5);
  int hits = 0;
  for (const auto& b : g4.bins) hits += static_cast<int>(b.size());
  CHECK(hits == static_cast<int>(g4.bins.size()));
  CHECK_THROWS_AS(build_aux_grid(one, 0.0), ParameterError);

  const Mesh m = load_problem_mesh("circle:0", kPi);
  const AuxGrid g = build_aux_grid(m);

  BBox far;
  far.expand({100.0, 100.0});
  far.expand({101.0, 101.0});
  CHECK(g.candidates_for_box(far).empty());
  CHECK(static_cast<int>(g.candidates_for_box(m.bbox()).size()) == m.num_elements());

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.2, 3.2);
  for (int k = 0; k < 1000; ++k) {
    const Vec2 p{u(rng), u(rng)};
    BBox box;
    box.expand(p);
    const auto cand = g.candidates_for_box(box);
    CHECK(std::is_sorted(cand.begin(), cand.end()));
    CHECK(std::adjacent_find(cand.begin(), cand.end()) == cand.end());
    for (int e = 0; e < m.num_elements(); ++e) {
      const auto c = m.corners(e);
      if (point_in_triangle(p, c[0], c[1], c[2])) {
        CHECK(std::binary_search(cand.begin(), cand.end(), e));
      }
    }
  }
}

TEST_CASE("aux grid candidates cover every overlapping element") {
  const Mesh m = load_problem_mesh("circle:0", kPi);
  const AuxGrid g = build_aux_grid(m);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.5, 2.5), s(0.05, 0.6);
  for (int k = 0; k < 200; ++k) {
    const Vec2 a{u(rng), u(rng)};
    const Vec2 b = a + Vec2{s(rng), 0.1 * s(rng)};
    const Vec2 c = a + Vec2{0.1 * s(rng), s(rng)};
    const auto tri = ConvexRegion::triangle(a, b, c);
    const auto cand = g.candidates_for_box(tri.bbox());
    for (int e = 0; e < m.num_elements(); ++e) {
      const auto cc = m.corners(e);
      if (clip_convex(tri, ConvexRegion::triangle(cc[0], cc[1], cc[2]))) {
        CHECK(std::binary_search(cand.begin(), cand.end(), e));
      }
    }
  }
}
