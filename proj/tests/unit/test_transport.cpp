#include <doctest.h>

#include <cmath>
#include <random>

#include "sldg/errors.hpp"
#include "sldg/harness.hpp"
#include "sldg/transport.hpp"

using namespace sldg;

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec2 rotate(Vec2 p, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

BivariatePoly sample_p2() {
  BivariatePoly p(2);
  p.at(0, 0) = 0.3;
  p.at(1, 0) = -1.2;
  p.at(0, 1) = 0.7;
  p.at(2, 0) = 0.25;
  p.at(1, 1) = -0.4;
  p.at(0, 2) = 0.9;
  return p;
}

}  // namespace

TEST_CASE("backward trace") {
  const RigidRotation rot;
  const Vec2 q = trace_back({1, 0}, rot, kPi / 2.0, 0.0);
  CHECK(distance(q, {0, -1}) <= 1e-6);

  const ConstantVelocity still(0.0, 0.0);
  CHECK(trace_back({0.3, -0.2}, still, 1.0, 0.0) == Vec2{0.3, -0.2});

  const ConstantVelocity drift(0.5, -1.0);
  CHECK(distance(trace_back({0, 0}, drift, 2.0, 0.0), {-1.0, 2.0}) <= 1e-14);
}

TEST_CASE("trace error is fourth order in the substep") {
  const Swirling sw(1.5);
  TraceConfig fine;
  fine.substeps = 4096;
  fine.max_substep = 1.0;
  const Vec2 p{1.0, 0.5};
  const Vec2 ref = trace_back(p, sw, 0.75, 0.25, fine);
  double prev = 0.0;
  for (int n : {4, 8, 16}) {
    TraceConfig c;
    c.substeps = n;
    c.max_substep = 1.0;
    const double err = distance(trace_back(p, sw, 0.75, 0.25, c), ref);
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(16.0).epsilon(0.25));
    prev = err;
  }
}

TEST_CASE("velocity parsing") {
  CHECK(make_velocity("rigid-rotation")->name() == "rigid-rotation");
  const auto sw = make_velocity("swirling:T=1.5");
  const auto v = (*sw)({1.0, 0.5}, 0.0);
  const double g = kPi;
  CHECK(v.x == doctest::Approx(-std::pow(std::cos(0.5), 2) * std::sin(0.5) * g));
  CHECK(v.y == doctest::Approx(std::sin(1.0) * std::pow(std::cos(0.25), 2) * g));
  const auto c = make_velocity("constant:a=1.5,b=-2");
  CHECK((*c)({0, 0}, 0.0) == Vec2{1.5, -2.0});
  CHECK_THROWS_AS(make_velocity("vortex"), ParameterError);
  CHECK_THROWS_AS(make_velocity("swirling:T=abc"), ParameterError);
}

TEST_CASE("six-node shape functions") {
  for (int i = 0; i < 6; ++i) {
    const auto n = tria6_shape(kTria6RefNodes[i].x, kTria6RefNodes[i].y);
    for (int j = 0; j < 6; ++j) CHECK(std::abs(n[j] - (i == j ? 1.0 : 0.0)) <= 1e-14);
  }
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double xi = u(rng), eta = u(rng) * (1.0 - xi);
    const auto n = tria6_shape(xi, eta);
    double s = 0.0;
    for (double v : n) s += v;
    CHECK(std::abs(s - 1.0) <= 1e-14);
  }
}

TEST_CASE("upstream elements") {
  const Mesh m = load_problem_mesh("circle:0", kPi);
  const ConstantVelocity still(0.0, 0.0);
  const RigidRotation rot;
  const Swirling sw(1.5);
  for (int e = 0; e < m.num_elements(); e += 7) {
    const auto up = build_upstream(m, e, still, 1.0, 0.0);
    CHECK(up.pieces.size() == 1);
    for (const auto& a : up.edges) CHECK(a.is_straight());
    CHECK(up.signed_area() == doctest::Approx(m.element(e).area).epsilon(1e-14));

    const auto ur = build_upstream(m, e, rot, 1.0, 0.0);
    for (int i = 0; i < 3; ++i) {
      const Vec2 a = ur.nodes[i], b = ur.nodes[(i + 1) % 3], mid = ur.nodes[3 + i];
      CHECK(std::abs(cross(b - a, mid - a)) / distance(a, b) <= 1e-9);
    }

    const auto us = build_upstream(m, e, sw, 0.75, 0.25);
    for (int i = 0; i < 3; ++i) {
      const auto& arc = us.edges[i];
      CHECK(distance(arc.eval(0.0), us.nodes[i]) <= 1e-13);
      CHECK(distance(arc.eval(0.5), us.nodes[3 + i]) <= 1e-13);
      CHECK(distance(arc.eval(1.0), us.nodes[(i + 1) % 3]) <= 1e-13);
    }
    CHECK(us.signed_area() > 0.0);
  }
}

TEST_CASE("swirling upstream edges are visibly curved at large steps") {
  const Mesh m = load_problem_mesh("level:1", kPi);
  const Swirling sw(1.5);
  int curved = 0;
  for (int e = 0; e < m.num_elements(); ++e) {
    const auto up = build_upstream(m, e, sw, 0.75, 0.25);
    for (const auto& a : up.edges) curved += a.is_straight(1e-3) ? 0 : 1;
  }
  CHECK(curved > m.num_elements());
}

TEST_CASE("adjoint reconstruction") {
  const Mesh m = load_problem_mesh("circle:1", kPi);
  const BivariatePoly p = sample_p2();
  const auto psi = [&](Vec2 x) { return p(x); };
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> pick(0, m.num_elements() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  const ConstantVelocity drift(0.4, -0.3);
  const RigidRotation rot;
  TraceConfig tight;
  tight.max_substep = 1e-3;
  const double dt = 0.3;
  for (int k = 0; k < 20; ++k) {
    const int e = pick(rng);
    const auto eul = eulerian_nodes(m, e);

    const auto up_c = build_upstream(m, e, rot, dt, 0.0);
    const auto one = reconstruct_adjoint([](Vec2) { return 1.0; }, eul, up_c);
    for (const Vec2 x : up_c.nodes) CHECK(std::abs(one(x) - 1.0) <= 1e-13);

    const auto up_t = build_upstream(m, e, drift, dt, 0.0);
    const auto star_t = reconstruct_adjoint(psi, eul, up_t);
    const auto up_r = build_upstream(m, e, rot, dt, 0.0, tight);
    const auto star_r = reconstruct_adjoint(psi, eul, up_r);
    for (int q = 0; q < 5; ++q) {
      const Vec2 x = up_t.nodes[6] + 0.1 * Vec2{u(rng) - 0.5, u(rng) - 0.5};
      CHECK(std::abs(star_t(x) - p(x + dt * Vec2{0.4, -0.3})) <= 1e-12);
      const Vec2 y = up_r.nodes[6] + 0.1 * Vec2{u(rng) - 0.5, u(rng) - 0.5};
      CHECK(std::abs(star_r(y) - p(rotate(y, dt))) <= 1e-10);
    }
  }
}

TEST_CASE("upstream edge distance") {
  const Mesh m = load_problem_mesh("circle:0", kPi);
  const RigidRotation rot;
  const ConstantVelocity still(0.0, 0.0);
  for (int e = 0; e < m.num_elements(); e += 11) {
    CHECK(upstream_edge_distance(m, e, rot, 1.0, 0.0, 4) <= 1e-8);
    CHECK(upstream_edge_distance(m, e, still, 1.0, 0.0, 4) <= 1e-15);
  }
}

TEST_CASE("traced chords align with the Eulerian edges as the step shrinks") {
  const Mesh m = load_problem_mesh("circle:0", kPi);
  const Swirling sw(1.5);
  const int e = 40;
  const auto c = m.corners(e);
  double prev = 0.0;
  for (double dt : {0.02, 0.01, 0.005}) {
    const auto up = build_upstream(m, e, sw, 0.5 + dt, 0.5);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Vec2 d = c[(i + 1) % 3] - c[i], ds = up.nodes[(i + 1) % 3] - up.nodes[i];
      worst = std::max(worst, std::abs(std::atan2(cross(d, ds), dot(d, ds))));
    }
    if (prev > 0.0) CHECK(std::log2(prev / worst) >= 0.9);
    prev = worst;
  }
}
