#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "sldg/dgcore.hpp"
#include "sldg/errors.hpp"
#include "sldg/harness.hpp"
#include "sldg/quadrature.hpp"

using namespace sldg;

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec2 random_point_in(const std::array<Vec2, 3>& c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double s = u(rng), t = u(rng);
  if (s + t > 1.0) {
    s = 1.0 - s;
    t = 1.0 - t;
  }
  return c[0] + s * (c[1] - c[0]) + t * (c[2] - c[0]);
}

double quadratic(double x, double y) { return 1.0 + 2.0 * x - 3.0 * y + x * x + 0.5 * x * y - y * y; }

}  // namespace

TEST_CASE("basis is orthonormal on every element") {
  const Mesh m = load_problem_mesh("circle:0", kPi);
  for (int degree : {1, 2}) {
    const BasisSet b = build_basis(m, degree);
    const TriangleRule rule = collapsed_triangle_rule(6);
    double worst = 0.0;
    for (int e = 0; e < m.num_elements(); ++e) {
      const auto c = m.corners(e);
      const int n = b.size();
      std::vector<double> gram(n * n, 0.0);
      double phi[kMaxModes];
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const auto& l = rule.bary[q];
        const Vec2 p = l[0] * c[0] + l[1] * c[1] + l[2] * c[2];
        b.elements[e].eval_all(p, phi);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) gram[i * n + j] += rule.weights[q] * m.element(e).area * phi[i] * phi[j];
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(gram[i * n + j] - (i == j ? 1.0 : 0.0)));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("constant mode on the unit right triangle") {
  const ElementBasis b = build_element_basis({0, 0}, {1, 0}, {0, 1}, 2);
  double phi[kMaxModes];
  b.eval_all({0.2, 0.3}, phi);
  CHECK(phi[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  const ElementBasis moved = build_element_basis({5, -3}, {6, -3}, {5, -2}, 2);
  CHECK((moved.T - b.T).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK_THROWS_AS(build_element_basis({0, 0}, {1, 0}, {0, 1}, 3), ParameterError);
}

TEST_CASE("projection reproduces polynomials of the basis degree") {
  const Mesh m = load_problem_mesh("circle:0", kPi);
  const BasisSet b = build_basis(m, 2);
  const DGField f = project(quadratic, m, b);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(0, m.num_elements() - 1);
  for (int k = 0; k < 10; ++k) {
    const int e = pick(rng);
    const Vec2 p = random_point_in(m.corners(e), rng);
    CHECK(std::abs(evaluate(f, e, p) - quadratic(p.x, p.y)) <= 1e-12);
  }
  const DGField zero = project([](double, double) { return 0.0; }, m, b);
  for (double c : zero.data()) CHECK(c == 0.0);
}

TEST_CASE("projection error converges at order k + 1") {
  for (int degree : {1, 2}) {
    double prev_err = 0.0, prev_h = 0.0;
    for (int r = 0; r < 3; ++r) {
      const Mesh m = load_problem_mesh("circle:0@r" + std::to_string(r), kPi);
      const BasisSet b = build_basis(m, degree);
      const double err = error_norms(project(gaussian_hill, m, b), gaussian_hill).l2;
      if (r > 0) {
        const double order = std::log(prev_err / err) / std::log(prev_h / m.r_max());
        CHECK(order >= degree + 1 - 0.3);
      }
      prev_err = err;
      prev_h = m.r_max();
    }
  }
}

TEST_CASE("evaluation") {
  const Mesh m = parse_mesh("3 1\n0 0\n1 0\n0 1\n0 1 2\n");
  const BasisSet b = build_basis(m, 2);
  const DGField one = project([](double, double) { return 1.0; }, m, b);
  CHECK(evaluate(one, 0, {0.1, 0.1}) == doctest::Approx(1.0).epsilon(1e-13));
  const DGField lin = project([](double x, double y) { return x + y; }, m, b);
  CHECK(std::abs(evaluate(lin, 0, {1.0 / 3.0, 1.0 / 3.0}) - 2.0 / 3.0) <= 1e-13);
  CHECK(evaluate(lin, 0, {1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(evaluate(lin, 0, {1.0, 1.0}), ContainmentError);

  DGField sum = one;
  for (std::size_t i = 0; i < sum.data().size(); ++i) sum.data()[i] = 2.0 * one.data()[i] + 3.0 * lin.data()[i];
  CHECK(evaluate(sum, 0, {0.2, 0.5}) == doctest::Approx(2.0 + 3.0 * 0.7).epsilon(1e-13));
}

TEST_CASE("error norms") {
  const Mesh m = parse_mesh("3 1\n0 0\n1 0\n0 1\n0 1 2\n");
  const BasisSet b = build_basis(m, 2);
  const DGField zero = project([](double, double) { return 0.0; }, m, b);
  const auto r = error_norms(zero, [](double, double) { return 1.0; });
  CHECK(r.l1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.l2 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(r.linf == doctest::Approx(1.0).epsilon(1e-14));

  const DGField q = project(quadratic, m, b);
  const auto own = error_norms(q, quadratic);
  CHECK(own.l1 <= 1e-12);
  CHECK(own.l2 <= 1e-12);
  CHECK(error_norms(q, q).linf == 0.0);
}

TEST_CASE("total mass") {
  const Mesh m = load_problem_mesh("circle:2", kPi);
  const BasisSet b = build_basis(m, 2);
  CHECK(total_mass(project([](double, double) { return 1.0; }, m, b)) ==
        doctest::Approx(m.total_area()).epsilon(1e-13));
  CHECK(total_mass(project([](double, double) { return 0.0; }, m, b)) == 0.0);
  // Integral of exp(-3 r^2) over the disk of radius pi; the polygonal
  // boundary cuts off only values near exp(-3 pi^2).
  const double exact = kPi / 3.0 * (1.0 - std::exp(-3.0 * kPi * kPi));
  CHECK(std::abs(total_mass(project(gaussian_hill, m, b)) - exact) / exact <= 1e-8);
}

TEST_CASE("field dump round trip") {
  const Mesh m = load_problem_mesh("circle:0", kPi);
  const BasisSet b = build_basis(m, 2);
  const DGField f = project(gaussian_hill, m, b);
  std::filesystem::create_directories(SLDG_TEST_TMP);
  const std::string path = std::string(SLDG_TEST_TMP) + "/dump.txt";
  write_field_dump(f, path);
  const DGField g = read_field_dump(path, m, b);
  CHECK(g.data() == f.data());

  const BasisSet b1 = build_basis(m, 1);
  CHECK_THROWS_AS(read_field_dump(path, m, b1), ParseError);
}
