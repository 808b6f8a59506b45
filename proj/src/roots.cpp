#include "sldg/roots.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace sldg {

double polyval(std::span<const double> coeffs, double t) {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * t + *it;
  return v;
}

namespace {

double polyderiv(std::span<const double> coeffs, double t) {
  double v = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 1;) v = v * t + static_cast<double>(i) * coeffs[i];
  return v;
}

// Sum |c_i| |t|^i, the natural scale of the round-off in polyval.
double polyscale(std::span<const double> coeffs, double t) {
  double v = 0.0;
  const double at = std::abs(t);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * at + std::abs(*it);
  return v;
}

double polish(std::span<const double> coeffs, double t) {
  for (int iter = 0; iter < 3; ++iter) {
    const double f = polyval(coeffs, t);
    const double df = polyderiv(coeffs, t);
    if (df == 0.0 || !std::isfinite(df)) break;
    const double next = t - f / df;
    if (!std::isfinite(next) || std::abs(polyval(coeffs, next)) >= std::abs(f)) break;
    t = next;
  }
  return t;
}

void sort_unique(std::vector<double>& r) {
  std::sort(r.begin(), r.end());
  std::vector<double> out;
  for (double v : r) {
    if (!out.empty() && std::abs(v - out.back()) <= 1e-10 * std::max(1.0, std::abs(v))) continue;
    out.push_back(v);
  }
  r = std::move(out);
}

}  // namespace

std::vector<double> quadratic_roots(double c2, double c1, double c0) {
  const double scale = std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
  if (scale == 0.0) return {};
  if (std::abs(c2) <= 1e-15 * scale) {
    if (std::abs(c1) <= 1e-15 * scale) return {};
    return {-c0 / c1};
  }
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  const double tol = 1e-13 * std::max(c1 * c1, std::abs(4.0 * c2 * c0));
  if (disc < -tol) return {};
  if (std::abs(disc) <= tol) return {-c1 / (2.0 * c2)};
  const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
  std::vector<double> r;
  r.push_back(q / c2);
  if (q != 0.0) r.push_back(c0 / q);
  sort_unique(r);
  return r;
}

std::vector<double> polynomial_real_roots(std::span<const double> coeffs) {
  std::vector<double> c(coeffs.begin(), coeffs.end());
  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::abs(v));
  if (cmax == 0.0) return {};
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * cmax) c.pop_back();
  const int degree = static_cast<int>(c.size()) - 1;
  if (degree <= 0) return {};
  if (degree == 1) return {-c[0] / c[1]};
  if (degree == 2) return quadratic_roots(c[2], c[1], c[0]);

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -c[i] / c[degree];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  const auto& ev = solver.eigenvalues();

  std::vector<double> roots;
  for (int i = 0; i < degree; ++i) {
    const double re = ev[i].real();
    const double im = ev[i].imag();
    const double mag = std::max(1.0, std::abs(ev[i]));
    if (std::abs(im) <= 1e-9 * mag) {
      roots.push_back(polish(c, re));
    } else if (std::abs(im) <= 1e-6 * mag) {
      // Near-double root split into a complex pair by round-off.
      const double t = polish(c, re);
      if (std::abs(polyval(c, t)) <= 1e-10 * polyscale(c, t)) roots.push_back(t);
    }
  }
  sort_unique(roots);
  return roots;
}

}  // namespace sldg
