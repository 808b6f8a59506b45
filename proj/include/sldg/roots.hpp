#pragma once

#include <span>
#include <vector>

namespace sldg {

/// Real roots of c2 t^2 + c1 t + c0, ascending. A double root is reported once.
/// Discriminants that are negative only by round-off count as tangencies.
std::vector<double> quadratic_roots(double c2, double c1, double c0);

/// Real roots of sum_i coeffs[i] t^i (degree <= 4 in practice), ascending.
/// Uses the companion matrix of the monic polynomial, keeps eigenvalues with
/// |imag| <= 1e-9 (or whose real part polishes to a root), then Newton-polishes.
std::vector<double> polynomial_real_roots(std::span<const double> coeffs);

/// Horner evaluation of sum_i coeffs[i] t^i.
double polyval(std::span<const double> coeffs, double t);

}  // namespace sldg
