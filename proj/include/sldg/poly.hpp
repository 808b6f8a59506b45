#pragma once

#include <vector>

#include "sldg/point.hpp"

namespace sldg {

/// Position of x^p y^q in degree-lexicographic order: 1, x, y, x^2, xy, y^2, ...
constexpr int monomial_index(int p, int q) {
  const int d = p + q;
  return d * (d + 1) / 2 + q;
}
constexpr int monomial_count(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Dense bivariate polynomial sum c_pq x^p y^q with p + q <= degree.
class BivariatePoly {
 public:
  BivariatePoly() : BivariatePoly(0) {}
  explicit BivariatePoly(int degree);
  static BivariatePoly constant(double c);
  static BivariatePoly monomial(int p, int q, double c = 1.0);

  int degree() const { return degree_; }
  double coeff(int p, int q) const {
    return (p < 0 || q < 0 || p + q > degree_) ? 0.0 : c_[monomial_index(p, q)];
  }
  /// Throws ParameterError when p + q exceeds the degree.
  double& at(int p, int q);
  /// Coefficients in degree-lexicographic order.
  const std::vector<double>& coeffs() const { return c_; }

  double operator()(double x, double y) const;
  double operator()(Vec2 p) const { return (*this)(p.x, p.y); }

  BivariatePoly& operator+=(const BivariatePoly& o);
  BivariatePoly& operator-=(const BivariatePoly& o);
  BivariatePoly& operator*=(double s);
  friend BivariatePoly operator+(BivariatePoly a, const BivariatePoly& b) { return a += b; }
  friend BivariatePoly operator-(BivariatePoly a, const BivariatePoly& b) { return a -= b; }
  friend BivariatePoly operator*(BivariatePoly a, double s) { return a *= s; }
  friend BivariatePoly operator*(double s, BivariatePoly a) { return a *= s; }
  friend BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b);

  BivariatePoly dx() const;
  BivariatePoly dy() const;
  /// Term-by-term x-antiderivative vanishing at x = 0; degree grows by one.
  BivariatePoly antiderivative_x() const;
  /// q(x', y') = p(origin + scale * (x', y')).
  BivariatePoly affine(Vec2 origin, double scale) const;
  /// Largest |c_pq|.
  double max_abs_coeff() const;

 private:
  int degree_;
  std::vector<double> c_;
};

}  // namespace sldg
