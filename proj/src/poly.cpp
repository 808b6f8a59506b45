#include "sldg/poly.hpp"

#include <algorithm>
#include <cmath>

#include "sldg/errors.hpp"

namespace sldg {

BivariatePoly::BivariatePoly(int degree) : degree_(degree) {
  if (degree < 0) throw ParameterError("BivariatePoly: negative degree");
  c_.assign(monomial_count(degree), 0.0);
}

BivariatePoly BivariatePoly::constant(double c) {
  BivariatePoly p(0);
  p.c_[0] = c;
  return p;
}

BivariatePoly BivariatePoly::monomial(int p, int q, double c) {
  BivariatePoly r(p + q);
  r.at(p, q) = c;
  return r;
}

double& BivariatePoly::at(int p, int q) {
  if (p < 0 || q < 0 || p + q > degree_) throw ParameterError("BivariatePoly: index beyond degree");
  return c_[monomial_index(p, q)];
}

double BivariatePoly::operator()(double x, double y) const {
  // Horner in y for every power of x, then in x.
  double acc = 0.0;
  for (int p = degree_; p >= 0; --p) {
    double inner = 0.0;
    for (int q = degree_ - p; q >= 0; --q) inner = inner * y + c_[monomial_index(p, q)];
    acc = acc * x + inner;
  }
  return acc;
}

BivariatePoly& BivariatePoly::operator+=(const BivariatePoly& o) {
  if (o.degree_ > degree_) {
    BivariatePoly wide(o.degree_);
    for (int p = 0; p <= degree_; ++p)
      for (int q = 0; p + q <= degree_; ++q) wide.at(p, q) = coeff(p, q);
    *this = std::move(wide);
  }
  for (int p = 0; p <= o.degree_; ++p)
    for (int q = 0; p + q <= o.degree_; ++q) c_[monomial_index(p, q)] += o.coeff(p, q);
  return *this;
}

BivariatePoly& BivariatePoly::operator-=(const BivariatePoly& o) { return *this += (-1.0) * o; }

BivariatePoly& BivariatePoly::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b) {
  BivariatePoly r(a.degree() + b.degree());
  for (int p1 = 0; p1 <= a.degree(); ++p1)
    for (int q1 = 0; p1 + q1 <= a.degree(); ++q1) {
      const double ca = a.coeff(p1, q1);
      if (ca == 0.0) continue;
      for (int p2 = 0; p2 <= b.degree(); ++p2)
        for (int q2 = 0; p2 + q2 <= b.degree(); ++q2) r.at(p1 + p2, q1 + q2) += ca * b.coeff(p2, q2);
    }
  return r;
}

BivariatePoly BivariatePoly::dx() const {
  BivariatePoly r(std::max(degree_ - 1, 0));
  for (int p = 1; p <= degree_; ++p)
    for (int q = 0; p + q <= degree_; ++q) r.at(p - 1, q) = p * coeff(p, q);
  return r;
}

BivariatePoly BivariatePoly::dy() const {
  BivariatePoly r(std::max(degree_ - 1, 0));
  for (int p = 0; p <= degree_; ++p)
    for (int q = 1; p + q <= degree_; ++q) r.at(p, q - 1) = q * coeff(p, q);
  return r;
}

BivariatePoly BivariatePoly::antiderivative_x() const {
  BivariatePoly r(degree_ + 1);
  for (int p = 0; p <= degree_; ++p)
    for (int q = 0; p + q <= degree_; ++q) r.at(p + 1, q) = coeff(p, q) / (p + 1);
  return r;
}

BivariatePoly BivariatePoly::affine(Vec2 origin, double scale) const {
  // Binomial expansion of (ox + s x')^p (oy + s y')^q.
  const int d = degree_;
  std::vector<std::vector<double>> binom(d + 1, std::vector<double>(d + 1, 0.0));
  for (int n = 0; n <= d; ++n) {
    binom[n][0] = 1.0;
    for (int k = 1; k <= n; ++k) binom[n][k] = binom[n - 1][k - 1] + (k <= n - 1 ? binom[n - 1][k] : 0.0);
  }
  std::vector<double> ox(d + 1, 1.0), oy(d + 1, 1.0), sp(d + 1, 1.0);
  for (int i = 1; i <= d; ++i) {
    ox[i] = ox[i - 1] * origin.x;
    oy[i] = oy[i - 1] * origin.y;
    sp[i] = sp[i - 1] * scale;
  }
  BivariatePoly r(d);
  for (int p = 0; p <= d; ++p)
    for (int q = 0; p + q <= d; ++q) {
      const double c = coeff(p, q);
      if (c == 0.0) continue;
      for (int i = 0; i <= p; ++i)
        for (int j = 0; j <= q; ++j)
          r.at(i, j) += c * binom[p][i] * ox[p - i] * binom[q][j] * oy[q - j] * sp[i + j];
    }
  return r;
}

double BivariatePoly::max_abs_coeff() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace sldg
