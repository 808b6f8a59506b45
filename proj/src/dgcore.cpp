#include "sldg/dgcore.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sldg/errors.hpp"
#include "sldg/geometry.hpp"

namespace sldg {

namespace {

constexpr std::array<std::array<int, 2>, kMaxModes> kExponents{
    {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}};

void monomials(Vec2 x, double* out) {
  out[0] = 1.0;
  out[1] = x.x;
  out[2] = x.y;
  out[3] = x.x * x.x;
  out[4] = x.x * x.y;
  out[5] = x.y * x.y;
}

Vec2 from_bary(const std::array<double, 3>& l, const std::array<Vec2, 3>& v) {
  return l[0] * v[0] + l[1] * v[1] + l[2] * v[2];
}

}  // namespace

BivariatePoly ElementBasis::poly(int m) const {
  BivariatePoly p(degree);
  for (int k = 0; k <= m; ++k) p.at(kExponents[k][0], kExponents[k][1]) = T(m, k);
  return p;
}

void ElementBasis::eval_all(Vec2 p, double* out) const {
  double mono[kMaxModes];
  monomials(local(p), mono);
  const int n = size();
  for (int m = 0; m < n; ++m) {
    double v = 0.0;
    for (int k = 0; k <= m; ++k) v += T(m, k) * mono[k];
    out[m] = v;
  }
}

ElementBasis build_element_basis(Vec2 a, Vec2 b, Vec2 c, int degree) {
  if (degree < 0 || degree > 2) throw ParameterError("build_element_basis: degree must be 0, 1 or 2");
  ElementBasis eb;
  eb.degree = degree;
  eb.center = (a + b + c) / 3.0;
  eb.h = std::max({distance(a, b), distance(b, c), distance(c, a)});
  const double area = 0.5 * std::abs(orient2d(a, b, c));
  if (!(area > 0.0)) throw DegenerateError("build_element_basis: zero-area triangle");
  const int n = eb.size();

  // Gram matrix of the centered, scaled monomials (integrand degree <= 4).
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  const std::array<Vec2, 3> v{a, b, c};
  const TriangleRule& rule = triangle_rule_deg6();
  double mono[kMaxModes];
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    monomials(eb.local(from_bary(rule.bary[q], v)), mono);
    const double w = rule.weights[q] * area;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) += w * mono[i] * mono[j];
  }
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) throw ConditioningError("build_element_basis: singular Gram matrix");
  const Eigen::MatrixXd L = llt.matrixL();
  const double dmin = L.diagonal().minCoeff(), dmax = L.diagonal().maxCoeff();
  if (!(dmin > 1e-7 * dmax)) throw ConditioningError("build_element_basis: ill-conditioned element");
  const Eigen::MatrixXd Tn = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));
  eb.T.setZero();
  eb.T.topLeftCorner(n, n) = Tn.triangularView<Eigen::Lower>();
  return eb;
}

BasisSet build_basis(const Mesh& mesh, int degree) {
  BasisSet set;
  set.degree = degree;
  set.elements.reserve(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto v = mesh.corners(e);
    set.elements.push_back(build_element_basis(v[0], v[1], v[2], degree));
  }
  return set;
}

DGField::DGField(const Mesh& mesh, const BasisSet& basis) : mesh_(&mesh), basis_(&basis) {
  if (static_cast<int>(basis.elements.size()) != mesh.num_elements()) {
    throw ParameterError("DGField: basis does not match mesh");
  }
  c_.assign(static_cast<std::size_t>(mesh.num_elements()) * basis.size(), 0.0);
}

double DGField::eval_unchecked(int e, Vec2 p) const {
  double phi[kMaxModes];
  basis_->elements[e].eval_all(p, phi);
  const double* c = coeffs(e);
  double v = 0.0;
  for (int m = 0; m < modes(); ++m) v += c[m] * phi[m];
  return v;
}

BivariatePoly DGField::local_poly(int e) const {
  const ElementBasis& eb = basis_->elements[e];
  const double* c = coeffs(e);
  BivariatePoly p(eb.degree);
  for (int m = 0; m < eb.size(); ++m)
    for (int k = 0; k <= m; ++k) p.at(kExponents[k][0], kExponents[k][1]) += c[m] * eb.T(m, k);
  return p;
}

double DGField::cell_average(int e) const {
  return coeffs(e)[0] / std::sqrt(mesh_->element(e).area);
}

std::vector<double> project_element(const ScalarFunction& f, const Mesh& mesh,
                                    const ElementBasis& basis, int element) {
  const auto v = mesh.corners(element);
  const double area = mesh.element(element).area;
  const TriangleRule& rule = triangle_rule_deg6();
  std::vector<double> c(basis.size(), 0.0);
  double phi[kMaxModes];
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    const Vec2 p = from_bary(rule.bary[q], v);
    basis.eval_all(p, phi);
    const double w = rule.weights[q] * area * f(p.x, p.y);
    for (int m = 0; m < basis.size(); ++m) c[m] += w * phi[m];
  }
  return c;
}

DGField project(const ScalarFunction& f, const Mesh& mesh, const BasisSet& basis) {
  DGField field(mesh, basis);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto c = project_element(f, mesh, basis.elements[e], e);
    std::copy(c.begin(), c.end(), field.coeffs(e));
  }
  return field;
}

double evaluate(const DGField& field, int e, Vec2 p) {
  const auto v = field.mesh().corners(e);
  const double tol = 1e-10 * field.mesh().element(e).diameter;
  if (!point_in_triangle(p, v[0], v[1], v[2], tol)) {
    throw ContainmentError("evaluate: point outside element " + std::to_string(e));
  }
  return field.eval_unchecked(e, p);
}

namespace {

NormReport norms_of(const DGField& field, const std::function<double(int, Vec2)>& diff, int order) {
  const TriangleRule rule = collapsed_triangle_rule(order);
  const Mesh& mesh = field.mesh();
  NormReport r;
  r.per_element_l1.assign(mesh.num_elements(), 0.0);
  double l2sq = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto v = mesh.corners(e);
    const double area = mesh.element(e).area;
    double l1 = 0.0;
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const double d = diff(e, from_bary(rule.bary[q], v));
      const double w = rule.weights[q] * area;
      l1 += w * std::abs(d);
      l2sq += w * d * d;
      r.linf = std::max(r.linf, std::abs(d));
    }
    r.per_element_l1[e] = l1;
    r.l1 += l1;
  }
  r.l2 = std::sqrt(l2sq);
  return r;
}

}  // namespace

NormReport error_norms(const DGField& field, const ScalarFunction& exact, int order) {
  return norms_of(
      field, [&](int e, Vec2 p) { return field.eval_unchecked(e, p) - exact(p.x, p.y); }, order);
}

NormReport error_norms(const DGField& field, const DGField& reference, int order) {
  if (&field.mesh() != &reference.mesh() || field.degree() != reference.degree()) {
    throw ParameterError("error_norms: fields live on different spaces");
  }
  return norms_of(
      field,
      [&](int e, Vec2 p) { return field.eval_unchecked(e, p) - reference.eval_unchecked(e, p); },
      order);
}

double total_mass(const DGField& field) {
  double m = 0.0;
  for (int e = 0; e < field.num_elements(); ++e) {
    m += field.coeffs(e)[0] * std::sqrt(field.mesh().element(e).area);
  }
  return m;
}

void write_field_dump(const DGField& field, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write field dump '" + path + "'");
  f << "degree " << field.degree() << ' ' << field.num_elements() << '\n' << std::setprecision(17);
  for (int e = 0; e < field.num_elements(); ++e)
    for (int m = 0; m < field.modes(); ++m) f << e << ' ' << m << ' ' << field.coeffs(e)[m] << '\n';
}

DGField read_field_dump(const std::string& path, const Mesh& mesh, const BasisSet& basis) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open field dump '" + path + "'", 0);
  std::string line;
  int line_no = 1;
  if (!std::getline(f, line)) throw ParseError("missing header", 1);
  std::istringstream hs(line);
  std::string word;
  int k = -1, ne = -1;
  if (!(hs >> word >> k >> ne) || word != "degree") throw ParseError("bad header, expected 'degree k ne'", 1);
  if (k != basis.degree || ne != mesh.num_elements()) throw ParseError("dump does not match mesh/basis", 1);
  DGField field(mesh, basis);
  std::vector<char> seen(field.data().size(), 0);
  while (std::getline(f, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    int e = -1, m = -1;
    double v = 0.0;
    if (!(ls >> e >> m >> v)) throw ParseError("bad line, expected 'elem_id m coeff'", line_no);
    if (e < 0 || e >= ne || m < 0 || m >= field.modes()) throw ParseError("index out of range", line_no);
    field.coeffs(e)[m] = v;
    seen[static_cast<std::size_t>(e) * field.modes() + m] = 1;
  }
  for (char s : seen)
    if (!s) throw ParseError("missing coefficients", line_no);
  return field;
}

}  // namespace sldg
