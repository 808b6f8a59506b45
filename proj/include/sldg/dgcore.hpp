#pragma once

// Element-local orthonormal polynomial bases and discontinuous fields.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sldg/mesh.hpp"
#include "sldg/poly.hpp"
#include "sldg/quadrature.hpp"

namespace sldg {

inline constexpr int kMaxModes = 6;
constexpr int num_modes(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Orthonormal basis on one triangle: phi_m = sum_k T(m, k) X^p_k Y^q_k with
/// X = (x - center.x) / h, Y = (y - center.y) / h, monomials in
/// degree-lexicographic order and T lower triangular.
struct ElementBasis {
  Vec2 center;
  double h = 1.0;
  int degree = 0;
  Eigen::Matrix<double, kMaxModes, kMaxModes> T = Eigen::Matrix<double, kMaxModes, kMaxModes>::Zero();

  int size() const { return num_modes(degree); }
  Vec2 local(Vec2 p) const { return (p - center) / h; }
  /// phi_m as a polynomial in the local coordinates.
  BivariatePoly poly(int m) const;
  /// All phi_m at p (global coordinates).
  void eval_all(Vec2 p, double* out) const;
};

/// Gram-Schmidt (via Cholesky of the monomial Gram matrix) on the triangle.
/// Throws ParameterError for degree outside {1, 2} (0 is allowed for tests)
/// and ConditioningError when the Gram matrix is numerically singular.
ElementBasis build_element_basis(Vec2 a, Vec2 b, Vec2 c, int degree);

struct BasisSet {
  int degree = 0;
  std::vector<ElementBasis> elements;
  int size() const { return num_modes(degree); }
};

BasisSet build_basis(const Mesh& mesh, int degree);

using ScalarFunction = std::function<double(double, double)>;

class DGField {
 public:
  DGField(const Mesh& mesh, const BasisSet& basis);

  const Mesh& mesh() const { return *mesh_; }
  const BasisSet& basis() const { return *basis_; }
  int degree() const { return basis_->degree; }
  int modes() const { return basis_->size(); }
  int num_elements() const { return mesh_->num_elements(); }

  double* coeffs(int e) { return c_.data() + static_cast<std::size_t>(e) * modes(); }
  const double* coeffs(int e) const { return c_.data() + static_cast<std::size_t>(e) * modes(); }
  std::vector<double>& data() { return c_; }
  const std::vector<double>& data() const { return c_; }

  /// Value of element e's polynomial at p, no containment check.
  double eval_unchecked(int e, Vec2 p) const;
  /// Element e's polynomial in its basis' local coordinates.
  BivariatePoly local_poly(int e) const;
  double cell_average(int e) const;

 private:
  const Mesh* mesh_;
  const BasisSet* basis_;
  std::vector<double> c_;
};

/// L2 projection with the degree-6 triangle rule.
DGField project(const ScalarFunction& f, const Mesh& mesh, const BasisSet& basis);
/// Coefficients c_m = integral of f phi_m over one element.
std::vector<double> project_element(const ScalarFunction& f, const Mesh& mesh,
                                    const ElementBasis& basis, int element);

/// Throws ContainmentError when p is outside element e (closed, relative tol 1e-10).
double evaluate(const DGField& field, int e, Vec2 p);

struct NormReport {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  std::vector<double> per_element_l1;
};

/// Norms of field - exact with the collapsed rule of the given order
/// (n x n points per element).
NormReport error_norms(const DGField& field, const ScalarFunction& exact, int order = 6);
/// Norms of field - reference (same mesh and degree).
NormReport error_norms(const DGField& field, const DGField& reference, int order = 6);

double total_mass(const DGField& field);

/// Header "degree k ne" then one "elem_id m coeff" line per coefficient.
void write_field_dump(const DGField& field, const std::string& path);
/// Reads a dump into a field on the given mesh/basis; throws ParseError.
DGField read_field_dump(const std::string& path, const Mesh& mesh, const BasisSet& basis);

}  // namespace sldg
