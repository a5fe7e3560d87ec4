#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qos/common.hpp"

namespace qos {

class StarAlgebra;
using AlgebraPtr = std::shared_ptr<const StarAlgebra>;

/// Finite-dimensional unital *-algebra in a fixed basis b_0..b_{m-1}.
///
/// Multiplication is given by left-multiplication matrices: column j of
/// left(i) holds the coordinates of b_i b_j. The involution matrix has the
/// coordinates of b_i^* in column i and acts conjugate-linearly. Matrix
/// amplifications M_n(A) keep a pointer to the base algebra and multiply
/// blockwise; their basis is b_k (x) E_ij at index (i*n + j)*m + k.
class StarAlgebra {
 public:
  /// Validates associativity, the involution axioms and the unit to 1e-12.
  static AlgebraPtr build(std::vector<CMat> left, CMat involution, CVec unit,
                          std::vector<std::string> names);

  /// Builds from structure constants: structure[i][j][k] is the coefficient
  /// of b_k in b_i b_j.
  static AlgebraPtr from_structure(const std::vector<std::vector<CVec>>& structure,
                                   CMat involution, CVec unit,
                                   std::vector<std::string> names);

  Eigen::Index dim() const noexcept { return dim_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const CVec& unit() const noexcept { return unit_; }
  const CMat& involution() const noexcept { return involution_; }

  /// Base algebra and level for amplifications; nullptr and 1 otherwise.
  const AlgebraPtr& base() const noexcept { return base_; }
  int level() const noexcept { return level_; }

  /// Coordinates of b_i b_j in column j.
  CMat left(Eigen::Index i) const;
  Complex structure(Eigen::Index i, Eigen::Index j, Eigen::Index k) const;

  CVec multiply(const CVec& a, const CVec& b) const;
  CVec adjoint(const CVec& a) const;

  CVec basis_vector(Eigen::Index i) const { return CVec::Unit(dim_, i); }

 private:
  friend AlgebraPtr amplify(const AlgebraPtr& algebra, int n);
  StarAlgebra() = default;

  Eigen::Index dim_ = 0;
  std::vector<std::string> names_;
  std::vector<CMat> left_;
  CMat involution_;
  CVec unit_;
  AlgebraPtr base_;
  int level_ = 1;
};

/// M_n(A) as a *-algebra of dimension n^2 m.
AlgebraPtr amplify(const AlgebraPtr& algebra, int n);

/// Block-diagonal direct sum A (+) B.
AlgebraPtr direct_sum(const AlgebraPtr& a, const AlgebraPtr& b);

struct Element {
  AlgebraPtr algebra;
  CVec coords;

  Element() = default;
  Element(AlgebraPtr alg, CVec c);

  static Element unit(const AlgebraPtr& alg);
  static Element zero(const AlgebraPtr& alg);
  static Element basis(const AlgebraPtr& alg, Eigen::Index i);

  /// Entry (i, j) of an element of an amplification, as an element of the base.
  Element entry(int i, int j) const;
};

Element multiply(const Element& a, const Element& b);
Element adjoint(const Element& a);
Element operator*(const Element& a, const Element& b);
Element operator+(const Element& a, const Element& b);
Element operator-(const Element& a, const Element& b);
Element operator-(const Element& a);
Element operator*(Complex s, const Element& a);
bool is_self_adjoint(const Element& a, double tol = 1e-10);

/// Element of M_n(A) assembled from an n x n array of entries in A.
Element matrix_element(const AlgebraPtr& amplified, const std::vector<std::vector<Element>>& entries);
/// x (x) E_ij in M_n(A).
Element tensor_unit(const AlgebraPtr& amplified, const Element& x, int i, int j);

/// Unital self-adjoint subspace X of an algebra together with [X], the
/// unital *-subalgebra it generates. Both bases are orthonormal in
/// coordinates. Spaces built with build_space are unital but not
/// necessarily closed under the involution (self_adjoint == false).
struct QuasiOperatorSystem {
  AlgebraPtr ambient;
  CMat basis;
  CMat generated_basis;
  bool self_adjoint = true;
  int level = 1;

  Eigen::Index dim() const { return basis.cols(); }
  Element basis_element(Eigen::Index k) const { return Element(ambient, basis.col(k)); }
  /// Coordinates over `basis` of an element of the span.
  CVec coordinates(const CVec& coords) const { return basis.adjoint() * coords; }
  double distance(const CVec& coords) const;
  bool contains(const CVec& coords, double tol = 1e-10) const;
};

using SystemPtr = std::shared_ptr<const QuasiOperatorSystem>;

/// Span of the vectors, the unit and their adjoints, with [X] by closure.
SystemPtr build_system(const AlgebraPtr& algebra, const CMat& vectors);
/// Unital span of the vectors without adjoint closure.
SystemPtr build_space(const AlgebraPtr& algebra, const CMat& vectors);
/// The whole algebra as a system over the standard coordinate basis.
SystemPtr whole_algebra(const AlgebraPtr& algebra);
/// M_n(X) inside M_n(A); basis x_k (x) E_ij at index (i*n + j)*dim X + k.
SystemPtr matrix_system(const SystemPtr& system, int n);

/// Orthonormal basis of the unital *-subalgebra generated by the columns.
CMat generated_subalgebra(const AlgebraPtr& algebra, const CMat& vectors);

/// Self-adjoint basis h_0 = 1, h_1, ... of a unital *-subalgebra W, whose
/// first inner_dim elements span a self-adjoint subspace V of W. Coordinates
/// of self-adjoint elements in this frame are real.
struct HermitianFrame {
  AlgebraPtr algebra;
  CMat basis;
  Eigen::Index inner_dim = 0;
  CMat coordinate_map;

  Eigen::Index size() const { return basis.cols(); }
  CVec coords(const CVec& element) const { return coordinate_map * element; }
  /// Distance from the span of the frame.
  double residual(const CVec& element) const;
};

HermitianFrame make_frame(const AlgebraPtr& algebra, const CMat& inner, const CMat& outer);

namespace fixtures {
AlgebraPtr scalars();       // ALG_C
AlgebraPtr nilpotent();     // ALG_NIL: C[x]/(x^2), x^* = x
AlgebraPtr group_z2();      // ALG_Z2: group algebra of Z/2
AlgebraPtr matrices2();     // ALG_M2: 2x2 matrices via matrix units
AlgebraPtr m2_plus_nil();   // ALG_M2 (+) ALG_NIL
AlgebraPtr by_name(const std::string& name);
std::vector<std::string> names();
}  // namespace fixtures

}  // namespace qos
