#include "qos/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qos/linalg.hpp"

namespace qos {

namespace {

constexpr double kAxiomTol = 1e-12;

std::string name_of(const std::vector<std::string>& names, Eigen::Index i) {
  if (i >= 0 && static_cast<size_t>(i) < names.size() && !names[i].empty()) return names[i];
  return "b" + std::to_string(i);
}

bool close(const CVec& a, const CVec& b) {
  double scale = std::max({1.0, a.norm(), b.norm()});
  return (a - b).norm() <= kAxiomTol * scale;
}

}  // namespace

AlgebraPtr StarAlgebra::build(std::vector<CMat> left, CMat involution, CVec unit,
                              std::vector<std::string> names) {
  const auto m = static_cast<Eigen::Index>(left.size());
  if (m == 0) throw QosError(ErrorKind::SizeMismatch, "algebra must have positive dimension");
  for (const auto& l : left)
    if (l.rows() != m || l.cols() != m)
      throw QosError(ErrorKind::SizeMismatch, "structure tensor must be m x m x m");
  if (involution.rows() != m || involution.cols() != m)
    throw QosError(ErrorKind::SizeMismatch, "involution must be m x m");
  if (unit.size() != m) throw QosError(ErrorKind::SizeMismatch, "unit must have length m");
  if (names.empty())
    for (Eigen::Index i = 0; i < m; ++i) names.push_back("b" + std::to_string(i));
  if (static_cast<Eigen::Index>(names.size()) != m)
    throw QosError(ErrorKind::SizeMismatch, "basis_names must have length m");

  std::shared_ptr<StarAlgebra> alg(new StarAlgebra());
  alg->dim_ = m;
  alg->names_ = std::move(names);
  alg->left_ = std::move(left);
  alg->involution_ = std::move(involution);
  alg->unit_ = std::move(unit);
  const auto& nm = alg->names_;

  // (b_i b_j) b_l == b_i (b_j b_l)
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      CVec bij = alg->left_[i].col(j);
      for (Eigen::Index l = 0; l < m; ++l) {
        CVec lhs = alg->multiply(bij, alg->basis_vector(l));
        CVec rhs = alg->left_[i] * alg->left_[j].col(l);
        if (!close(lhs, rhs)) {
          std::ostringstream os;
          os << "(" << name_of(nm, i) << "*" << name_of(nm, j) << ")*" << name_of(nm, l)
             << " != " << name_of(nm, i) << "*(" << name_of(nm, j) << "*" << name_of(nm, l) << ")";
          throw QosError(ErrorKind::NonAssociative, os.str());
        }
      }
    }

  for (Eigen::Index i = 0; i < m; ++i) {
    CVec twice = alg->adjoint(alg->adjoint(alg->basis_vector(i)));
    if (!close(twice, alg->basis_vector(i)))
      throw QosError(ErrorKind::BadInvolution, "(" + name_of(nm, i) + "*)* != " + name_of(nm, i));
  }
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      CVec lhs = alg->adjoint(alg->left_[i].col(j));
      CVec rhs = alg->multiply(alg->involution_.col(j), alg->involution_.col(i));
      if (!close(lhs, rhs))
        throw QosError(ErrorKind::BadInvolution, "(" + name_of(nm, i) + "*" + name_of(nm, j) + ")* != " +
                                                     name_of(nm, j) + "* " + name_of(nm, i) + "*");
    }

  if (!close(alg->adjoint(alg->unit_), alg->unit_))
    throw QosError(ErrorKind::BadUnit, "unit is not self-adjoint");
  for (Eigen::Index i = 0; i < m; ++i) {
    CVec b = alg->basis_vector(i);
    if (!close(alg->multiply(alg->unit_, b), b) || !close(alg->multiply(b, alg->unit_), b))
      throw QosError(ErrorKind::BadUnit, "unit does not act as identity on " + name_of(nm, i));
  }
  return alg;
}

AlgebraPtr StarAlgebra::from_structure(const std::vector<std::vector<CVec>>& structure,
                                       CMat involution, CVec unit, std::vector<std::string> names) {
  const auto m = static_cast<Eigen::Index>(structure.size());
  std::vector<CMat> left(m, CMat::Zero(m, m));
  for (Eigen::Index i = 0; i < m; ++i) {
    if (static_cast<Eigen::Index>(structure[i].size()) != m)
      throw QosError(ErrorKind::SizeMismatch, "structure tensor must be m x m x m");
    for (Eigen::Index j = 0; j < m; ++j) {
      if (structure[i][j].size() != m)
        throw QosError(ErrorKind::SizeMismatch, "structure tensor must be m x m x m");
      left[i].col(j) = structure[i][j];
    }
  }
  return build(std::move(left), std::move(involution), std::move(unit), std::move(names));
}

CMat StarAlgebra::left(Eigen::Index i) const {
  if (!base_) return left_[i];
  CMat out(dim_, dim_);
  CVec bi = basis_vector(i);
  for (Eigen::Index j = 0; j < dim_; ++j) out.col(j) = multiply(bi, basis_vector(j));
  return out;
}

Complex StarAlgebra::structure(Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
  if (!base_) return left_[i](k, j);
  return multiply(basis_vector(i), basis_vector(j))(k);
}

CVec StarAlgebra::multiply(const CVec& a, const CVec& b) const {
  if (a.size() != dim_ || b.size() != dim_)
    throw QosError(ErrorKind::SizeMismatch, "coordinate length differs from algebra dimension");
  if (base_) {
    const Eigen::Index m = base_->dim();
    const int n = level_;
    CVec out = CVec::Zero(dim_);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        auto aij = a.segment((i * n + j) * m, m);
        if (aij.squaredNorm() == 0.0) continue;
        for (int q = 0; q < n; ++q) {
          auto bjq = b.segment((j * n + q) * m, m);
          if (bjq.squaredNorm() == 0.0) continue;
          out.segment((i * n + q) * m, m) += base_->multiply(aij, bjq);
        }
      }
    return out;
  }
  CVec out = CVec::Zero(dim_);
  for (Eigen::Index i = 0; i < dim_; ++i)
    if (a(i) != Complex(0.0)) out.noalias() += a(i) * (left_[i] * b);
  return out;
}

CVec StarAlgebra::adjoint(const CVec& a) const {
  if (a.size() != dim_)
    throw QosError(ErrorKind::SizeMismatch, "coordinate length differs from algebra dimension");
  return involution_ * a.conjugate();
}

AlgebraPtr amplify(const AlgebraPtr& algebra, int n) {
  if (n < 1) throw QosError(ErrorKind::SizeMismatch, "amplification level must be >= 1");
  const Eigen::Index m = algebra->dim();
  if (n == 1) {
    std::shared_ptr<StarAlgebra> copy(new StarAlgebra(*algebra));
    return copy;
  }
  std::shared_ptr<StarAlgebra> alg(new StarAlgebra());
  alg->dim_ = static_cast<Eigen::Index>(n) * n * m;
  alg->base_ = algebra;
  alg->level_ = n;
  alg->involution_ = CMat::Zero(alg->dim_, alg->dim_);
  alg->unit_ = CVec::Zero(alg->dim_);
  for (int i = 0; i < n; ++i) {
    alg->unit_.segment((i * n + i) * m, m) = algebra->unit();
    for (int j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < m; ++k) {
        alg->involution_.block((j * n + i) * m, (i * n + j) * m + k, m, 1) = algebra->involution().col(k);
        alg->names_.push_back(algebra->names()[k] + "@E" + std::to_string(i + 1) + std::to_string(j + 1));
      }
  }
  return alg;
}

AlgebraPtr direct_sum(const AlgebraPtr& a, const AlgebraPtr& b) {
  const Eigen::Index ma = a->dim(), mb = b->dim(), m = ma + mb;
  std::vector<CMat> left(m, CMat::Zero(m, m));
  for (Eigen::Index i = 0; i < ma; ++i) left[i].topLeftCorner(ma, ma) = a->left(i);
  for (Eigen::Index i = 0; i < mb; ++i) left[ma + i].bottomRightCorner(mb, mb) = b->left(i);
  CMat inv = CMat::Zero(m, m);
  inv.topLeftCorner(ma, ma) = a->involution();
  inv.bottomRightCorner(mb, mb) = b->involution();
  CVec unit(m);
  unit << a->unit(), b->unit();
  std::vector<std::string> names;
  for (const auto& s : a->names()) names.push_back(s + "@0");
  for (const auto& s : b->names()) names.push_back(s + "@1");
  return StarAlgebra::build(std::move(left), std::move(inv), std::move(unit), std::move(names));
}

Element::Element(AlgebraPtr alg, CVec c) : algebra(std::move(alg)), coords(std::move(c)) {
  if (!algebra || coords.size() != algebra->dim())
    throw QosError(ErrorKind::SizeMismatch, "element coordinates do not match algebra dimension");
}

Element Element::unit(const AlgebraPtr& alg) { return Element(alg, alg->unit()); }
Element Element::zero(const AlgebraPtr& alg) { return Element(alg, CVec::Zero(alg->dim())); }
Element Element::basis(const AlgebraPtr& alg, Eigen::Index i) { return Element(alg, alg->basis_vector(i)); }

Element Element::entry(int i, int j) const {
  const auto& base = algebra->base();
  if (!base) throw QosError(ErrorKind::LevelMismatch, "element is not in an amplification");
  const int n = algebra->level();
  const Eigen::Index m = base->dim();
  return Element(base, coords.segment((i * n + j) * m, m));
}

namespace {
void require_same(const Element& a, const Element& b) {
  if (a.algebra != b.algebra) throw QosError(ErrorKind::AlgebraMismatch, "elements live in different algebras");
}
}  // namespace

Element multiply(const Element& a, const Element& b) {
  require_same(a, b);
  return Element(a.algebra, a.algebra->multiply(a.coords, b.coords));
}

Element adjoint(const Element& a) { return Element(a.algebra, a.algebra->adjoint(a.coords)); }
Element operator*(const Element& a, const Element& b) { return multiply(a, b); }

Element operator+(const Element& a, const Element& b) {
  require_same(a, b);
  return Element(a.algebra, a.coords + b.coords);
}

Element operator-(const Element& a, const Element& b) {
  require_same(a, b);
  return Element(a.algebra, a.coords - b.coords);
}

Element operator-(const Element& a) { return Element(a.algebra, -a.coords); }
Element operator*(Complex s, const Element& a) { return Element(a.algebra, s * a.coords); }

bool is_self_adjoint(const Element& a, double tol) {
  return (a.algebra->adjoint(a.coords) - a.coords).norm() <= tol * std::max(1.0, a.coords.norm());
}

Element matrix_element(const AlgebraPtr& amplified, const std::vector<std::vector<Element>>& entries) {
  const auto& base = amplified->base();
  const int n = amplified->level();
  if (!base || static_cast<int>(entries.size()) != n)
    throw QosError(ErrorKind::LevelMismatch, "entry array does not match amplification level");
  const Eigen::Index m = base->dim();
  CVec c(amplified->dim());
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(entries[i].size()) != n)
      throw QosError(ErrorKind::LevelMismatch, "entry array must be square");
    for (int j = 0; j < n; ++j) {
      if (entries[i][j].algebra != base) throw QosError(ErrorKind::AlgebraMismatch, "entry not in base algebra");
      c.segment((i * n + j) * m, m) = entries[i][j].coords;
    }
  }
  return Element(amplified, std::move(c));
}

Element tensor_unit(const AlgebraPtr& amplified, const Element& x, int i, int j) {
  const auto& base = amplified->base();
  if (!base || x.algebra != base) throw QosError(ErrorKind::AlgebraMismatch, "x must lie in the base algebra");
  const int n = amplified->level();
  CVec c = CVec::Zero(amplified->dim());
  c.segment((i * n + j) * base->dim(), base->dim()) = x.coords;
  return Element(amplified, std::move(c));
}

double QuasiOperatorSystem::distance(const CVec& coords) const { return distance_to_span(basis, coords); }

bool QuasiOperatorSystem::contains(const CVec& coords, double tol) const {
  return distance(coords) <= tol * std::max(1.0, coords.norm());
}

CMat generated_subalgebra(const AlgebraPtr& algebra, const CMat& vectors) {
  const Eigen::Index m = algebra->dim();
  CMat start(m, vectors.cols() * 2 + 1);
  start.col(0) = algebra->unit();
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    start.col(1 + 2 * k) = vectors.col(k);
    start.col(2 + 2 * k) = algebra->adjoint(vectors.col(k));
  }
  CMat span = orthonormal_basis(start);
  for (Eigen::Index iter = 0; iter <= m; ++iter) {
    const Eigen::Index s = span.cols();
    CMat grown(m, s + s * s);
    grown.leftCols(s) = span;
    for (Eigen::Index i = 0; i < s; ++i)
      for (Eigen::Index j = 0; j < s; ++j) grown.col(s + i * s + j) = algebra->multiply(span.col(i), span.col(j));
    CMat next = orthonormal_basis(grown);
    if (next.cols() > m) throw QosError(ErrorKind::DimensionOverflow, "generated subalgebra exceeds dim A");
    if (next.cols() == s) return span;
    span = next;
  }
  return span;
}

namespace {

SystemPtr finish_system(const AlgebraPtr& algebra, CMat basis, bool self_adjoint, int level) {
  auto sys = std::make_shared<QuasiOperatorSystem>();
  sys->ambient = algebra;
  sys->generated_basis = generated_subalgebra(algebra, basis);
  sys->basis = std::move(basis);
  sys->self_adjoint = self_adjoint;
  sys->level = level;
  return sys;
}

}  // namespace

SystemPtr build_system(const AlgebraPtr& algebra, const CMat& vectors) {
  const Eigen::Index m = algebra->dim();
  if (vectors.rows() != m) throw QosError(ErrorKind::SizeMismatch, "vectors must have algebra dimension rows");
  CMat all(m, 2 * vectors.cols() + 1);
  all.col(0) = algebra->unit();
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    all.col(1 + 2 * k) = vectors.col(k);
    all.col(2 + 2 * k) = algebra->adjoint(vectors.col(k));
  }
  return finish_system(algebra, orthonormal_basis(all), true, 1);
}

SystemPtr build_space(const AlgebraPtr& algebra, const CMat& vectors) {
  const Eigen::Index m = algebra->dim();
  if (vectors.rows() != m) throw QosError(ErrorKind::SizeMismatch, "vectors must have algebra dimension rows");
  CMat all(m, vectors.cols() + 1);
  all.col(0) = algebra->unit();
  all.rightCols(vectors.cols()) = vectors;
  CMat basis = orthonormal_basis(all);
  CMat adj(m, basis.cols());
  for (Eigen::Index k = 0; k < basis.cols(); ++k) adj.col(k) = algebra->adjoint(basis.col(k));
  bool closed = true;
  for (Eigen::Index k = 0; k < adj.cols(); ++k)
    if (distance_to_span(basis, adj.col(k)) > 1e-10) closed = false;
  return finish_system(algebra, std::move(basis), closed, 1);
}

SystemPtr whole_algebra(const AlgebraPtr& algebra) {
  auto sys = std::make_shared<QuasiOperatorSystem>();
  sys->ambient = algebra;
  sys->basis = CMat::Identity(algebra->dim(), algebra->dim());
  sys->generated_basis = sys->basis;
  sys->level = 1;
  return sys;
}

SystemPtr matrix_system(const SystemPtr& system, int n) {
  if (n < 1) throw QosError(ErrorKind::SizeMismatch, "level must be >= 1");
  if (n == 1) return system;
  AlgebraPtr amp = amplify(system->ambient, n);
  const Eigen::Index m = system->ambient->dim();
  const Eigen::Index d = system->dim();
  CMat basis = CMat::Zero(amp->dim(), static_cast<Eigen::Index>(n) * n * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < d; ++k)
        basis.block((i * n + j) * m, (i * n + j) * d + k, m, 1) = system->basis.col(k);
  auto sys = std::make_shared<QuasiOperatorSystem>();
  sys->ambient = amp;
  // X contains 1, so the algebra generated by M_n(X) is M_n of the algebra generated by X
  const CMat& gen = system->generated_basis;
  sys->generated_basis = CMat::Zero(amp->dim(), static_cast<Eigen::Index>(n) * n * gen.cols());
  for (int b = 0; b < n * n; ++b) sys->generated_basis.block(b * m, b * gen.cols(), m, gen.cols()) = gen;
  sys->basis = std::move(basis);
  sys->self_adjoint = system->self_adjoint;
  sys->level = n * system->level;
  return sys;
}

double HermitianFrame::residual(const CVec& element) const {
  return (basis * coords(element) - element).norm();
}

namespace {

// Stacks real and imaginary parts so that self-adjoint elements form a real
// subspace of R^{2m}.
RVec stack(const CVec& v) {
  RVec r(2 * v.size());
  r << v.real(), v.imag();
  return r;
}

}  // namespace

HermitianFrame make_frame(const AlgebraPtr& algebra, const CMat& inner, const CMat& outer) {
  const Eigen::Index m = algebra->dim();
  std::vector<CVec> chosen;
  std::vector<RVec> ortho;
  auto offer = [&](const CVec& h, double ref) {
    RVec r = stack(h);
    const double norm0 = std::max(ref, r.norm());
    if (norm0 == 0.0) return;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : ortho) r -= q.dot(r) * q;
    if (r.norm() <= 1e-9 * norm0) return;
    r.normalize();
    ortho.push_back(r);
    CVec c(m);
    c.real() = r.head(m);
    c.imag() = r.tail(m);
    chosen.push_back(c);
  };
  auto offer_span = [&](const CMat& vectors) {
    for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
      CVec v = vectors.col(k);
      CVec vs = algebra->adjoint(v);
      offer(0.5 * (v + vs), v.norm());
      offer(Complex(0.0, -0.5) * (v - vs), v.norm());
    }
  };

  offer(algebra->unit(), 0.0);
  chosen[0] = algebra->unit();
  offer_span(inner);
  const auto inner_dim = static_cast<Eigen::Index>(chosen.size());
  offer_span(outer);

  HermitianFrame frame;
  frame.algebra = algebra;
  frame.inner_dim = inner_dim;
  frame.basis = CMat(m, static_cast<Eigen::Index>(chosen.size()));
  for (size_t k = 0; k < chosen.size(); ++k) frame.basis.col(static_cast<Eigen::Index>(k)) = chosen[k];
  bool covered = frame.basis.cols() <= std::max<Eigen::Index>(outer.cols(), 1);
  const CMat span = orthonormal_basis(frame.basis);
  for (Eigen::Index k = 0; k < outer.cols() && covered; ++k)
    covered = distance_to_span(span, outer.col(k)) <= 1e-8 * std::max(1.0, outer.col(k).norm());
  if (!covered)
    throw QosError(ErrorKind::NotSelfAdjoint, "outer span is not a self-adjoint subspace containing the inner span");
  frame.coordinate_map = frame.basis.completeOrthogonalDecomposition().pseudoInverse();
  return frame;
}

namespace fixtures {

AlgebraPtr scalars() {
  return StarAlgebra::build({CMat::Ones(1, 1)}, CMat::Ones(1, 1), CVec::Ones(1), {"1"});
}

AlgebraPtr nilpotent() {
  // basis {1, x}: x x = 0
  std::vector<CMat> left(2, CMat::Zero(2, 2));
  left[0] = CMat::Identity(2, 2);
  left[1](1, 0) = 1.0;
  return StarAlgebra::build(std::move(left), CMat::Identity(2, 2), CVec::Unit(2, 0), {"1", "x"});
}

AlgebraPtr group_z2() {
  std::vector<CMat> left(2, CMat::Zero(2, 2));
  left[0] = CMat::Identity(2, 2);
  left[1](1, 0) = 1.0;
  left[1](0, 1) = 1.0;
  return StarAlgebra::build(std::move(left), CMat::Identity(2, 2), CVec::Unit(2, 0), {"1", "s"});
}

AlgebraPtr matrices2() {
  // basis E11, E12, E21, E22 at index 2*i + j
  std::vector<CMat> left(4, CMat::Zero(4, 4));
  CMat inv = CMat::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      for (int l = 0; l < 2; ++l) left[2 * i + j](2 * i + l, 2 * j + l) = 1.0;
      inv(2 * j + i, 2 * i + j) = 1.0;
    }
  CVec unit = CVec::Zero(4);
  unit(0) = unit(3) = 1.0;
  return StarAlgebra::build(std::move(left), std::move(inv), std::move(unit), {"E11", "E12", "E21", "E22"});
}

AlgebraPtr m2_plus_nil() { return direct_sum(matrices2(), nilpotent()); }

std::vector<std::string> names() { return {"ALG_C", "ALG_NIL", "ALG_Z2", "ALG_M2", "ALG_M2_NIL"}; }

AlgebraPtr by_name(const std::string& name) {
  if (name == "ALG_C") return scalars();
  if (name == "ALG_NIL") return nilpotent();
  if (name == "ALG_Z2") return group_z2();
  if (name == "ALG_M2") return matrices2();
  if (name == "ALG_M2_NIL") return m2_plus_nil();
  throw QosError(ErrorKind::FixtureNotFound, "unknown fixture '" + name + "'");
}

}  // namespace fixtures

}  // namespace qos
