#include "qos/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qos {

namespace {

template <class Mat>
Mat span_basis(const Mat& vectors, double tol) {
  using Index = Eigen::Index;
  if (vectors.cols() == 0 || vectors.rows() == 0) return Mat(vectors.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(vectors, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return Mat(vectors.rows(), 0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > tol * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

template <class Mat>
Mat kernel_basis(const Mat& a, double tol) {
  using Index = Eigen::Index;
  const Index n = a.cols();
  if (n == 0) return Mat(0, 0);
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Index rank = 0;
  if (s.size() > 0 && s(0) > 0.0)
    while (rank < s.size() && s(rank) > tol * s(0)) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace

CMat orthonormal_basis(const CMat& vectors, double tol) { return span_basis(vectors, tol); }
RMat orthonormal_basis(const RMat& vectors, double tol) { return span_basis(vectors, tol); }
CMat null_space(const CMat& a, double tol) { return kernel_basis(a, tol); }
RMat null_space(const RMat& a, double tol) { return kernel_basis(a, tol); }

double max_principal_angle(const CMat& u, const CMat& v) {
  if (u.cols() != v.cols()) return std::numbers::pi / 2;
  if (u.cols() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(u.adjoint() * v);
  double smallest = svd.singularValues().minCoeff();
  return std::acos(std::clamp(smallest, -1.0, 1.0));
}

double distance_to_span(const CMat& basis, const CVec& x) {
  if (basis.cols() == 0) return x.norm();
  return (x - basis * (basis.adjoint() * x)).norm();
}

bool is_hermitian(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  double scale = std::max(1.0, m.norm());
  return (m - m.adjoint()).norm() <= tol * scale;
}

CMat hermitian_part(const CMat& m) { return 0.5 * (m + m.adjoint()); }

RMat realify(const CMat& h) {
  const Eigen::Index k = h.rows();
  RMat r(2 * k, 2 * k);
  r.topLeftCorner(k, k) = h.real();
  r.topRightCorner(k, k) = -h.imag();
  r.bottomLeftCorner(k, k) = h.imag();
  r.bottomRightCorner(k, k) = h.real();
  return r;
}

CMat unrealify(const RMat& y) {
  const Eigen::Index k = y.rows() / 2;
  CMat out(k, k);
  out.real() = y.topLeftCorner(k, k) + y.bottomRightCorner(k, k);
  out.imag() = y.bottomLeftCorner(k, k) - y.topRightCorner(k, k);
  return out;
}

double min_eigenvalue(const CMat& hermitian) {
  if (hermitian.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const CMat& hermitian) {
  if (hermitian.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(hermitian.rows() - 1);
}

double spectral_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

}  // namespace qos
