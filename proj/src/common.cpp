#include "qos/common.hpp"

#include <cmath>
#include <cstdlib>

namespace qos {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonAssociative: return "NonAssociative";
    case ErrorKind::BadInvolution: return "BadInvolution";
    case ErrorKind::BadUnit: return "BadUnit";
    case ErrorKind::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::DimensionOverflow: return "DimensionOverflow";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorKind::NotInSpan: return "NotInSpan";
    case ErrorKind::NoOrderUnit: return "NoOrderUnit";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::LevelMismatch: return "LevelMismatch";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::IllDefined: return "IllDefined";
    case ErrorKind::NullSpaceNotKilled: return "NullSpaceNotKilled";
    case ErrorKind::InconsistentIdeal: return "InconsistentIdeal";
    case ErrorKind::NoFaithfulState: return "NoFaithfulState";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::FixtureNotFound: return "FixtureNotFound";
    case ErrorKind::Indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

Tolerances Tolerances::from_env() {
  Tolerances tol;
  if (const char* s = std::getenv("QOS_SDP_EPS")) {
    double v = std::strtod(s, nullptr);
    if (v > 0) tol.eps_psd = v;
  }
  if (const char* s = std::getenv("QOS_SDP_MAX_ITERS")) {
    long v = std::strtol(s, nullptr, 10);
    if (v > 0) tol.max_iters = static_cast<int>(v);
  }
  return tol;
}

CVec random_cvec(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double re = g(rng);
    double im = g(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

CMat random_cmat(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      double re = g(rng);
      double im = g(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

CMat random_psd(Rng& rng, Eigen::Index n, Eigen::Index rank) {
  if (rank < 0) rank = n;
  CMat f = random_cmat(rng, n, rank);
  CMat g = f * f.adjoint();
  double tr = g.trace().real();
  if (tr > 0) g *= static_cast<double>(n) / tr;
  return g;
}

CMat random_unitary(Rng& rng, Eigen::Index n) {
  CMat z = random_cmat(rng, n, n);
  Eigen::HouseholderQR<CMat> qr(z);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex d = r(i, i);
    double a = std::abs(d);
    if (a > 0) q.col(i) *= d / a;
  }
  return q;
}

}  // namespace qos
