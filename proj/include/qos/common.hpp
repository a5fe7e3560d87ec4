#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qos {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

enum class ErrorKind {
  NonAssociative,
  BadInvolution,
  BadUnit,
  AlgebraMismatch,
  SizeMismatch,
  DimensionOverflow,
  NotHermitian,
  NotSelfAdjoint,
  NotInSpan,
  NoOrderUnit,
  Unbounded,
  LevelMismatch,
  Infeasible,
  IllDefined,
  NullSpaceNotKilled,
  InconsistentIdeal,
  NoFaithfulState,
  SchemaError,
  FixtureNotFound,
  Indeterminate,
};

const char* to_string(ErrorKind kind);

class QosError : public std::runtime_error {
 public:
  QosError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Tolerances shared by the decision procedures. Defaults can be overridden
/// through QOS_SDP_EPS and QOS_SDP_MAX_ITERS.
struct Tolerances {
  double eps_psd = 1e-8;
  double eps_affine = 1e-8;
  double eps_margin = 1e-9;
  int max_iters = 10000;

  static Tolerances from_env();
};

// Relative singular-value threshold for all rank decisions.
inline constexpr double kRankTol = 1e-10;

CVec random_cvec(Rng& rng, Eigen::Index n);
CMat random_cmat(Rng& rng, Eigen::Index rows, Eigen::Index cols);
CMat random_psd(Rng& rng, Eigen::Index n, Eigen::Index rank = -1);
CMat random_unitary(Rng& rng, Eigen::Index n);

}  // namespace qos
