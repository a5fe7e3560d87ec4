#pragma once

#include <vector>

#include "qos/common.hpp"

namespace qos::sdp {

// ---------------------------------------------------------------------------
// Real block-diagonal standard form
//
//   primal:  min <C, X>  s.t.  <A_i, X> = b_i,  X psd
//   dual:    max b.y     s.t.  C - sum_i y_i A_i = S psd
// ---------------------------------------------------------------------------

struct RealSdp {
  std::vector<RMat> c;
  std::vector<std::vector<RMat>> a;  // a[i][block]
  RVec b;
};

enum class IpmStatus { Optimal, Inaccurate, IterationLimit, Diverged };

struct IpmResult {
  IpmStatus status = IpmStatus::Diverged;
  std::vector<RMat> x;
  std::vector<RMat> s;
  RVec y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_infeasibility = 0.0;  // relative
  double dual_infeasibility = 0.0;    // relative
  double gap = 0.0;                   // relative
  int iterations = 0;
};

struct IpmOptions {
  double tol = 1e-10;
  int max_iters = 10000;
};

IpmResult solve_real(const RealSdp& problem, const IpmOptions& options);

// ---------------------------------------------------------------------------
// Hermitian dual-form LMI with optional equality constraints:
//
//   maximize  objective . y
//   s.t.      F_0[b] + sum_i y_i F_i[b]  psd   for every block b
//             eq_matrix * y == eq_rhs
//
// Hermitian blocks are realified. The multipliers returned alongside are the
// primal Hermitian matrices X[b] >= 0 with
//   sum_b Re tr(F_i[b] X[b]) + objective_i == 0   (on the free directions)
// so that objective . y + sum_b Re tr(F(y)[b] X[b]) == sum_b Re tr(F_0[b] X[b]).
// ---------------------------------------------------------------------------

enum class Status { Feasible, Infeasible, Indeterminate, Unbounded };
const char* to_string(Status s);

struct LmiProblem {
  Eigen::Index num_vars = 0;
  std::vector<CMat> constant;
  std::vector<std::vector<CMat>> coeff;  // coeff[var][block], empty matrix = zero
  RVec objective;
  RMat eq_matrix;
  RVec eq_rhs;

  explicit LmiProblem(Eigen::Index vars = 0);
  /// Adds a block with constant term f0; returns its index.
  int add_block(const CMat& f0);
  void set(Eigen::Index var, int block, const CMat& f);
  void add_equality(const RVec& row, double rhs);
};

struct LmiResult {
  Status status = Status::Indeterminate;
  RVec y;
  std::vector<CMat> slack;        // F(y) per block
  std::vector<CMat> multipliers;  // primal X per block
  double value = 0.0;             // objective . y
  double min_eig = 0.0;           // min over blocks of lambda_min F(y)
  double gap = 0.0;
  int iterations = 0;
};

LmiResult solve_lmi(const LmiProblem& problem, const Tolerances& tol = Tolerances::from_env());

// ---------------------------------------------------------------------------
// Primal feasibility problems over Hermitian variables.
// ---------------------------------------------------------------------------

struct AffineConstraint {
  std::vector<CMat> coeff;  // Hermitian per variable; value is sum Re tr(coeff[v] X[v])
  double target = 0.0;
};

struct FeasibilityProblem {
  std::vector<Eigen::Index> variable_sizes;
  std::vector<AffineConstraint> constraints;
  std::vector<CMat> objective;  // minimized when non-empty
};

struct OracleResult {
  Status status = Status::Indeterminate;
  std::vector<CMat> witness;
  RVec dual_certificate;  // w with sum w_i A_i psd and w.b < 0
  double objective = 0.0;
  double affine_residual = 0.0;
  double min_eig = 0.0;
  double margin = 0.0;
};

OracleResult solve(const FeasibilityProblem& problem, const Tolerances& tol = Tolerances::from_env());

// Minimizes the objective with the witness returned even when not optimal.
OracleResult minimize(const FeasibilityProblem& problem, const Tolerances& tol = Tolerances::from_env());

// ---------------------------------------------------------------------------
// max t  s.t.  base + sum_i p_i directions[i] >= t I,  normalization on p.
// ---------------------------------------------------------------------------

struct AffineFamily {
  CMat base;
  std::vector<CMat> directions;
  RMat eq_matrix;  // normalization rows over p
  RVec eq_rhs;
};

struct MaxMinEig {
  double t_star = 0.0;
  RVec point;
  Status status = Status::Indeterminate;
};

MaxMinEig max_min_eig(const AffineFamily& family, const Tolerances& tol = Tolerances::from_env(),
                      double cap = 1e8);

struct HermitianEig {
  RVec values;  // ascending
  CMat vectors;
};

HermitianEig hermitian_eig(const CMat& m);

}  // namespace qos::sdp
