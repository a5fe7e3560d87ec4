#pragma once

#include <string>
#include <vector>

#include "qos/arch.hpp"
#include "qos/realization.hpp"
#include "qos/states.hpp"

namespace qos {

enum class ExtensionMethod { Direct, Pipeline };
const char* to_string(ExtensionMethod m);

/// Intermediates of the constructive route through X/N, A/W and its realization.
struct PipelineTrace {
  Eigen::Index null_dim = 0;       // dim N
  Eigen::Index arch_dim = 0;       // dim X/N
  Eigen::Index ideal_dim = 0;      // dim W
  Eigen::Index quotient_dim = 0;   // dim A/W
  Eigen::Index rep_dim = 0;
  double step2_angle = 0.0;        // span(X cap W) against N
  double theta_residual = 0.0;     // theta o P - phi
  double transfer_residual = 0.0;  // smallest singular value of T
  int step5_probes = 0;
  int step5_forward_failures = 0;
  int step5_backward_failures = 0;
  double arveson_margin = 0.0;
  double arveson_residual = 0.0;
};

struct ExtensionResult {
  CPMapCandidate psi;  // on whole_algebra(A), images of the standard basis
  double restriction_residual = 0.0;
  double moment_min_eig = 0.0;
  double margin = 0.0;  // optimal t in  sum_j Q_j (x) psi(h_j) - t I  psd
  ExtensionMethod method = ExtensionMethod::Direct;
  sdp::Status status = sdp::Status::Indeterminate;
  // on Infeasible: G psd, tr G = 1, orthogonal to the free directions, <fixed part, G> < 0
  CMat dual_gram;
  double dual_value = 0.0;
  double dual_residual = 0.0;
  PipelineTrace trace;
};

/// Block moment matrix [psi(b_i^* b_j)] over the standard basis of A.
CMat block_moment(const CPMapCandidate& psi);

ExtensionResult extend_cp_direct(const CPMapCandidate& phi, const Tolerances& tol = Tolerances::from_env());
ExtensionResult extend_cp_pipeline(const CPMapCandidate& phi, Rng& rng, const Tolerances& tol = Tolerances::from_env());

struct ExtensionReport {
  double restriction_residual = 0.0;
  double moment_min_eig = 0.0;
  bool brute_force_run = false;
  double brute_force_min = 0.0;  // smallest eigenvalue of psi_d over sampled cone elements
  bool ok = false;
};

ExtensionReport verify_extension(const CPMapCandidate& psi, const CPMapCandidate& phi, Rng& rng, int samples = 200,
                                 const Tolerances& tol = Tolerances::from_env());

}  // namespace qos
