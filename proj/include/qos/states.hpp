#pragma once

#include <string>
#include <vector>

#include "qos/algebra.hpp"
#include "qos/cone.hpp"

namespace qos {

struct CStarRealization;

/// f on a system, stored by its values on the system's orthonormal basis.
struct LinearFunctional {
  SystemPtr domain;
  CVec coeffs;

  Complex operator()(const CVec& z) const;
  bool is_self_adjoint(double tol = 1e-10) const;
};

/// phi : X -> M_d by the images of the basis of X.
struct CPMapCandidate {
  SystemPtr domain;
  Eigen::Index target_dim = 0;
  std::vector<CMat> images;

  CMat operator()(const CVec& z) const;
  /// phi_n on an element of M_n(X) (n read from the size of z).
  CMat amplified(const CVec& z) const;
  bool is_unital(double tol = 1e-10) const;
  bool is_self_adjoint(double tol = 1e-10) const;
};

/// phi_n as a map on M_n(X) into M_{nd}.
CPMapCandidate amplify_map(const CPMapCandidate& phi, int n);

/// f_phi on M_n(X), n = target_dim.
LinearFunctional map_to_functional(const CPMapCandidate& phi);
/// phi_f : X -> M_n for f on M_n(X).
CPMapCandidate functional_to_map(const LinearFunctional& f, const SystemPtr& base, int n);

struct PositivityResult {
  bool positive = false;
  bool self_adjoint = true;
  double value = 0.0;   // min f(z) over z = gram_image(G), G psd, tr G = 1, z in the system
  RVec extension;       // frame values with moment >= value * I agreeing with f on the system
  CMat moment;
  CMat gram;            // minimizer; its image is a cone element where f attains value
  sdp::Status status = sdp::Status::Indeterminate;
};

/// f must live on ctx.system.
PositivityResult functional_positive(const LinearFunctional& f, const ConeContext& ctx,
                                     const Tolerances& tol = Tolerances::from_env());

struct CPResult {
  bool completely_positive = false;
  PositivityResult detail;
  LinearFunctional f_phi;
  CVec violating;  // element of M_d(X)^+ with f_phi < 0 when rejected
};

/// ctx must be a context of phi.domain at level target_dim.
CPResult is_completely_positive(const CPMapCandidate& phi, const ConeContext& ctx,
                                const Tolerances& tol = Tolerances::from_env());
CPResult is_completely_positive(const CPMapCandidate& phi, const Tolerances& tol = Tolerances::from_env());

struct StateExtension {
  LinearFunctional extension;  // on the whole algebra
  double margin = 0.0;         // lambda_min of the extension's moment matrix
  double restriction_residual = 0.0;
  sdp::Status status = sdp::Status::Indeterminate;
};

StateExtension extend_state(const LinearFunctional& f, const Tolerances& tol = Tolerances::from_env());

/// phi~(x + y^*) = phi(x) + phi(y)^* on X + X^*.
CPMapCandidate symmetrized_extension(const CPMapCandidate& phi, const CStarRealization& r, Rng& rng,
                                     const Tolerances& tol = Tolerances::from_env());

enum class Verdict { Contractive, NotContractive, Inconclusive };
const char* to_string(Verdict v);

struct ContractivityReport {
  Verdict complete = Verdict::Inconclusive;   // levels up to min(n + 1, 3)
  Verdict n_contractive = Verdict::Inconclusive;
  Verdict functional = Verdict::Inconclusive;
  double functional_bound = 0.0;
  double map_lower = 0.0;
  double map_upper = 0.0;
  bool consistent = false;
};

ContractivityReport contractivity_equivalence_check(const CPMapCandidate& phi, const CStarRealization& r, Rng& rng,
                                                    const Tolerances& tol = Tolerances::from_env());

}  // namespace qos
