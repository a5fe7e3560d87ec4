#pragma once

#include <map>
#include <optional>
#include <vector>

#include "qos/cone.hpp"
#include "qos/states.hpp"

namespace qos {

/// X_Arch = X / N with cones C_n = D_n + N_n and unit 1 + N.
struct ArchimedeanizationData {
  SystemPtr source;
  CMat null_basis;       // orthonormal, ambient coordinates
  CMat quotient_basis;   // orthonormal complement of N in X, ambient coordinates
  CMat P;                // quotient map on coordinates over source->basis
  CVec unit;             // P(1)
  std::map<int, ContextPtr> level_cache;
  bool full = false;          // sa part of X is spanned by its cone
  bool proper = false;        // C_1 and -C_1 meet only in 0 on probes
  bool archimedean = false;   // boundary probes h + r 1 in C_1 for all r force h in C_1

  Eigen::Index quotient_dim() const { return quotient_basis.cols(); }
  /// Ambient representative of a quotient element (quotient coordinates, level n).
  CVec lift(const CVec& zq, int n = 1) const;
  /// P_n on an element of M_n(X) in ambient coordinates.
  CVec project(const CVec& z, int n = 1) const;
};

ArchimedeanizationData archimedeanize(const SystemPtr& source, int levels = 1,
                                      const Tolerances& tol = Tolerances::from_env());
ArchimedeanizationData archimedeanize(const AlgebraPtr& source, int levels = 1,
                                      const Tolerances& tol = Tolerances::from_env());

ContextPtr level_context(const ArchimedeanizationData& data, int n, const Tolerances& tol = Tolerances::from_env());

struct ArchDecision {
  bool member = false;
  double support = 0.0;  // max over states of g(-z); member iff <= eps_unit
  RVec gamma;            // the maximizing state
};

/// zq in M_n(X_Arch), coordinates (i*n + j) * quotient_dim + k.
ArchDecision arch_cone_membership(const ArchimedeanizationData& data, const CVec& zq, int n = 1,
                                  double eps_unit = 1e-8, const Tolerances& tol = Tolerances::from_env());

/// phi~ on X_Arch with phi~ o P = phi.
struct InducedMap {
  std::vector<CMat> images;  // phi~ on the quotient basis
  Eigen::Index target_dim = 0;
  double factor_residual = 0.0;  // max || phi~(P x_k) - phi(x_k) ||

  CMat operator()(const CVec& zq) const;
};

/// Largest violation of phi(N) = 0 and the null vector attaining it.
std::optional<CVec> null_space_violation(const CPMapCandidate& phi, const ArchimedeanizationData& data,
                                         double tol = 1e-8);

InducedMap induced_map(const CPMapCandidate& phi, const ArchimedeanizationData& data);

}  // namespace qos
