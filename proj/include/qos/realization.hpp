#pragma once

#include <vector>

#include "qos/algebra.hpp"
#include "qos/cone.hpp"

namespace qos {

/// W = {x : ||x||_A = 0} with the quotient A/W.
struct ReducingIdealData {
  AlgebraPtr algebra;
  CMat W_basis;        // orthonormal, coordinates of A
  CMat complement;     // orthonormal complement of W; representatives of A/W
  AlgebraPtr quotient;
  CMat pi;             // quotient map, dim(A/W) x dim(A)
  double route_angle = 0.0;  // largest principal angle between the two computations
  double max_seminorm = 0.0; // largest seminorm over W_basis
};

ReducingIdealData reducing_ideal(const AlgebraPtr& algebra, const Tolerances& tol = Tolerances::from_env());

/// Faithful GNS representation of A/W pulled back to A.
struct CStarRealization {
  ReducingIdealData ideal;
  RVec faithful_state;          // frame coordinates over the quotient's whole-algebra frame
  double state_min_eig = 0.0;   // lambda_min of its moment matrix
  std::vector<CMat> quotient_rep;  // rho(e_i) for the quotient basis
  std::vector<CMat> rep;           // rho(pi(b_i)) for the basis of A
  double homomorphism_error = 0.0;
  double norm_check = 0.0;
  bool injective = false;

  Eigen::Index rep_dim() const { return rep.empty() ? 0 : rep[0].rows(); }
};

CStarRealization cstar_realization(const ReducingIdealData& data, Rng& rng, int norm_probes = 20,
                                   const Tolerances& tol = Tolerances::from_env());

/// rho_n(z) for z in M_n(A) (n = 1 for A itself); z lives in amplify(A, n).
CMat represent(const CStarRealization& r, const CVec& z, int n = 1);
/// rho on an element of `algebra`, which is A or a (possibly nested) amplification of A.
CMat represent_element(const CStarRealization& r, const AlgebraPtr& algebra, const CVec& z);

}  // namespace qos
