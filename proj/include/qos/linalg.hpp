#pragma once

#include "qos/common.hpp"

namespace qos {

// Orthonormal basis (columns) for the column span of `vectors`, with the rank
// decided by singular values above tol * largest.
CMat orthonormal_basis(const CMat& vectors, double tol = kRankTol);
RMat orthonormal_basis(const RMat& vectors, double tol = kRankTol);

// Orthonormal basis of the right null space of `a`.
CMat null_space(const CMat& a, double tol = kRankTol);
RMat null_space(const RMat& a, double tol = kRankTol);

// Largest principal angle between the spans of two orthonormal bases.
// Spans of different dimension are at angle pi/2; two empty spans at 0.
double max_principal_angle(const CMat& u, const CMat& v);

// Distance of `x` from the span of orthonormal columns `basis`.
double distance_to_span(const CMat& basis, const CVec& x);

bool is_hermitian(const CMat& m, double tol);
CMat hermitian_part(const CMat& m);

// Standard embedding A + iB  ->  [[A, -B], [B, A]].
RMat realify(const CMat& h);
// Inverse pairing: Re tr(H * unrealify(Y)) == tr(realify(H) * Y).
CMat unrealify(const RMat& y);

double min_eigenvalue(const CMat& hermitian);
double max_eigenvalue(const CMat& hermitian);
double spectral_norm(const CMat& m);

}  // namespace qos
