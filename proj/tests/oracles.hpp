#pragma once

#include <string>
#include <vector>

#include "qos/algebra.hpp"
#include "qos/states.hpp"

namespace oracle {

using namespace qos;

// Hand-written faithful representations of the quotients of the fixtures.
inline CMat rep(const std::string& name, const CVec& c) {
  if (name == "ALG_C") return CMat::Constant(1, 1, c(0));
  if (name == "ALG_NIL") return CMat::Constant(1, 1, c(0));
  if (name == "ALG_Z2") {
    CMat m = CMat::Zero(2, 2);
    m(0, 0) = c(0) + c(1);
    m(1, 1) = c(0) - c(1);
    return m;
  }
  if (name == "ALG_M2") {
    CMat m(2, 2);
    m << c(0), c(1), c(2), c(3);
    return m;
  }
  if (name == "ALG_M2_NIL") {
    CMat m = CMat::Zero(3, 3);
    m.topLeftCorner(2, 2) = rep("ALG_M2", c.head(4));
    m(2, 2) = c(4);
    return m;
  }
  throw std::runtime_error("no oracle for " + name);
}

inline Eigen::Index rep_dim(const std::string& name) { return rep(name, CVec::Zero(fixtures::by_name(name)->dim())).rows(); }

// Block matrix rho_n(z) for z in M_n(A).
inline CMat rep_n(const std::string& name, const CVec& z, int n) {
  const Eigen::Index m = fixtures::by_name(name)->dim();
  const Eigen::Index d = rep_dim(name);
  CMat out(n * d, n * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.block(i * d, j * d, d, d) = rep(name, z.segment((i * n + j) * m, m));
  return out;
}

inline CMat random_density(Rng& rng, Eigen::Index d) {
  CMat p = random_psd(rng, d);
  return p / p.trace().real();
}

// a -> tr(D rho(a)) on the given system
inline LinearFunctional state(const std::string& name, const SystemPtr& sys, const CMat& density) {
  LinearFunctional f;
  f.domain = sys;
  f.coeffs.resize(sys->dim());
  for (Eigen::Index k = 0; k < sys->dim(); ++k) f.coeffs(k) = (density * rep(name, sys->basis.col(k))).trace();
  return f;
}

// x -> sum_k V_k rho(x) V_k^*
inline CPMapCandidate stinespring(const std::string& name, const SystemPtr& sys, const std::vector<CMat>& kraus) {
  CPMapCandidate phi;
  phi.domain = sys;
  phi.target_dim = kraus.front().rows();
  for (Eigen::Index k = 0; k < sys->dim(); ++k) {
    CMat r = rep(name, sys->basis.col(k));
    CMat img = CMat::Zero(phi.target_dim, phi.target_dim);
    for (const auto& v : kraus) img += v * r * v.adjoint();
    phi.images.push_back(img);
  }
  return phi;
}

inline std::vector<CMat> random_kraus(Rng& rng, Eigen::Index d, Eigen::Index r, int count, bool unital) {
  std::vector<CMat> ks;
  for (int i = 0; i < count; ++i) ks.push_back(random_cmat(rng, d, r));
  if (unital) {
    CMat s = CMat::Zero(d, d);
    for (const auto& k : ks) s += k * k.adjoint();
    Eigen::SelfAdjointEigenSolver<CMat> es(s);
    CMat isq = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    for (auto& k : ks) k = isq * k;
  }
  return ks;
}

// Random unital system of the given dimension inside A (spanned by 1 and random self-adjoint elements).
inline SystemPtr random_system(const AlgebraPtr& a, Rng& rng, int extra) {
  CMat v(a->dim(), extra);
  for (int k = 0; k < extra; ++k) {
    CVec x = random_cvec(rng, a->dim());
    v.col(k) = x + a->adjoint(x);
  }
  return build_system(a, v);
}

}  // namespace oracle
