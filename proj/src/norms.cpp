#include "qos/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qos/linalg.hpp"

namespace qos {

SeminormResult seminorm(const ConeContext& whole, const CVec& a, const Tolerances& tol) {
  const AlgebraPtr& alg = whole.ambient();
  if (a.size() != alg->dim()) throw QosError(ErrorKind::SizeMismatch, "element has wrong dimension");
  SeminormResult out;
  CVec aa = alg->multiply(alg->adjoint(a), a);
  RVec eta = frame_coords(whole, aa);
  SupportResult s = support(whole, eta, tol);
  if (s.status == sdp::Status::Unbounded) throw QosError(ErrorKind::Unbounded, "a^* a is not dominated by the unit");
  const double lambda = std::max(0.0, s.value);
  out.value = std::sqrt(lambda);

  const double delta = 1e-6 * std::max(1.0, out.value);
  const double up = (out.value + delta) * (out.value + delta);
  ConeDecision dec = cone_membership(whole, up * alg->unit() - aa, tol);
  // a nilpotent part needs Gram entries of order |a|^2 / delta
  for (double cap : {1e7, 1e10}) {
    if (dec.status == sdp::Status::Feasible) break;
    dec = cone_membership(whole, up * alg->unit() - aa, tol, cap);
  }
  out.witness = dec.certificate;
  out.witness_ok = dec.status == sdp::Status::Feasible;

  out.lower.gamma = s.gamma;
  out.lower.moment = whole.moment(s.gamma);
  out.lower.moment_min_eig = min_eigenvalue(out.lower.moment);
  // g((value - delta)^2 1 - a^* a) < 0 separates it from the cone
  const double down = out.value > delta ? (out.value - delta) * (out.value - delta) : 0.0;
  out.lower.value = down * s.gamma(0) - s.gamma.dot(eta);
  out.lower.strict = out.lower.moment_min_eig >= -tol.eps_psd && out.lower.value < 0.0;
  out.lower_ok = out.value <= delta || out.lower.strict;
  return out;
}

BoundednessWitness is_bounded(const ConeContext& whole, const CVec& x, const Tolerances& tol) {
  SeminormResult s = seminorm(whole, x, tol);
  BoundednessWitness out;
  out.bound = s.value + 1e-6 * std::max(1.0, s.value);
  out.certificate = s.witness;
  return out;
}

bool in_unit_ball(const ConeContext& whole, const CVec& x, const Tolerances& tol) {
  const AlgebraPtr& alg = whole.ambient();
  CVec z = alg->unit() - alg->multiply(alg->adjoint(x), x);
  ConeDecision dec = cone_membership(whole, z, tol);
  return dec.status == sdp::Status::Feasible || dec.in_closure;
}

namespace {

void require_realization(const AlgebraPtr& algebra, const CStarRealization& r) {
  AlgebraPtr a = algebra;
  while (a->base()) a = a->base();
  if (a->dim() != static_cast<Eigen::Index>(r.rep.size()))
    throw QosError(ErrorKind::AlgebraMismatch, "realization belongs to a different algebra");
}

}  // namespace

FunctionalBound functional_bound_exact(const LinearFunctional& f, const CStarRealization& r, const Tolerances& tol) {
  const SystemPtr& dom = f.domain;
  const AlgebraPtr& alg = dom->ambient;
  require_realization(alg, r);
  FunctionalBound out;
  out.maximizer = CVec::Zero(alg->dim());
  const Eigen::Index p = dom->dim();
  if (f.coeffs.norm() == 0.0) return out;

  std::vector<CMat> t(static_cast<size_t>(p));
  for (Eigen::Index k = 0; k < p; ++k) t[k] = represent_element(r, alg, dom->basis.col(k));
  const Eigen::Index d = t.empty() ? 0 : t[0].rows();

  // real variables (a_k, b_k) for x = sum (a_k + i b_k) x_k
  RMat tmap(2 * d * d, 2 * p);
  RVec obj(2 * p);
  for (Eigen::Index k = 0; k < p; ++k) {
    Eigen::Map<const CVec> v(t[k].data(), d * d);
    tmap.col(2 * k) << v.real(), v.imag();
    tmap.col(2 * k + 1) << -v.imag(), v.real();
    obj(2 * k) = f.coeffs(k).real();
    obj(2 * k + 1) = -f.coeffs(k).imag();
  }
  RMat ker = null_space(tmap);
  // kernel components at solver accuracy count as zero
  const double ker_tol = std::max(1e-9, 100.0 * tol.eps_psd);
  if (ker.cols() > 0 && (ker.transpose() * obj).norm() > ker_tol * obj.norm()) {
    out.unbounded = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  RMat comp = ker.cols() > 0 ? null_space(RMat(ker.transpose())) : RMat(RMat::Identity(2 * p, 2 * p));
  const Eigen::Index nv = comp.cols();
  if (nv == 0) return out;

  sdp::LmiProblem lmi(nv);
  int blk = lmi.add_block(CMat::Identity(2 * d, 2 * d));
  for (Eigen::Index v = 0; v < nv; ++v) {
    CMat tv = CMat::Zero(d, d);
    for (Eigen::Index k = 0; k < p; ++k) tv += Complex(comp(2 * k, v), comp(2 * k + 1, v)) * t[k];
    CMat blockm = CMat::Zero(2 * d, 2 * d);
    blockm.topRightCorner(d, d) = tv;
    blockm.bottomLeftCorner(d, d) = tv.adjoint();
    lmi.set(v, blk, blockm);
    lmi.objective(v) = obj.dot(comp.col(v));
  }
  sdp::LmiResult res = sdp::solve_lmi(lmi, tol);
  if (res.status != sdp::Status::Feasible)
    throw QosError(ErrorKind::Indeterminate, std::string("norm program ended ") + sdp::to_string(res.status));
  RVec ab = comp * res.y;
  for (Eigen::Index k = 0; k < p; ++k) out.maximizer += Complex(ab(2 * k), ab(2 * k + 1)) * dom->basis.col(k);
  out.value = std::max(0.0, res.value);
  return out;
}

FunctionalBound functional_bound(const LinearFunctional& f, const CStarRealization& r, const Tolerances& tol) {
  require_realization(f.domain->ambient, r);
  if (f.domain->self_adjoint && f.coeffs.norm() > 0.0 && f.is_self_adjoint(1e-9)) {
    ContextPtr ctx = make_context(f.domain, 1, GramSpan::Generated, tol);
    PositivityResult pos = functional_positive(f, *ctx, tol);
    if (pos.positive) {
      FunctionalBound out;
      out.value = f(f.domain->ambient->unit()).real();
      out.maximizer = f.domain->ambient->unit();
      out.positive_shortcut = true;
      return out;
    }
  }
  return functional_bound_exact(f, r, tol);
}

namespace {

LinearFunctional entry_functional(const CPMapCandidate& phi, const CVec& u, const CVec& v) {
  LinearFunctional f;
  f.domain = phi.domain;
  f.coeffs.resize(phi.domain->dim());
  for (Eigen::Index k = 0; k < phi.domain->dim(); ++k) f.coeffs(k) = (u.adjoint() * phi.images[k] * v)(0);
  return f;
}

}  // namespace

MapBound map_bound(const CPMapCandidate& phi, const CStarRealization& r, Rng& rng, int samples, const Tolerances& tol,
                   CpHint hint) {
  const SystemPtr& dom = phi.domain;
  const AlgebraPtr& alg = dom->ambient;
  require_realization(alg, r);
  const Eigen::Index d = phi.target_dim;
  const Eigen::Index p = dom->dim();
  MapBound out;

  bool zero = true;
  for (const auto& im : phi.images) zero = zero && im.norm() == 0.0;
  if (zero) return out;

  if (hint == CpHint::Unknown && dom->self_adjoint) {
    hint = is_completely_positive(phi, tol).completely_positive ? CpHint::Yes : CpHint::No;
  }
  if (hint == CpHint::Yes) {
    out.lower = out.upper = spectral_norm(phi(alg->unit()));
    out.cp_shortcut = true;
    return out;
  }

  // upper: || [ |||phi_ab||| ] ||
  RMat k(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) {
      FunctionalBound fb = functional_bound_exact(entry_functional(phi, CVec::Unit(d, a), CVec::Unit(d, b)), r, tol);
      if (fb.unbounded) {
        out.lower = out.upper = std::numeric_limits<double>::infinity();
        return out;
      }
      k(a, b) = fb.value;
    }
  out.upper = spectral_norm(k.cast<Complex>());

  // lower: ||phi(x)|| over ball elements, refined by alternating singular vectors
  auto score = [&](const CVec& x) {
    const double n = spectral_norm(represent_element(r, alg, x));
    if (n <= 1e-12) return 0.0;
    return spectral_norm(phi(x)) / std::max(1.0, n);
  };
  std::vector<CVec> starts{alg->unit()};
  for (int s = 0; s < samples; ++s) {
    CVec x = dom->basis * random_cvec(rng, p);
    const double n = spectral_norm(represent_element(r, alg, x));
    if (n > 1e-12) starts.push_back(x / n);
  }
  std::vector<std::pair<double, CVec>> scored;
  for (const auto& x : starts) scored.emplace_back(score(x), x);
  for (const auto& [s, x] : scored) out.lower = std::max(out.lower, s);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  const size_t refine = std::min<size_t>(3, scored.size());
  for (size_t i = 0; i < refine; ++i) {
    CVec x = scored[i].second;
    for (int it = 0; it < 8; ++it) {
      Eigen::JacobiSVD<CMat> svd(phi(x), Eigen::ComputeFullU | Eigen::ComputeFullV);
      FunctionalBound fb = functional_bound_exact(entry_functional(phi, svd.matrixU().col(0), svd.matrixV().col(0)), r, tol);
      if (fb.maximizer.norm() == 0.0) break;
      const double s = score(fb.maximizer);
      if (s <= out.lower * (1.0 + 1e-10) && it > 0) {
        out.lower = std::max(out.lower, s);
        break;
      }
      out.lower = std::max(out.lower, s);
      x = fb.maximizer;
    }
  }
  return out;
}

}  // namespace qos
