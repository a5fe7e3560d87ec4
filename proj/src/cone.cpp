#include "qos/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qos/linalg.hpp"

namespace qos {

namespace {

constexpr double kFaceTol = 1e-7;
constexpr double kValueCap = 1e8;

// Real nullspace of gamma -> M(gamma) K, stacked real and imaginary parts.
RMat face_span(const std::vector<CMat>& moments, const CMat& kernel) {
  const auto w = static_cast<Eigen::Index>(moments.size());
  if (kernel.cols() == 0) return RMat::Identity(w, w);
  const Eigen::Index rows = moments[0].rows() * kernel.cols();
  RMat op(2 * rows, w);
  for (Eigen::Index j = 0; j < w; ++j) {
    CMat mk = moments[j] * kernel;
    Eigen::Map<const CVec> v(mk.data(), rows);
    op.col(j).head(rows) = v.real();
    op.col(j).tail(rows) = v.imag();
  }
  return null_space(op, kFaceTol);
}

}  // namespace

CMat ConeContext::moment(const RVec& gamma) const {
  CMat m = CMat::Zero(size(), size());
  for (Eigen::Index j = 0; j < gamma.size(); ++j)
    if (gamma(j) != 0.0) m += gamma(j) * moments[j];
  return hermitian_part(m);
}

ContextPtr make_context(const SystemPtr& system, int level, GramSpan span, const Tolerances& tol) {
  if (!system->self_adjoint) throw QosError(ErrorKind::NotSelfAdjoint, "cone context needs a self-adjoint system");
  auto ctx = std::make_shared<ConeContext>();
  ctx->base = system;
  ctx->level = level;
  ctx->system = matrix_system(system, level);
  const AlgebraPtr& alg = ctx->system->ambient;
  const CMat outer = span == GramSpan::Ambient ? CMat::Identity(alg->dim(), alg->dim()) : ctx->system->generated_basis;
  ctx->frame = make_frame(alg, ctx->system->basis, outer);

  const Eigen::Index w = ctx->frame.size();
  std::vector<CVec> h(w);
  for (Eigen::Index k = 0; k < w; ++k) h[k] = ctx->frame.basis.col(k);
  ctx->moments.assign(w, CMat::Zero(w, w));
  for (Eigen::Index k = 0; k < w; ++k)
    for (Eigen::Index l = 0; l < w; ++l) {
      CVec c = ctx->frame.coords(alg->multiply(h[k], h[l]));
      for (Eigen::Index j = 0; j < w; ++j) ctx->moments[j](k, l) = c(j);
    }
  for (auto& q : ctx->moments) q = hermitian_part(q);

  // Relative-interior state and the face of psd moment matrices.
  sdp::AffineFamily fam;
  fam.base = ctx->moments[0];
  for (Eigen::Index j = 1; j < w; ++j) fam.directions.push_back(ctx->moments[j]);
  fam.eq_matrix = RMat::Zero(0, w - 1);
  fam.eq_rhs = RVec::Zero(0);
  RVec f0 = RVec::Zero(w);
  f0(0) = 1.0;
  if (w > 1) {
    sdp::MaxMinEig mm = sdp::max_min_eig(fam, tol, 1e3);
    f0.tail(w - 1) = mm.point;
  }
  ctx->f0 = f0;
  CMat m0 = ctx->moment(f0);
  Eigen::SelfAdjointEigenSolver<CMat> es(m0);
  const double top = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::Index nk = 0;
  while (nk < w && es.eigenvalues()(nk) <= kFaceTol * top) ++nk;
  CMat kernel = es.eigenvectors().leftCols(nk);
  ctx->range = es.eigenvectors().rightCols(w - nk);
  ctx->face = face_span(ctx->moments, kernel);
  return ctx;
}

RVec frame_coords(const ConeContext& ctx, const CVec& z) {
  if (z.size() != ctx.ambient()->dim()) throw QosError(ErrorKind::SizeMismatch, "element has wrong dimension");
  const double scale = std::max(1.0, z.norm());
  if ((ctx.ambient()->adjoint(z) - z).norm() > 1e-10 * scale)
    throw QosError(ErrorKind::NotSelfAdjoint, "element is not self-adjoint");
  CVec c = ctx.frame.coords(z);
  if ((ctx.frame.basis * c - z).norm() > 1e-9 * scale)
    throw QosError(ErrorKind::NotInSpan, "element is outside the generated subalgebra");
  return c.real();
}

CVec gram_image(const ConeContext& ctx, const CMat& gram) {
  const Eigen::Index w = ctx.size();
  if (gram.rows() != w || gram.cols() != w) throw QosError(ErrorKind::SizeMismatch, "Gram matrix must match the frame");
  // sum_kl G_kl h_k h_l = sum_j tr(Q_j G^T) h_j
  CVec c(w);
  for (Eigen::Index j = 0; j < w; ++j) c(j) = (ctx.moments[j].array() * gram.array()).sum();
  return ctx.frame.basis * c;
}

namespace {

double min_eig_or_zero(const CMat& m) { return m.size() ? min_eigenvalue(hermitian_part(m)) : 0.0; }

// least-norm hermitian correction so that the frame coordinates of the image equal eta
CMat polish(const ConeContext& ctx, CMat gram, const RVec& eta) {
  const Eigen::Index w = ctx.size();
  RMat k(w, w);
  for (Eigen::Index i = 0; i < w; ++i)
    for (Eigen::Index j = 0; j < w; ++j) k(i, j) = (ctx.moments[i].array() * ctx.moments[j].transpose().array()).sum().real();
  const auto solver = k.completeOrthogonalDecomposition();
  for (int round = 0; round < 2; ++round) {
    RVec r(w);
    for (Eigen::Index j = 0; j < w; ++j) r(j) = eta(j) - (ctx.moments[j].array() * gram.array()).sum().real();
    const RVec alpha = solver.solve(r);
    for (Eigen::Index j = 0; j < w; ++j) gram += alpha(j) * ctx.moments[j].transpose();
    gram = hermitian_part(gram);
  }
  return gram;
}

}  // namespace

SupportResult support(const ConeContext& ctx, const RVec& eta, const Tolerances& tol) {
  const Eigen::Index w = ctx.size();
  const Eigen::Index r = ctx.range.cols();
  SupportResult out;
  out.gamma = RVec::Zero(w);
  out.gamma(0) = 1.0;

  // gamma = f0 + face * beta with beta(face component along f0 direction) free;
  // gamma_0 = 1 pins the scale.
  const RMat& face = ctx.face;
  const Eigen::Index nb = face.cols();
  sdp::LmiProblem lmi(nb);
  CMat u = ctx.range;
  int blk = lmi.add_block(u.adjoint() * ctx.moment(ctx.f0) * u);
  std::vector<CMat> reduced(w);
  for (Eigen::Index j = 0; j < w; ++j) reduced[j] = u.adjoint() * ctx.moments[j] * u;
  for (Eigen::Index b = 0; b < nb; ++b) {
    CMat f = CMat::Zero(r, r);
    for (Eigen::Index j = 0; j < w; ++j)
      if (face(j, b) != 0.0) f += face(j, b) * reduced[j];
    lmi.set(b, blk, hermitian_part(f));
    lmi.objective(b) = eta.dot(face.col(b));
  }
  RVec row = face.row(0).transpose();
  lmi.add_equality(row, 0.0);
  const double scale = std::max(1.0, eta.norm());
  int cap = lmi.add_block(kValueCap * scale * CMat::Ones(1, 1) - eta.dot(ctx.f0) * CMat::Ones(1, 1));
  for (Eigen::Index b = 0; b < nb; ++b) lmi.set(b, cap, -lmi.objective(b) * CMat::Ones(1, 1));

  sdp::LmiResult res = sdp::solve_lmi(lmi, tol);
  out.status = res.status;
  if (res.status == sdp::Status::Unbounded) {
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.gamma = ctx.f0 + face * res.y;
  out.value = eta.dot(out.gamma);
  if (out.value >= 0.99 * kValueCap * scale) {
    out.status = sdp::Status::Unbounded;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  CMat x = u * res.multipliers[blk] * u.adjoint();
  out.gram = x.transpose();
  // value*1 - h agrees with the certificate on the face
  CVec diff = ctx.frame.coords(gram_image(ctx, out.gram));
  RVec target = -eta;
  target(0) += out.value;
  RVec d = diff.real() - target;
  out.residual = (face.transpose() * d).norm() + diff.imag().norm();
  return out;
}

ConeDecision cone_membership(const ConeContext& ctx, const CVec& z, const Tolerances& tol, double trace_cap) {
  ConeDecision out;
  RVec eta = frame_coords(ctx, z);
  if (!ctx.system->contains(z, 1e-9 * std::max(1.0, z.norm())))
    throw QosError(ErrorKind::NotInSpan, "element is outside the system");
  const Eigen::Index w = ctx.size();
  if (z.norm() == 0.0) {
    out.status = sdp::Status::Feasible;
    out.certificate.gram = CMat::Zero(w, w);
    return out;
  }
  const double scale = std::max(1.0, z.norm());

  // min kappa s.t. kappa 1 + z = gram_image(G), G psd, tr G <= R scale;
  // dual: max g(-z) - R scale mu s.t. M(g) + mu I psd, mu >= 0, g(1) = 1.
  sdp::LmiProblem lmi(w);  // gamma_1..gamma_{w-1}, mu
  int blk = lmi.add_block(ctx.moments[0]);
  for (Eigen::Index j = 1; j < w; ++j) {
    lmi.set(j - 1, blk, ctx.moments[j]);
    lmi.objective(j - 1) = -eta(j);
  }
  // mu enters scaled by the cap so the objective stays well balanced
  lmi.set(w - 1, blk, CMat::Identity(w, w) / (trace_cap * scale));
  int mu = lmi.add_block(CMat::Zero(1, 1));
  lmi.set(w - 1, mu, CMat::Ones(1, 1));
  lmi.objective(w - 1) = -1.0;
  sdp::LmiResult res = sdp::solve_lmi(lmi, tol);
  if (res.status != sdp::Status::Feasible) {
    out.status = sdp::Status::Indeterminate;
    return out;
  }
  CMat g = res.multipliers[blk].transpose();
  CVec img = gram_image(ctx, g);
  // kappa 1 + z = gram_image(G)
  const double k = ctx.frame.coords(img - z)(0).real();
  out.margin = k;
  if (k <= tol.eps_psd * scale) {
    CMat cert = g;
    cert(0, 0) -= k;
    out.certificate.gram = polish(ctx, hermitian_part(cert), eta);
    out.certificate.residual = (gram_image(ctx, out.certificate.gram) - z).norm();
    out.certificate.min_eig = min_eig_or_zero(out.certificate.gram);
    if (out.certificate.residual <= tol.eps_affine * scale && out.certificate.min_eig >= -tol.eps_psd * scale) {
      out.status = sdp::Status::Feasible;
      return out;
    }
    out.status = sdp::Status::Indeterminate;
    return out;
  }

  // Not in the cone. Prefer a strictly separating state from the closure.
  RVec neg = -eta;
  SupportResult sr = support(ctx, neg, tol);
  if (sr.status == sdp::Status::Feasible && sr.value > tol.eps_margin * scale) {
    out.dual.gamma = sr.gamma;
    out.dual.moment = ctx.moment(sr.gamma);
    out.dual.value = eta.dot(sr.gamma);
    out.dual.moment_min_eig = min_eigenvalue(out.dual.moment);
    out.dual.strict = out.dual.moment_min_eig >= -tol.eps_psd && out.dual.value <= -tol.eps_margin;
    out.status = sdp::Status::Infeasible;
    return out;
  }
  // Boundary case: z lies in the closure but needs unbounded Gram certificates.
  RVec gamma = RVec::Zero(w);
  gamma(0) = 1.0;
  gamma.tail(w - 1) = res.y.head(w - 1);
  out.dual.gamma = gamma;
  out.dual.moment = ctx.moment(gamma);
  out.dual.value = eta.dot(gamma);
  out.dual.moment_min_eig = min_eigenvalue(out.dual.moment);
  out.dual.strict = false;
  out.in_closure = true;
  out.status = sdp::Status::Infeasible;
  return out;
}

bool archimedean_membership(const ConeContext& ctx, const CVec& z, double eps_unit, const Tolerances& tol) {
  RVec eta = frame_coords(ctx, z);
  SupportResult sr = support(ctx, -eta, tol);
  if (sr.status == sdp::Status::Indeterminate)
    throw QosError(ErrorKind::Indeterminate, "support problem did not converge");
  return sr.value <= eps_unit;
}

NullSpaceData order_null_space(const ContextPtr& ctx) {
  NullSpaceData out;
  out.context = ctx;
  out.relative_interior = ctx->f0;
  out.basis_span_states = ctx->face;
  const Eigen::Index k = ctx->inner_dim();
  RMat lk = ctx->face.topRows(k);
  RMat z = null_space(RMat(lk.transpose()), kFaceTol);
  if (z.cols() == 0) {
    out.basis_N = CMat::Zero(ctx->ambient()->dim(), 0);
    return out;
  }
  CMat elems = ctx->frame.basis.leftCols(k) * z.cast<Complex>();
  out.basis_N = orthonormal_basis(elems);
  return out;
}

bool is_order_unit(const ConeContext& ctx, double cap, const Tolerances& tol) {
  const Eigen::Index w = ctx.size();
  for (Eigen::Index j = 1; j < ctx.inner_dim(); ++j)
    for (double sign : {1.0, -1.0}) {
      // max g(sign h_j) over states, capped
      sdp::LmiProblem lmi(w);
      int blk = lmi.add_block(CMat::Zero(w, w));
      for (Eigen::Index i = 0; i < w; ++i) lmi.set(i, blk, ctx.moments[i]);
      RVec row = RVec::Zero(w);
      row(0) = 1.0;
      lmi.add_equality(row, 1.0);
      int cb = lmi.add_block(cap * CMat::Ones(1, 1));
      lmi.set(j, cb, -sign * CMat::Ones(1, 1));
      lmi.objective(j) = sign;
      sdp::LmiResult r = sdp::solve_lmi(lmi, tol);
      if (r.status == sdp::Status::Unbounded) return false;
      if (r.status == sdp::Status::Feasible && r.value >= 0.99 * cap) return false;
    }
  return true;
}

CVec compress(const AlgebraPtr& base, const CVec& z, int n, const CMat& lambda) {
  const Eigen::Index m = base->dim();
  const auto mm = static_cast<int>(lambda.cols());
  if (lambda.rows() != n) throw QosError(ErrorKind::SizeMismatch, "Lambda must have n rows");
  if (z.size() != static_cast<Eigen::Index>(n) * n * m) throw QosError(ErrorKind::SizeMismatch, "element is not in M_n(A)");
  CVec out = CVec::Zero(static_cast<Eigen::Index>(mm) * mm * m);
  for (int p = 0; p < mm; ++p)
    for (int q = 0; q < mm; ++q)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Complex c = std::conj(lambda(i, p)) * lambda(j, q);
          if (c == Complex(0.0)) continue;
          out.segment((p * mm + q) * m, m) += c * z.segment((i * n + j) * m, m);
        }
  return out;
}

CVec random_cone_element(const ConeContext& ctx, Rng& rng, Eigen::Index rank) {
  return gram_image(ctx, random_psd(rng, ctx.size(), rank));
}

bool compatibility_check(const AlgebraPtr& algebra, int n, int m, const CMat& lambda, int trials, Rng& rng,
                         const Tolerances& tol) {
  auto whole = whole_algebra(algebra);
  return compatibility_check(*make_context(whole, n, GramSpan::Generated, tol), *make_context(whole, m, GramSpan::Generated, tol),
                             lambda, trials, rng, tol);
}

bool compatibility_check(const ConeContext& cn, const ConeContext& cm, const CMat& lambda, int trials, Rng& rng,
                         const Tolerances& tol) {
  if (lambda.rows() != cn.level || lambda.cols() != cm.level || cn.base->ambient != cm.base->ambient)
    throw QosError(ErrorKind::LevelMismatch, "contexts do not match the compression");
  const AlgebraPtr& algebra = cn.base->ambient;
  for (int t = 0; t < trials; ++t) {
    CVec z = random_cone_element(cn, rng);
    CVec y = compress(algebra, z, cn.level, lambda);
    if (cone_membership(cm, y, tol).status != sdp::Status::Feasible) return false;
  }
  return true;
}

}  // namespace qos
