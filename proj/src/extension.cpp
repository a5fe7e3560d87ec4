#include "qos/extension.hpp"

#include <algorithm>
#include <cmath>

#include "qos/linalg.hpp"

namespace qos {

const char* to_string(ExtensionMethod m) { return m == ExtensionMethod::Direct ? "direct" : "pipeline"; }

namespace {

std::vector<CMat> hermitian_basis(Eigen::Index d) {
  std::vector<CMat> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index a = 0; a < d; ++a) {
    CMat e = CMat::Zero(d, d);
    e(a, a) = 1.0;
    out.push_back(e);
    for (Eigen::Index b = a + 1; b < d; ++b) {
      CMat re = CMat::Zero(d, d), im = CMat::Zero(d, d);
      re(a, b) = re(b, a) = s;
      im(a, b) = Complex(0.0, -s);
      im(b, a) = Complex(0.0, s);
      out.push_back(re);
      out.push_back(im);
    }
  }
  return out;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

struct ArvesonStep {
  CPMapCandidate psi;
  double margin = 0.0;
  sdp::Status status = sdp::Status::Indeterminate;
  CMat dual_gram;
  double dual_value = 0.0;
  double dual_residual = 0.0;
};

// psi on the whole ambient algebra of X with psi = phi on X and sum_j Q_j (x) psi(h_j) psd
ArvesonStep arveson(const SystemPtr& x, const std::vector<CMat>& phi_on_basis, Eigen::Index d, const Tolerances& tol) {
  ContextPtr ctx = make_context(x, 1, GramSpan::Ambient, tol);
  const Eigen::Index w = ctx->size();
  const Eigen::Index k = ctx->inner_dim();
  auto phi_at = [&](const CVec& z) {
    CVec c = x->coordinates(z);
    CMat out = CMat::Zero(d, d);
    for (Eigen::Index i = 0; i < c.size(); ++i) out += c(i) * phi_on_basis[i];
    return out;
  };
  std::vector<CMat> psi_frame(static_cast<size_t>(w), CMat::Zero(d, d));
  CMat fixed = CMat::Zero(w * d, w * d);
  for (Eigen::Index j = 0; j < k; ++j) {
    psi_frame[j] = hermitian_part(phi_at(ctx->frame.basis.col(j)));
    fixed += kron(ctx->moments[j], psi_frame[j]);
  }
  fixed = hermitian_part(fixed);

  ArvesonStep out;
  const auto herm = hermitian_basis(d);
  const auto nh = static_cast<Eigen::Index>(herm.size());
  const Eigen::Index free = (w - k) * nh;
  if (free == 0) {
    Eigen::SelfAdjointEigenSolver<CMat> es(fixed);
    out.margin = es.eigenvalues()(0);
    CVec v = es.eigenvectors().col(0);
    out.dual_gram = v * v.adjoint();
  } else {
    sdp::LmiProblem lmi(free + 1);
    int blk = lmi.add_block(fixed);
    for (Eigen::Index j = k; j < w; ++j)
      for (Eigen::Index r = 0; r < nh; ++r) lmi.set((j - k) * nh + r, blk, kron(ctx->moments[j], herm[r]));
    lmi.set(free, blk, -CMat::Identity(w * d, w * d));
    lmi.objective(free) = 1.0;
    sdp::LmiResult res = sdp::solve_lmi(lmi, tol);
    if (res.status != sdp::Status::Feasible) {
      out.status = res.status;
      return out;
    }
    out.margin = res.y(free);
    for (Eigen::Index j = k; j < w; ++j)
      for (Eigen::Index r = 0; r < nh; ++r) psi_frame[j] += res.y((j - k) * nh + r) * herm[r];
    out.dual_gram = res.multipliers[blk];
  }
  const double scale = std::max(1.0, fixed.norm());
  out.status = out.margin >= -tol.eps_psd * scale ? sdp::Status::Feasible : sdp::Status::Infeasible;
  if (out.status == sdp::Status::Infeasible) {
    CMat g = hermitian_part(out.dual_gram);
    g /= g.trace().real();
    out.dual_gram = g;
    out.dual_value = (fixed * g).trace().real();
    for (Eigen::Index j = k; j < w; ++j)
      for (const auto& h : herm)
        out.dual_residual = std::max(out.dual_residual, std::abs((kron(ctx->moments[j], h) * g).trace()));
  }

  // psi(b_i) = sum_j c_j(b_i) psi(h_j)
  const AlgebraPtr& alg = x->ambient;
  out.psi.domain = whole_algebra(alg);
  out.psi.target_dim = d;
  for (Eigen::Index i = 0; i < alg->dim(); ++i) {
    CMat img = CMat::Zero(d, d);
    for (Eigen::Index j = 0; j < w; ++j) img += ctx->frame.coordinate_map(j, i) * psi_frame[j];
    out.psi.images.push_back(img);
  }
  return out;
}

double restriction_residual(const CPMapCandidate& psi, const CPMapCandidate& phi) {
  double r = 0.0;
  for (Eigen::Index k = 0; k < phi.domain->dim(); ++k) {
    CVec x = phi.domain->basis.col(k);
    r = std::max(r, (psi(x) - phi.images[k]).norm());
  }
  return r;
}

void finish(ExtensionResult& out, const ArvesonStep& step, const CPMapCandidate& phi) {
  out.status = step.status;
  out.margin = step.margin;
  out.dual_gram = step.dual_gram;
  out.dual_value = step.dual_value;
  out.dual_residual = step.dual_residual;
  if (step.psi.images.empty()) return;
  out.restriction_residual = restriction_residual(out.psi, phi);
  out.moment_min_eig = min_eigenvalue(hermitian_part(block_moment(out.psi)));
}

}  // namespace

CMat block_moment(const CPMapCandidate& psi) {
  const AlgebraPtr& alg = psi.domain->ambient;
  const Eigen::Index m = alg->dim();
  const Eigen::Index d = psi.target_dim;
  CMat out(m * d, m * d);
  for (Eigen::Index i = 0; i < m; ++i) {
    CVec bi = alg->adjoint(alg->basis_vector(i));
    for (Eigen::Index j = 0; j < m; ++j) out.block(i * d, j * d, d, d) = psi(alg->multiply(bi, alg->basis_vector(j)));
  }
  return out;
}

ExtensionResult extend_cp_direct(const CPMapCandidate& phi, const Tolerances& tol) {
  if (!phi.domain->self_adjoint) throw QosError(ErrorKind::NotSelfAdjoint, "domain must be an operator system");
  ExtensionResult out;
  out.method = ExtensionMethod::Direct;
  ArvesonStep step = arveson(phi.domain, phi.images, phi.target_dim, tol);
  out.psi = step.psi;
  finish(out, step, phi);
  return out;
}

ExtensionResult extend_cp_pipeline(const CPMapCandidate& phi, Rng& rng, const Tolerances& tol) {
  if (!phi.domain->self_adjoint) throw QosError(ErrorKind::NotSelfAdjoint, "domain must be an operator system");
  ExtensionResult out;
  out.method = ExtensionMethod::Pipeline;
  PipelineTrace& tr = out.trace;
  const SystemPtr& x = phi.domain;
  const AlgebraPtr& alg = x->ambient;
  const Eigen::Index d = phi.target_dim;

  // Step 1: X_Arch and theta with theta o P = phi
  ArchimedeanizationData arch = archimedeanize(x, 2, tol);
  InducedMap theta = induced_map(phi, arch);
  tr.null_dim = arch.null_basis.cols();
  tr.arch_dim = arch.quotient_dim();
  tr.theta_residual = theta.factor_residual;

  // Step 2: reducing ideal and span(X cap W) = N
  ReducingIdealData ideal = reducing_ideal(alg, tol);
  tr.ideal_dim = ideal.W_basis.cols();
  tr.quotient_dim = ideal.quotient->dim();
  CMat off_w = x->basis - ideal.W_basis * (ideal.W_basis.adjoint() * x->basis);
  CMat cap = null_space(off_w, 1e-8);
  CMat x_cap_w = cap.cols() ? orthonormal_basis(CMat(x->basis * cap)) : CMat::Zero(alg->dim(), 0);
  tr.step2_angle = max_principal_angle(x_cap_w, arch.null_basis);

  // T : X/N -> (X + W)/W, T(x + N) = pi(x)
  CMat t_map = ideal.pi * arch.quotient_basis;
  if (t_map.cols() > 0) {
    Eigen::JacobiSVD<CMat> svd(t_map);
    tr.transfer_residual = svd.singularValues().minCoeff();
  }

  // Step 3: realization of A/W
  CStarRealization r = cstar_realization(ideal, rng, 0, tol);
  tr.rep_dim = r.rep_dim();

  // Step 5 probes: T_n and T_n^{-1} preserve cones
  const AlgebraPtr& b = ideal.quotient;
  for (int n = 1; n <= 2; ++n) {
    ContextPtr xn = level_context(arch, n, tol);
    const Eigen::Index rd = r.rep_dim();
    auto rho_n = [&](const CVec& y) {
      CMat out = CMat::Zero(n * rd, n * rd);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (Eigen::Index l = 0; l < b->dim(); ++l)
            out.block(i * rd, j * rd, rd, rd) += y((i * n + j) * b->dim() + l) * r.quotient_rep[l];
      return out;
    };
    const Eigen::Index q = arch.quotient_dim();
    auto t_n = [&](const CVec& zq) {
      CVec y(static_cast<Eigen::Index>(n) * n * b->dim());
      for (int blk = 0; blk < n * n; ++blk) y.segment(blk * b->dim(), b->dim()) = t_map * zq.segment(blk * q, q);
      return y;
    };
    CMat t_pinv = t_map.completeOrthogonalDecomposition().pseudoInverse();
    auto t_inv = [&](const CVec& y) {
      CVec zq(static_cast<Eigen::Index>(n) * n * q);
      for (int blk = 0; blk < n * n; ++blk) zq.segment(blk * q, q) = t_pinv * y.segment(blk * b->dim(), b->dim());
      return zq;
    };
    for (int probe = 0; probe < 5; ++probe) {
      ++tr.step5_probes;
      std::uniform_real_distribution<double> margin(0.0, 1e-3);
      // forward: z = s 1 + h in D_n, T_n P_n z psd in M_n(B)
      CVec h = xn->system->basis * random_cvec(rng, xn->system->dim());
      h = h + xn->ambient()->adjoint(h);
      RVec eta = frame_coords(*xn, h);
      const double s = support(*xn, -eta, tol).value + margin(rng);
      CVec z = h + s * xn->ambient()->unit();
      CMat img = rho_n(t_n(arch.project(z, n)));
      if (min_eigenvalue(hermitian_part(img)) < -1e-7 * std::max(1.0, img.norm())) ++tr.step5_forward_failures;
      // backward: y = s 1 + T_n P_n h psd, T_n^{-1} y in C_n
      CVec yh = t_n(arch.project(h, n));
      const double sb = -min_eigenvalue(hermitian_part(rho_n(yh))) + margin(rng);
      CVec y = yh + sb * t_n(arch.project(xn->ambient()->unit(), n));
      if (!arch_cone_membership(arch, t_inv(y), n, 1e-7, tol).member) ++tr.step5_backward_failures;
    }
  }

  // Step 4: Arveson step on pi(X) inside A/W
  CMat y_vectors = ideal.pi * x->basis;
  SystemPtr y_sys = build_system(b, y_vectors);
  CMat pre = y_vectors.completeOrthogonalDecomposition().pseudoInverse();
  std::vector<CMat> on_y;
  for (Eigen::Index k = 0; k < y_sys->dim(); ++k) {
    CVec c = pre * y_sys->basis.col(k);  // coordinates over X of a preimage
    CMat img = CMat::Zero(d, d);
    for (Eigen::Index i = 0; i < c.size(); ++i) img += c(i) * phi.images[i];
    on_y.push_back(img);
  }
  ArvesonStep step = arveson(y_sys, on_y, d, tol);
  tr.arveson_margin = step.margin;
  if (!step.psi.images.empty()) {
    CPMapCandidate on_y_map;
    on_y_map.domain = y_sys;
    on_y_map.target_dim = d;
    on_y_map.images = on_y;
    tr.arveson_residual = restriction_residual(step.psi, on_y_map);
    // Step 6: psi = psi~ o pi
    out.psi.domain = whole_algebra(alg);
    out.psi.target_dim = d;
    for (Eigen::Index i = 0; i < alg->dim(); ++i) {
      CMat img = CMat::Zero(d, d);
      for (Eigen::Index j = 0; j < b->dim(); ++j) img += ideal.pi(j, i) * step.psi.images[j];
      out.psi.images.push_back(img);
    }
  }
  finish(out, step, phi);
  return out;
}

ExtensionReport verify_extension(const CPMapCandidate& psi, const CPMapCandidate& phi, Rng& rng, int samples,
                                 const Tolerances& tol) {
  if (phi.domain->dim() == 0) throw QosError(ErrorKind::SizeMismatch, "empty domain");
  ExtensionReport out;
  out.restriction_residual = restriction_residual(psi, phi);
  out.moment_min_eig = min_eigenvalue(hermitian_part(block_moment(psi)));
  const auto d = static_cast<int>(psi.target_dim);
  if (d <= 2 && psi.domain->ambient->dim() <= 6) {
    out.brute_force_run = true;
    ContextPtr ctx = make_context(psi.domain, d, GramSpan::Generated, tol);
    for (int t = 0; t < samples; ++t) {
      CVec z = random_cone_element(*ctx, rng);
      CMat img = hermitian_part(psi.amplified(z));
      out.brute_force_min = std::min(out.brute_force_min, min_eigenvalue(img) / std::max(1.0, z.norm()));
    }
  }
  out.ok = out.restriction_residual <= 1e-7 && out.moment_min_eig >= -1e-8 &&
           (!out.brute_force_run || out.brute_force_min >= -1e-6);
  return out;
}

}  // namespace qos
