#include "qos/states.hpp"

#include <algorithm>
#include <cmath>

#include "qos/linalg.hpp"
#include "qos/norms.hpp"

namespace qos {

Complex LinearFunctional::operator()(const CVec& z) const {
  if (z.size() != domain->ambient->dim()) throw QosError(ErrorKind::SizeMismatch, "element has wrong dimension");
  return (coeffs.transpose() * (domain->basis.adjoint() * z))(0);
}

bool LinearFunctional::is_self_adjoint(double tol) const {
  const double scale = std::max(1.0, coeffs.norm());
  for (Eigen::Index k = 0; k < domain->dim(); ++k) {
    CVec x = domain->basis.col(k);
    CVec xs = domain->ambient->adjoint(x);
    if (domain->distance(xs) > 1e-10) return false;
    if (std::abs((*this)(xs) - std::conj(coeffs(k))) > tol * scale) return false;
  }
  return true;
}

CMat CPMapCandidate::operator()(const CVec& z) const {
  if (z.size() != domain->ambient->dim()) throw QosError(ErrorKind::SizeMismatch, "element has wrong dimension");
  CVec c = domain->basis.adjoint() * z;
  CMat out = CMat::Zero(target_dim, target_dim);
  for (Eigen::Index k = 0; k < c.size(); ++k)
    if (c(k) != Complex(0.0)) out += c(k) * images[k];
  return out;
}

CMat CPMapCandidate::amplified(const CVec& z) const {
  const Eigen::Index m = domain->ambient->dim();
  const auto n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(z.size() / m))));
  if (static_cast<Eigen::Index>(n) * n * m != z.size()) throw QosError(ErrorKind::LevelMismatch, "element is not in M_n(X)");
  const Eigen::Index d = target_dim;
  CMat out = CMat::Zero(n * d, n * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.block(i * d, j * d, d, d) = (*this)(z.segment((i * n + j) * m, m));
  return out;
}

bool CPMapCandidate::is_unital(double tol) const {
  return ((*this)(domain->ambient->unit()) - CMat::Identity(target_dim, target_dim)).norm() <= tol;
}

bool CPMapCandidate::is_self_adjoint(double tol) const {
  double scale = 1.0;
  for (const auto& im : images) scale = std::max(scale, im.norm());
  for (Eigen::Index k = 0; k < domain->dim(); ++k) {
    CVec x = domain->basis.col(k);
    CVec xs = domain->ambient->adjoint(x);
    if (domain->distance(xs) > 1e-10) return false;
    if (((*this)(xs) - images[k].adjoint()).norm() > tol * scale) return false;
  }
  return true;
}

CPMapCandidate amplify_map(const CPMapCandidate& phi, int n) {
  if (n == 1) return phi;
  CPMapCandidate out;
  out.domain = matrix_system(phi.domain, n);
  const Eigen::Index d = phi.target_dim;
  const Eigen::Index p = phi.domain->dim();
  out.target_dim = n * d;
  out.images.assign(static_cast<size_t>(n * n * p), CMat::Zero(n * d, n * d));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < p; ++k) out.images[(i * n + j) * p + k].block(i * d, j * d, d, d) = phi.images[k];
  return out;
}

LinearFunctional map_to_functional(const CPMapCandidate& phi) {
  const auto n = static_cast<int>(phi.target_dim);
  LinearFunctional f;
  f.domain = matrix_system(phi.domain, n);
  const Eigen::Index p = phi.domain->dim();
  f.coeffs = CVec::Zero(static_cast<Eigen::Index>(n) * n * p);
  // f_phi(x_k (x) E_ij) = <phi(x_k) e_j, e_i> / n
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < p; ++k) f.coeffs((i * n + j) * p + k) = phi.images[k](i, j) / static_cast<double>(n);
  return f;
}

CPMapCandidate functional_to_map(const LinearFunctional& f, const SystemPtr& base, int n) {
  const Eigen::Index p = base->dim();
  if (f.coeffs.size() != static_cast<Eigen::Index>(n) * n * p || f.domain->ambient->dim() != n * n * base->ambient->dim())
    throw QosError(ErrorKind::LevelMismatch, "functional is not defined on M_n(X)");
  CPMapCandidate phi;
  phi.domain = base;
  phi.target_dim = n;
  phi.images.assign(static_cast<size_t>(p), CMat::Zero(n, n));
  // phi_f(x_k) = n sum_ij f(x_k (x) E_ij) E_ij
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < p; ++k) phi.images[k](i, j) = static_cast<double>(n) * f.coeffs((i * n + j) * p + k);
  return phi;
}

namespace {

// max t s.t. sum_{j<k} f(h_j) Q_j + sum_{j>=k} lambda_j Q_j - t I psd
PositivityResult positivity_lmi(const LinearFunctional& f, const ConeContext& ctx, const Tolerances& tol) {
  PositivityResult out;
  const Eigen::Index w = ctx.size();
  const Eigen::Index k = ctx.inner_dim();
  RVec fixed(k);
  for (Eigen::Index j = 0; j < k; ++j) fixed(j) = f(ctx.frame.basis.col(j)).real();
  CMat base = CMat::Zero(w, w);
  for (Eigen::Index j = 0; j < k; ++j) base += fixed(j) * ctx.moments[j];

  out.extension = RVec::Zero(w);
  out.extension.head(k) = fixed;
  if (k == w) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(base));
    out.value = es.eigenvalues()(0);
    CVec v = es.eigenvectors().col(0);
    out.gram = (v * v.adjoint()).transpose();
    out.status = sdp::Status::Feasible;
  } else {
    const Eigen::Index free = w - k;
    sdp::LmiProblem lmi(free + 1);
    int blk = lmi.add_block(base);
    for (Eigen::Index j = 0; j < free; ++j) lmi.set(j, blk, ctx.moments[k + j]);
    lmi.set(free, blk, -CMat::Identity(w, w));
    lmi.objective(free) = 1.0;
    sdp::LmiResult res = sdp::solve_lmi(lmi, tol);
    out.status = res.status;
    if (res.status != sdp::Status::Feasible) return out;
    out.extension.tail(free) = res.y.head(free);
    out.value = res.y(free);
    out.gram = res.multipliers[blk].transpose();
  }
  out.moment = ctx.moment(out.extension);
  return out;
}

void require_domain(const LinearFunctional& f, const ConeContext& ctx) {
  if (f.domain->ambient->dim() != ctx.ambient()->dim() || f.domain->dim() != ctx.system->dim())
    throw QosError(ErrorKind::LevelMismatch, "functional does not live on the context's system");
}

}  // namespace

PositivityResult functional_positive(const LinearFunctional& f, const ConeContext& ctx, const Tolerances& tol) {
  require_domain(f, ctx);
  if (!f.is_self_adjoint(1e-9)) {
    PositivityResult out;
    out.self_adjoint = false;
    out.positive = false;
    out.status = sdp::Status::Feasible;
    return out;
  }
  PositivityResult out = positivity_lmi(f, ctx, tol);
  out.positive = out.status == sdp::Status::Feasible && out.value >= -tol.eps_psd;
  if (out.status == sdp::Status::Feasible && !out.positive) {
    // the psd-projected minimizer overrides a rejection that was only solver noise
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(out.gram));
    CMat g = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() * es.eigenvectors().adjoint();
    g /= std::max(g.trace().real(), 1e-300);
    const RVec eta = frame_coords(ctx, gram_image(ctx, g));
    const Eigen::Index k = ctx.inner_dim();
    const double off = eta.tail(eta.size() - k).norm();
    const double value = out.extension.head(k).dot(eta.head(k));
    if (off <= 1e-6 && value >= -tol.eps_psd) {
      out.positive = true;
    } else if (off <= 1e-6) {
      out.gram = g;
      out.value = value;
    }
  }
  return out;
}

CPResult is_completely_positive(const CPMapCandidate& phi, const ConeContext& ctx, const Tolerances& tol) {
  if (ctx.level != phi.target_dim) throw QosError(ErrorKind::LevelMismatch, "context level must equal the target size");
  CPResult out;
  out.f_phi = map_to_functional(phi);
  if (!phi.is_self_adjoint(1e-9)) {
    out.detail.self_adjoint = false;
    out.completely_positive = false;
    return out;
  }
  out.detail = functional_positive(out.f_phi, ctx, tol);
  out.completely_positive = out.detail.positive;
  if (!out.completely_positive && out.detail.gram.size()) out.violating = gram_image(ctx, out.detail.gram);
  return out;
}

CPResult is_completely_positive(const CPMapCandidate& phi, const Tolerances& tol) {
  ContextPtr ctx = make_context(phi.domain, static_cast<int>(phi.target_dim), GramSpan::Generated, tol);
  return is_completely_positive(phi, *ctx, tol);
}

StateExtension extend_state(const LinearFunctional& f, const Tolerances& tol) {
  StateExtension out;
  const AlgebraPtr& alg = f.domain->ambient;
  out.extension.domain = whole_algebra(alg);
  if (f.coeffs.norm() == 0.0) {
    out.extension.coeffs = CVec::Zero(alg->dim());
    out.status = sdp::Status::Feasible;
    return out;
  }
  ContextPtr ctx = make_context(f.domain, 1, GramSpan::Ambient, tol);
  if (!f.is_self_adjoint(1e-9)) throw QosError(ErrorKind::NotSelfAdjoint, "functional is not self-adjoint");
  PositivityResult pr = positivity_lmi(f, *ctx, tol);
  out.margin = pr.value;
  // f~(b_i) = sum_j gamma_j c_j(b_i)
  out.extension.coeffs = ctx->frame.coordinate_map.transpose() * pr.extension.cast<Complex>();
  // positive functionals vanish on the order null space; remove the solver's residue there without touching X
  const CMat null = order_null_space(make_context(out.extension.domain, 1, GramSpan::Generated, tol)).basis_N;
  if (null.cols() > 0) {
    const Eigen::Index p = f.domain->dim();
    CMat cons(p + null.cols(), alg->dim());
    cons.topRows(p) = f.domain->basis.transpose();
    cons.bottomRows(null.cols()) = null.transpose();
    CVec rhs = CVec::Zero(cons.rows());
    rhs.tail(null.cols()) = null.transpose() * out.extension.coeffs;
    out.extension.coeffs -= cons.completeOrthogonalDecomposition().solve(rhs);
  }
  for (Eigen::Index k = 0; k < f.domain->dim(); ++k)
    out.restriction_residual =
        std::max(out.restriction_residual, std::abs(out.extension(f.domain->basis.col(k)) - f.coeffs(k)));
  const bool ok = pr.status == sdp::Status::Feasible && pr.value >= -tol.eps_psd;
  out.status = ok ? sdp::Status::Feasible : (pr.status == sdp::Status::Feasible ? sdp::Status::Infeasible : pr.status);
  return out;
}

CPMapCandidate symmetrized_extension(const CPMapCandidate& phi, const CStarRealization& r, Rng& rng,
                                     const Tolerances& tol) {
  (void)rng;
  if (!phi.is_unital(1e-9)) throw QosError(ErrorKind::IllDefined, "map is not unital");
  FunctionalBound fb = functional_bound(map_to_functional(phi), r, tol);
  if (fb.unbounded || fb.value > 1.0 + 1e-6)
    throw QosError(ErrorKind::IllDefined, "map is not contractive; bound " + std::to_string(fb.value));

  const AlgebraPtr& alg = phi.domain->ambient;
  const Eigen::Index m = alg->dim();
  const Eigen::Index p = phi.domain->dim();
  const Eigen::Index d = phi.target_dim;
  SystemPtr target = build_system(alg, phi.domain->basis);

  // Real-linear maps (a, b) -> sum a_k x_k + conj(b_k) x_k^*  and  -> sum a_k phi(x_k) + conj(b_k) phi(x_k)^*
  RMat sum(2 * m, 4 * p), val(2 * d * d, 4 * p);
  auto put = [](RMat& mat, Eigen::Index col, const CVec& v) {
    mat.col(col).head(v.size()) = v.real();
    mat.col(col).tail(v.size()) = v.imag();
  };
  auto flat = [](const CMat& a) { return CVec(Eigen::Map<const CVec>(a.data(), a.size())); };
  for (Eigen::Index k = 0; k < p; ++k) {
    CVec x = phi.domain->basis.col(k);
    CVec xs = alg->adjoint(x);
    const Complex I(0.0, 1.0);
    put(sum, 4 * k, x);
    put(sum, 4 * k + 1, I * x);
    put(sum, 4 * k + 2, xs);
    put(sum, 4 * k + 3, -I * xs);
    put(val, 4 * k, flat(phi.images[k]));
    put(val, 4 * k + 1, flat(I * phi.images[k]));
    put(val, 4 * k + 2, flat(phi.images[k].adjoint()));
    put(val, 4 * k + 3, flat(-I * phi.images[k].adjoint()));
  }
  RMat ker = null_space(sum);
  double scale = std::max(1.0, val.norm());
  if (ker.cols() > 0 && (val * ker).norm() > 1e-10 * scale)
    throw QosError(ErrorKind::IllDefined, "value depends on the decomposition x + y^*");

  RMat pinv = sum.completeOrthogonalDecomposition().pseudoInverse();
  CPMapCandidate out;
  out.domain = target;
  out.target_dim = d;
  for (Eigen::Index l = 0; l < target->dim(); ++l) {
    CVec s = target->basis.col(l);
    RVec sr(2 * m);
    sr.head(m) = s.real();
    sr.tail(m) = s.imag();
    RVec v = val * (pinv * sr);
    CVec c(d * d);
    c.real() = v.head(d * d);
    c.imag() = v.tail(d * d);
    out.images.push_back(Eigen::Map<const CMat>(c.data(), d, d));
  }
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Contractive: return "contractive";
    case Verdict::NotContractive: return "not contractive";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

Verdict from_bounds(double lower, double upper, double slack) {
  if (upper <= 1.0 + slack) return Verdict::Contractive;
  if (lower > 1.0 + slack) return Verdict::NotContractive;
  return Verdict::Inconclusive;
}

bool compatible(Verdict a, Verdict b) {
  return a == b || a == Verdict::Inconclusive || b == Verdict::Inconclusive;
}

}  // namespace

ContractivityReport contractivity_equivalence_check(const CPMapCandidate& phi, const CStarRealization& r, Rng& rng,
                                                    const Tolerances& tol) {
  const double slack = 1e-6;
  const auto n = static_cast<int>(phi.target_dim);
  ContractivityReport out;

  FunctionalBound fb = functional_bound(map_to_functional(phi), r, tol);
  out.functional_bound = fb.unbounded ? std::numeric_limits<double>::infinity() : fb.value;
  out.functional = out.functional_bound <= 1.0 + slack ? Verdict::Contractive : Verdict::NotContractive;

  CpHint hint = CpHint::Unknown;
  if (phi.domain->self_adjoint) hint = is_completely_positive(phi, tol).completely_positive ? CpHint::Yes : CpHint::No;
  MapBound mb = map_bound(amplify_map(phi, n), r, rng, 30, tol, hint == CpHint::Yes ? hint : CpHint::No);
  out.map_lower = mb.lower;
  out.map_upper = mb.upper;
  out.n_contractive = from_bounds(mb.lower, mb.upper, slack);

  if (out.n_contractive == Verdict::NotContractive) {
    out.complete = Verdict::NotContractive;
  } else {
    Verdict level = out.n_contractive;
    const int top = std::min(n + 1, 3);
    for (int L = n + 1; L <= top; ++L) {
      MapBound higher = map_bound(amplify_map(phi, L), r, rng, 30, tol, hint == CpHint::Yes ? hint : CpHint::No);
      Verdict v = from_bounds(higher.lower, higher.upper, slack);
      if (v == Verdict::NotContractive) level = v;
      else if (v == Verdict::Inconclusive && level == Verdict::Contractive) level = v;
    }
    out.complete = level;
  }
  out.consistent = compatible(out.functional, out.n_contractive) && compatible(out.functional, out.complete) &&
                   compatible(out.n_contractive, out.complete);
  return out;
}

}  // namespace qos
