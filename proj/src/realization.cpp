#include "qos/realization.hpp"

#include <algorithm>
#include <cmath>

#include "qos/linalg.hpp"
#include "qos/norms.hpp"

namespace qos {

ReducingIdealData reducing_ideal(const AlgebraPtr& algebra, const Tolerances& tol) {
  ReducingIdealData out;
  out.algebra = algebra;
  const Eigen::Index m = algebra->dim();
  ContextPtr ctx = make_context(whole_algebra(algebra), 1, GramSpan::Generated, tol);

  // order null space of the whole algebra
  CMat route_a = order_null_space(ctx).basis_N;
  // {sum_k alpha_k h_k : alpha in ker M(f0)}
  CMat kernel = null_space(CMat(ctx->range.adjoint()));
  CMat route_b = kernel.cols() ? orthonormal_basis(CMat(ctx->frame.basis * kernel)) : CMat::Zero(m, 0);
  out.route_angle = max_principal_angle(route_a, route_b);
  if (out.route_angle > 1e-6)
    throw QosError(ErrorKind::InconsistentIdeal,
                   "null space and kernel of the faithful moment disagree, angle " + std::to_string(out.route_angle));
  out.W_basis = route_b;
  for (Eigen::Index k = 0; k < route_b.cols(); ++k)
    out.max_seminorm = std::max(out.max_seminorm, seminorm(*ctx, route_b.col(k), tol).value);

  out.complement = route_b.cols() ? null_space(CMat(route_b.adjoint())) : CMat(CMat::Identity(m, m));
  const CMat& q = out.complement;
  const Eigen::Index d = q.cols();
  out.pi = q.adjoint();

  std::vector<CMat> left(static_cast<size_t>(d), CMat::Zero(d, d));
  CMat inv(d, d);
  std::vector<std::string> names;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) left[i].col(j) = out.pi * algebra->multiply(q.col(i), q.col(j));
    inv.col(i) = out.pi * algebra->adjoint(q.col(i));
    names.push_back("e" + std::to_string(i));
  }
  // snap roundoff below the validator's threshold
  auto clean = [](CMat& a) { a = a.unaryExpr([](Complex c) {
    return Complex(std::abs(c.real()) < 1e-13 ? 0.0 : c.real(), std::abs(c.imag()) < 1e-13 ? 0.0 : c.imag()); }); };
  for (auto& l : left) clean(l);
  clean(inv);
  CVec unit = out.pi * algebra->unit();
  out.quotient = StarAlgebra::build(std::move(left), inv, unit, std::move(names));
  return out;
}

CStarRealization cstar_realization(const ReducingIdealData& data, Rng& rng, int norm_probes, const Tolerances& tol) {
  CStarRealization out;
  out.ideal = data;
  const AlgebraPtr& b = data.quotient;
  const Eigen::Index d = b->dim();
  ContextPtr ctx = make_context(whole_algebra(b), 1, GramSpan::Generated, tol);
  out.faithful_state = ctx->f0;
  out.state_min_eig = min_eigenvalue(ctx->moment(ctx->f0));
  if (out.state_min_eig <= tol.eps_psd)
    throw QosError(ErrorKind::NoFaithfulState, "quotient has no faithful state");

  // f(e_i) = sum_l gamma_l c_l(e_i)
  CVec fvals = ctx->frame.coordinate_map.transpose() * ctx->f0.cast<Complex>();
  auto f = [&](const CVec& x) { return (fvals.transpose() * x)(0); };
  CMat p(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      p(i, j) = f(b->multiply(b->adjoint(b->basis_vector(i)), b->basis_vector(j)));
  p = hermitian_part(p);
  Eigen::LLT<CMat> llt(p);
  if (llt.info() != Eigen::Success) throw QosError(ErrorKind::NoFaithfulState, "GNS Gram matrix is not positive definite");
  CMat r = llt.matrixU();
  CMat rinv = r.inverse();

  for (Eigen::Index i = 0; i < d; ++i) out.quotient_rep.push_back(r * b->left(i) * rinv);
  const Eigen::Index m = data.algebra->dim();
  for (Eigen::Index i = 0; i < m; ++i) {
    CMat rho = CMat::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) rho += data.pi(j, i) * out.quotient_rep[j];
    out.rep.push_back(rho);
  }

  auto rho_b = [&](const CVec& x) {
    CMat s = CMat::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) s += x(j) * out.quotient_rep[j];
    return s;
  };
  for (Eigen::Index i = 0; i < d; ++i) {
    CVec ei = b->basis_vector(i);
    out.homomorphism_error =
        std::max(out.homomorphism_error, (rho_b(b->adjoint(ei)) - out.quotient_rep[i].adjoint()).norm());
    for (Eigen::Index j = 0; j < d; ++j)
      out.homomorphism_error = std::max(
          out.homomorphism_error,
          (rho_b(b->multiply(ei, b->basis_vector(j))) - out.quotient_rep[i] * out.quotient_rep[j]).norm());
  }

  CMat stacked(d * d, d);
  for (Eigen::Index i = 0; i < d; ++i) stacked.col(i) = Eigen::Map<const CVec>(out.quotient_rep[i].data(), d * d);
  out.injective = orthonormal_basis(stacked).cols() == d;

  if (norm_probes > 0) {
    ContextPtr whole = make_context(whole_algebra(data.algebra), 1, GramSpan::Generated, tol);
    for (int t = 0; t < norm_probes; ++t) {
      CVec a = random_cvec(rng, m);
      double s = seminorm(*whole, a, tol).value;
      double n = spectral_norm(represent(out, a));
      out.norm_check = std::max(out.norm_check, std::abs(n - s) / std::max(1.0, s));
    }
  }
  return out;
}

CMat represent(const CStarRealization& r, const CVec& z, int n) {
  const auto m = static_cast<Eigen::Index>(r.rep.size());
  if (z.size() != static_cast<Eigen::Index>(n) * n * m) throw QosError(ErrorKind::SizeMismatch, "element has wrong size");
  const Eigen::Index d = r.rep_dim();
  CMat out = CMat::Zero(n * d, n * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < m; ++k) {
        Complex c = z((i * n + j) * m + k);
        if (c != Complex(0.0)) out.block(i * d, j * d, d, d) += c * r.rep[k];
      }
  return out;
}

CMat represent_element(const CStarRealization& r, const AlgebraPtr& algebra, const CVec& z) {
  if (!algebra->base()) return represent(r, z, 1);
  const int n = algebra->level();
  const Eigen::Index mb = algebra->base()->dim();
  CMat first = represent_element(r, algebra->base(), z.segment(0, mb));
  const Eigen::Index d = first.rows();
  CMat out(n * d, n * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.block(i * d, j * d, d, d) =
          (i == 0 && j == 0) ? first : represent_element(r, algebra->base(), z.segment((i * n + j) * mb, mb));
  return out;
}

}  // namespace qos
