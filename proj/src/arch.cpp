#include "qos/arch.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qos/linalg.hpp"

namespace qos {

CVec ArchimedeanizationData::lift(const CVec& zq, int n) const {
  const Eigen::Index q = quotient_dim();
  const Eigen::Index m = source->ambient->dim();
  if (zq.size() != static_cast<Eigen::Index>(n) * n * q) throw QosError(ErrorKind::SizeMismatch, "quotient element has wrong size");
  CVec z(static_cast<Eigen::Index>(n) * n * m);
  for (int b = 0; b < n * n; ++b) z.segment(b * m, m) = quotient_basis * zq.segment(b * q, q);
  return z;
}

CVec ArchimedeanizationData::project(const CVec& z, int n) const {
  const Eigen::Index q = quotient_dim();
  const Eigen::Index m = source->ambient->dim();
  if (z.size() != static_cast<Eigen::Index>(n) * n * m) throw QosError(ErrorKind::SizeMismatch, "element has wrong size");
  CVec out(static_cast<Eigen::Index>(n) * n * q);
  for (int b = 0; b < n * n; ++b) {
    CVec seg = z.segment(b * m, m);
    if (!source->contains(seg, 1e-9 * std::max(1.0, seg.norm())))
      throw QosError(ErrorKind::NotInSpan, "entry is outside the source");
    out.segment(b * q, q) = P * source->coordinates(seg);
  }
  return out;
}

ContextPtr level_context(const ArchimedeanizationData& data, int n, const Tolerances& tol) {
  auto it = data.level_cache.find(n);
  if (it != data.level_cache.end()) return it->second;
  return make_context(data.source, n, GramSpan::Generated, tol);
}

ArchDecision arch_cone_membership(const ArchimedeanizationData& data, const CVec& zq, int n, double eps_unit,
                                  const Tolerances& tol) {
  ContextPtr ctx = level_context(data, n, tol);
  CVec z = data.lift(zq, n);
  RVec eta = frame_coords(*ctx, z);
  SupportResult s = support(*ctx, -eta, tol);
  if (s.status != sdp::Status::Feasible) throw QosError(ErrorKind::Indeterminate, "support problem did not converge");
  ArchDecision out;
  out.support = s.value;
  out.gamma = s.gamma;
  out.member = s.value <= eps_unit * std::max(1.0, zq.norm());
  return out;
}

namespace {

// self-adjoint elements spanning the sa part of X / N, in quotient coordinates
std::vector<CVec> quotient_hermitian_basis(const ArchimedeanizationData& d) {
  const AlgebraPtr& alg = d.source->ambient;
  CMat herm(alg->dim(), 2 * d.quotient_dim());
  for (Eigen::Index k = 0; k < d.quotient_dim(); ++k) {
    CVec x = d.quotient_basis.col(k);
    CVec xs = alg->adjoint(x);
    herm.col(2 * k) = x + xs;
    herm.col(2 * k + 1) = Complex(0.0, 1.0) * (x - xs);
  }
  std::vector<CVec> out;
  // keep independent elements; coordinates stay real on self-adjoint parts
  RMat re(2 * alg->dim(), herm.cols());
  re << herm.real(), herm.imag();
  RMat basis = orthonormal_basis(re);
  for (Eigen::Index k = 0; k < basis.cols(); ++k) {
    CVec h(alg->dim());
    h.real() = basis.col(k).head(alg->dim());
    h.imag() = basis.col(k).tail(alg->dim());
    out.push_back(d.project(h));
  }
  return out;
}

}  // namespace

ArchimedeanizationData archimedeanize(const SystemPtr& source, int levels, const Tolerances& tol) {
  if (!source->self_adjoint) throw QosError(ErrorKind::NotSelfAdjoint, "source must be closed under the involution");
  ArchimedeanizationData d;
  d.source = source;
  for (int n = 1; n <= levels; ++n) d.level_cache[n] = make_context(source, n, GramSpan::Generated, tol);
  ContextPtr ctx = d.level_cache.at(1);
  if (!is_order_unit(*ctx)) throw QosError(ErrorKind::NoOrderUnit, "unit is not an order unit");

  d.null_basis = order_null_space(ctx).basis_N;
  CMat nx = source->basis.adjoint() * d.null_basis;
  CMat q = nx.cols() ? null_space(CMat(nx.adjoint())) : CMat(CMat::Identity(source->dim(), source->dim()));
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    Eigen::Index i = 0;
    q.col(k).cwiseAbs().maxCoeff(&i);
    q.col(k) *= std::abs(q(i, k)) / q(i, k);
  }
  d.P = q.adjoint();
  d.quotient_basis = source->basis * q;
  d.unit = d.P * source->coordinates(source->ambient->unit());

  // fullness, properness and the Archimedean property on the sa basis
  d.full = d.proper = d.archimedean = true;
  for (const CVec& h : quotient_hermitian_basis(d)) {
    RVec eta = frame_coords(*ctx, d.lift(h));
    SupportResult lo = support(*ctx, -eta, tol);
    SupportResult hi = support(*ctx, eta, tol);
    // h + r 1 in the cone for r above support(-h)
    const double r = std::max(0.0, lo.value) + 1.0;
    d.full = d.full && cone_membership(*ctx, d.lift(h + r * d.unit), tol).status == sdp::Status::Feasible;
    d.proper = d.proper && !(lo.value <= 1e-8 && hi.value <= 1e-8);
    // h + lo.value 1 sits on the boundary of C_1
    CVec edge = h + lo.value * d.unit;
    bool grid = true;
    for (double eps : {1.0, 1e-2, 1e-4, 1e-6})
      grid = grid && arch_cone_membership(d, edge + eps * d.unit, 1, 1e-8, tol).member;
    if (grid) d.archimedean = d.archimedean && arch_cone_membership(d, edge, 1, 1e-8, tol).member;
  }
  return d;
}

ArchimedeanizationData archimedeanize(const AlgebraPtr& source, int levels, const Tolerances& tol) {
  return archimedeanize(whole_algebra(source), levels, tol);
}

CMat InducedMap::operator()(const CVec& zq) const {
  CMat out = CMat::Zero(target_dim, target_dim);
  for (Eigen::Index k = 0; k < zq.size(); ++k) out += zq(k) * images[k];
  return out;
}

std::optional<CVec> null_space_violation(const CPMapCandidate& phi, const ArchimedeanizationData& data, double tol) {
  double scale = 1.0;
  for (const auto& im : phi.images) scale = std::max(scale, im.norm());
  double worst = 0.0;
  std::optional<CVec> out;
  for (Eigen::Index k = 0; k < data.null_basis.cols(); ++k) {
    const double v = phi(data.null_basis.col(k)).norm();
    if (v > tol * scale && v > worst) {
      worst = v;
      out = data.null_basis.col(k);
    }
  }
  return out;
}

InducedMap induced_map(const CPMapCandidate& phi, const ArchimedeanizationData& data) {
  if (phi.domain->ambient->dim() != data.source->ambient->dim() || phi.domain->dim() != data.source->dim())
    throw QosError(ErrorKind::AlgebraMismatch, "map is not defined on the source");
  if (auto v = null_space_violation(phi, data)) {
    std::ostringstream msg;
    msg << "map is nonzero on the null vector [";
    for (Eigen::Index i = 0; i < v->size(); ++i) msg << (i ? ", " : "") << (*v)(i);
    msg << "]";
    throw QosError(ErrorKind::NullSpaceNotKilled, msg.str());
  }
  InducedMap out;
  out.target_dim = phi.target_dim;
  for (Eigen::Index k = 0; k < data.quotient_dim(); ++k) out.images.push_back(phi(data.quotient_basis.col(k)));
  for (Eigen::Index k = 0; k < phi.domain->dim(); ++k) {
    CVec xk = phi.domain->basis.col(k);
    out.factor_residual = std::max(out.factor_residual, (out(data.project(xk)) - phi(xk)).norm());
  }
  return out;
}

}  // namespace qos
