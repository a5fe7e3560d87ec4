#pragma once

#include <memory>
#include <vector>

#include "qos/algebra.hpp"
#include "qos/sdp.hpp"

namespace qos {

/// Cone data for a system at a matrix level: the level system M_n(X), a
/// self-adjoint frame h_0 = 1, h_1, ... of [M_n(X)] whose first inner_dim
/// elements span M_n(X), and the moment matrices Q_j[k,l] = c_j(h_k h_l).
///
/// A functional g with real frame values gamma_j = g(h_j) has moment matrix
/// M(gamma) = sum_j gamma_j Q_j, and g is positive on the cone iff M(gamma) is
/// psd. The face of psd moment matrices is cached: f0 is a relative-interior
/// state, `range` spans the range of M(f0) and `face` spans every gamma with
/// M(gamma) supported on that range, i.e. the span of the positive functionals.
struct ConeContext {
  SystemPtr base;
  SystemPtr system;
  int level = 1;
  HermitianFrame frame;
  std::vector<CMat> moments;
  RVec f0;
  CMat range;
  RMat face;

  AlgebraPtr ambient() const { return system->ambient; }
  Eigen::Index size() const { return frame.size(); }
  Eigen::Index inner_dim() const { return frame.inner_dim; }

  CMat moment(const RVec& gamma) const;
};

using ContextPtr = std::shared_ptr<const ConeContext>;

/// Gram variables range over [M_n(X)] (Generated) or all of M_n(A) (Ambient).
enum class GramSpan { Generated, Ambient };

ContextPtr make_context(const SystemPtr& system, int level = 1, GramSpan span = GramSpan::Generated,
                        const Tolerances& tol = Tolerances::from_env());

/// Real frame coordinates of a self-adjoint element of [M_n(X)].
RVec frame_coords(const ConeContext& ctx, const CVec& z);

/// sum_{k,l} G_kl h_k^* h_l in ambient coordinates.
CVec gram_image(const ConeContext& ctx, const CMat& gram);

struct ConeCertificate {
  CMat gram;
  double residual = 0.0;
  double min_eig = 0.0;
};

/// A functional in frame coordinates with its moment matrix.
struct DualCertificate {
  RVec gamma;
  CMat moment;
  double value = 0.0;           // g(z)
  double moment_min_eig = 0.0;
  bool strict = false;          // psd moment and value <= -margin
};

struct ConeDecision {
  sdp::Status status = sdp::Status::Indeterminate;  // Feasible: member; Infeasible: not in cone
  ConeCertificate certificate;
  DualCertificate dual;
  double margin = 0.0;
  bool in_closure = false;  // rejected but inside the Archimedean closure
};

/// Gram certificates are searched with trace at most trace_cap * max(1, |z|).
inline constexpr double kTraceCap = 1e4;

ConeDecision cone_membership(const ConeContext& ctx, const CVec& z, const Tolerances& tol = Tolerances::from_env(),
                             double trace_cap = kTraceCap);

/// sup { g(h) : g positive, g(1) = 1 } over the closure of the cone, solved on
/// the cached face. The Gram certificate satisfies value*1 - h = gram_image(G)
/// modulo the order null space.
struct SupportResult {
  double value = 0.0;
  RVec gamma;
  CMat gram;
  double residual = 0.0;
  sdp::Status status = sdp::Status::Indeterminate;
};

SupportResult support(const ConeContext& ctx, const RVec& eta, const Tolerances& tol = Tolerances::from_env());

bool archimedean_membership(const ConeContext& ctx, const CVec& z, double eps_unit,
                            const Tolerances& tol = Tolerances::from_env());

struct NullSpaceData {
  ContextPtr context;
  CMat basis_N;             // orthonormal, ambient coordinates
  RMat basis_span_states;   // frame coordinates of a basis of the positive functionals
  RVec relative_interior;   // f0
};

NullSpaceData order_null_space(const ContextPtr& ctx);

bool is_order_unit(const ConeContext& ctx, double cap = 1e6, const Tolerances& tol = Tolerances::from_env());

/// Lambda^* z Lambda for z in M_n(A), Lambda n x m.
CVec compress(const AlgebraPtr& base, const CVec& z, int n, const CMat& lambda);

bool compatibility_check(const AlgebraPtr& algebra, int n, int m, const CMat& lambda, int trials, Rng& rng,
                         const Tolerances& tol = Tolerances::from_env());
/// Same check with whole-algebra contexts at levels n and m built once by the caller.
bool compatibility_check(const ConeContext& cn, const ConeContext& cm, const CMat& lambda, int trials, Rng& rng,
                         const Tolerances& tol = Tolerances::from_env());

/// Random element gram_image(G) for a random psd G over the frame.
CVec random_cone_element(const ConeContext& ctx, Rng& rng, Eigen::Index rank = -1);

}  // namespace qos
