#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "oracles.hpp"
#include "qos/arch.hpp"
#include "qos/extension.hpp"
#include "qos/linalg.hpp"
#include "qos/norms.hpp"
#include "qos/realization.hpp"

using namespace qos;

namespace {

struct Tally {
  int checks = 0;
  int failures = 0;
  double worst = 0.0;
  std::string first;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first = what;
  }
  void residual(double r) { worst = std::max(worst, r); }
};

const Tolerances kTol = Tolerances::from_env();

std::string fmt(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", x);
  return b;
}

// random self-adjoint z in M_n(X), shifted onto the boundary of the oracle cone {rho_n(z) >= 0}
CVec oracle_cone_sample(const std::string& name, const SystemPtr& x, int n, Rng& rng, bool interior) {
  const AlgebraPtr& a = x->ambient;
  const Eigen::Index m = a->dim();
  CVec z(n * n * m);
  for (int b = 0; b < n * n; ++b) z.segment(b * m, m) = x->basis * random_cvec(rng, x->dim());
  CVec zs = z;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) zs.segment((i * n + j) * m, m) += a->adjoint(z.segment((j * n + i) * m, m));
  const double shift = -min_eigenvalue(oracle::rep_n(name, zs, n)) + (interior ? 1e-3 : 0.0);
  for (int i = 0; i < n; ++i) zs.segment((i * n + i) * m, m) += shift * a->unit();
  return zs / zs.norm();
}

CMat hermitian(Rng& rng, Eigen::Index d) {
  CMat p = random_cmat(rng, d, d);
  return p + p.adjoint();
}

// phi + t (h_k) with the perturbation kept self-adjoint on the system
CPMapCandidate perturb(const CPMapCandidate& phi, Rng& rng, double t) {
  const SystemPtr& x = phi.domain;
  const AlgebraPtr& a = x->ambient;
  CPMapCandidate out = phi;
  std::vector<CMat> raw;
  for (Eigen::Index k = 0; k < x->dim(); ++k) raw.push_back(random_cmat(rng, phi.target_dim, phi.target_dim));
  for (Eigen::Index k = 0; k < x->dim(); ++k) {
    CVec c = x->coordinates(a->adjoint(x->basis.col(k)));
    CMat adj = CMat::Zero(phi.target_dim, phi.target_dim);
    for (Eigen::Index l = 0; l < x->dim(); ++l) adj += std::conj(c(l)) * raw[l].adjoint();
    out.images[k] += 0.5 * t * (raw[k] + adj);
  }
  return out;
}

CStarRealization realize(const AlgebraPtr& a, Rng& rng) { return cstar_realization(reducing_ideal(a, kTol), rng, 0, kTol); }

// 1. correspondence round trips
void criterion_1(Tally& t) {
  Rng rng(101);
  for (const auto& name : fixtures::names()) {
    auto x = whole_algebra(fixtures::by_name(name));
    for (int n = 1; n <= 3; ++n)
      for (int s = 0; s < 100; ++s) {
        CPMapCandidate phi;
        phi.domain = x;
        phi.target_dim = n;
        for (Eigen::Index k = 0; k < x->dim(); ++k) phi.images.push_back(random_cmat(rng, n, n));
        CPMapCandidate back = functional_to_map(map_to_functional(phi), x, n);
        double err = 0.0;
        for (Eigen::Index k = 0; k < x->dim(); ++k) err = std::max(err, (back.images[k] - phi.images[k]).cwiseAbs().maxCoeff());
        LinearFunctional f;
        f.domain = matrix_system(x, n);
        f.coeffs = random_cvec(rng, f.domain->dim());
        err = std::max(err, (map_to_functional(functional_to_map(f, x, n)).coeffs - f.coeffs).cwiseAbs().maxCoeff());
        t.residual(err);
        t.check(err <= 1e-12, name + " level " + std::to_string(n) + " error " + fmt(err));
      }
  }
}

// 2. cone membership certificates and rejections
void criterion_2(Tally& t) {
  Rng rng(202);
  for (const auto& name : fixtures::names()) {
    auto a = fixtures::by_name(name);
    auto x = whole_algebra(a);
    for (int s = 0; s < 200; ++s) {
      const int n = s < 150 ? 1 : 2;
      auto ctx = make_context(x, n, GramSpan::Generated, kTol);
      CVec z = random_cone_element(*ctx, rng);
      ConeDecision d = cone_membership(*ctx, z, kTol);
      const double res = d.status == sdp::Status::Feasible ? (gram_image(*ctx, d.certificate.gram) - z).norm() : INFINITY;
      const double gmin = d.status == sdp::Status::Feasible ? min_eigenvalue(d.certificate.gram) : -INFINITY;
      t.residual(res);
      t.check(res <= 1e-8 && gmin >= -1e-8, name + " member " + std::to_string(s) + " residual " + fmt(res));
    }
    auto c1 = make_context(x, 1, GramSpan::Generated, kTol);
    for (int s = 0; s < 50; ++s) {
      CVec z;
      if (s == 0) {
        z = -a->unit();
      } else if (s == 1 && name == "ALG_Z2") {
        z = CVec::Zero(2);
        z << -2.0, 1.0;
      } else {
        // below the oracle spectrum by at least 0.05
        CVec h = random_cvec(rng, a->dim());
        h = h + a->adjoint(h);
        const double lo = min_eigenvalue(oracle::rep(name, h));
        z = h - (lo + 0.05 + 0.5 * std::abs(random_cvec(rng, 1)(0))) * a->unit();
      }
      ConeDecision d = cone_membership(*c1, z, kTol);
      const RVec eta = frame_coords(*c1, z);
      const bool ok = d.status == sdp::Status::Infeasible && d.dual.strict &&
                      min_eigenvalue(c1->moment(d.dual.gamma)) >= -1e-8 && d.dual.gamma.dot(eta) < 0.0;
      t.check(ok, name + " non-member " + std::to_string(s));
    }
  }
}

// 3. state extension preserves the bound
void criterion_3(Tally& t) {
  Rng rng(303);
  for (const auto& name : fixtures::names()) {
    auto a = fixtures::by_name(name);
    auto r = realize(a, rng);
    for (int s = 0; s < 100; ++s) {
      auto x = oracle::random_system(a, rng, 1 + s % 3);
      auto f = oracle::state(name, x, oracle::random_density(rng, oracle::rep_dim(name)));
      auto e = extend_state(f, kTol);
      const double fb = functional_bound_exact(f, r, kTol).value;
      const double eb = functional_bound_exact(e.extension, r, kTol).value;
      t.residual(e.restriction_residual);
      t.check(e.status == sdp::Status::Feasible && e.restriction_residual <= 1e-8 && std::abs(eb - fb) <= 1e-6,
              name + " sample " + std::to_string(s) + " bounds " + fmt(fb) + " vs " + fmt(eb));
    }
  }
}

// 4. moment-SDP CP verdict against brute force over the sampled cone
void criterion_4(Tally& t) {
  Rng rng(404);
  for (const auto& name : fixtures::names()) {
    auto a = fixtures::by_name(name);
    const Eigen::Index rd = oracle::rep_dim(name);
    for (int s = 0; s < 200; ++s) {
      const int d = 1 + s % 2;
      auto x = oracle::random_system(a, rng, 1 + (s / 2) % 2);
      CPMapCandidate phi = oracle::stinespring(name, x, oracle::random_kraus(rng, d, rd, 2, false));
      const int kind = (s / 4) % 3;
      if (kind == 1) phi = perturb(phi, rng, 0.05 + std::abs(random_cvec(rng, 1)(0)));
      if (kind == 2)
        for (auto& im : phi.images) im = im.transpose().eval();
      auto ctx = make_context(x, d, GramSpan::Generated, kTol);
      CPResult cp = is_completely_positive(phi, *ctx, kTol);

      double brute = INFINITY;
      for (int k = 0; k < 40; ++k) {
        CVec z = oracle_cone_sample(name, x, d, rng, k % 4 == 0);
        brute = std::min(brute, min_eigenvalue(hermitian_part(phi.amplified(z))));
      }
      if (!cp.completely_positive && cp.violating.size()) {
        CVec z = cp.violating / cp.violating.norm();
        if (min_eigenvalue(oracle::rep_n(name, z, d)) >= -1e-8)
          brute = std::min(brute, min_eigenvalue(hermitian_part(phi.amplified(z))));
      }
      const bool brute_cp = brute >= -1e-6;
      t.check(brute_cp == cp.completely_positive,
              name + " map " + std::to_string(s) + " sdp " + (cp.completely_positive ? "cp" : "not cp") + " brute min " + fmt(brute));
    }
  }
  auto m2 = fixtures::by_name("ALG_M2");
  auto x = whole_algebra(m2);
  CPMapCandidate tr;
  tr.domain = x;
  tr.target_dim = 2;
  for (Eigen::Index k = 0; k < 4; ++k) tr.images.push_back(oracle::rep("ALG_M2", x->basis.col(k)).transpose());
  t.check(!is_completely_positive(tr, kTol).completely_positive, "transpose accepted on ALG_M2");
}

// 5. CP extension, direct and through the pipeline
void criterion_5(Tally& t) {
  Rng rng(505);
  for (const auto& name : fixtures::names()) {
    auto a = fixtures::by_name(name);
    const Eigen::Index rd = oracle::rep_dim(name);
    for (int s = 0; s < 50; ++s) {
      const Eigen::Index d = 1 + s % 3;
      auto x = oracle::random_system(a, rng, 1 + s % 2);
      auto phi = oracle::stinespring(name, x, oracle::random_kraus(rng, d, rd, static_cast<int>(d) + 1, s % 2 == 0));
      const std::string tag = name + " map " + std::to_string(s);
      auto direct = extend_cp_direct(phi, kTol);
      t.residual(direct.restriction_residual);
      t.check(direct.status == sdp::Status::Feasible && direct.restriction_residual <= 1e-7 && direct.moment_min_eig >= -1e-8,
              tag + " direct residual " + fmt(direct.restriction_residual) + " min eig " + fmt(direct.moment_min_eig));
      auto pipe = extend_cp_pipeline(phi, rng, kTol);
      const auto& tr = pipe.trace;
      t.residual(pipe.restriction_residual);
      t.check(pipe.status == sdp::Status::Feasible && pipe.restriction_residual <= 1e-7 && pipe.moment_min_eig >= -1e-8 &&
                  tr.step2_angle < 1e-6 && tr.step5_probes > 0 && tr.step5_forward_failures == 0 &&
                  tr.step5_backward_failures == 0,
              tag + " pipeline residual " + fmt(pipe.restriction_residual) + " step2 " + fmt(tr.step2_angle));
      // the extension is CP on the whole algebra, checked against the oracle cone
      if (d <= 2) {
        auto whole = whole_algebra(a);
        double worst = INFINITY;
        for (int k = 0; k < 10; ++k) {
          CVec z = oracle_cone_sample(name, whole, static_cast<int>(d), rng, false);
          worst = std::min(worst, min_eigenvalue(hermitian_part(direct.psi.amplified(z))));
          worst = std::min(worst, min_eigenvalue(hermitian_part(pipe.psi.amplified(z))));
        }
        t.check(worst >= -1e-6, tag + " extension negative on the oracle cone " + fmt(worst));
      }
    }
  }
}

// 6. Archimedeanization of ALG_NIL and ALG_M2
void criterion_6(Tally& t) {
  auto nil = archimedeanize(fixtures::by_name("ALG_NIL"), 2, kTol);
  CVec x = CVec::Unit(2, 1);
  const double px = nil.project(x).cwiseAbs().maxCoeff();
  const double along = nil.null_basis.cols() == 1 ? max_principal_angle(nil.null_basis, x) : INFINITY;
  t.check(nil.null_basis.cols() == 1 && along < 1e-12, "ALG_NIL null space is not span{x}");
  t.check(nil.quotient_dim() == 1, "ALG_NIL quotient dimension " + std::to_string(nil.quotient_dim()));
  t.check(px == 0.0, "ALG_NIL P(x) = " + fmt(px));
  t.check(nil.full && nil.proper && nil.archimedean, "ALG_NIL flags");
  auto m2 = archimedeanize(fixtures::by_name("ALG_M2"), 2, kTol);
  t.check(m2.null_basis.cols() == 0 && m2.quotient_dim() == 4, "ALG_M2 null space nonzero");
  t.check(m2.full && m2.proper && m2.archimedean, "ALG_M2 flags");
  for (const auto& name : fixtures::names()) {
    auto d = archimedeanize(fixtures::by_name(name), 2, kTol);
    t.check(d.full && d.proper && d.archimedean, name + " flags");
    // -1 stays outside, 1 inside
    CVec one = d.unit;
    t.check(arch_cone_membership(d, one, 1, 1e-8, kTol).member && !arch_cone_membership(d, -one, 1, 1e-8, kTol).member,
            name + " unit membership");
  }
}

// 7. induced maps on the quotient
void criterion_7(Tally& t) {
  Rng rng(707);
  for (const auto& name : fixtures::names()) {
    auto a = fixtures::by_name(name);
    auto d = archimedeanize(a, 1, kTol);
    const Eigen::Index rd = oracle::rep_dim(name);
    for (int s = 0; s < 50; ++s) {
      const Eigen::Index td = 1 + s % 2;
      auto phi = oracle::stinespring(name, d.source, oracle::random_kraus(rng, td, rd, 2, true));
      auto ind = induced_map(phi, d);
      double err = 0.0;
      for (Eigen::Index k = 0; k < d.source->dim(); ++k) {
        CVec xk = d.source->basis.col(k);
        err = std::max(err, (ind(d.P * d.source->coordinates(xk)) - phi(xk)).cwiseAbs().maxCoeff());
      }
      t.residual(err);
      t.check(err <= 1e-10 && ind.factor_residual <= 1e-10, name + " factorization error " + fmt(err));
      if (d.null_basis.cols() > 0) {
        CPMapCandidate bad = phi;
        CVec c = d.source->coordinates(d.null_basis.col(0));
        for (Eigen::Index k = 0; k < bad.domain->dim(); ++k) bad.images[k] += std::conj(c(k)) * CMat::Identity(td, td);
        bool rejected = false;
        try {
          induced_map(bad, d);
        } catch (const QosError& e) {
          rejected = e.kind() == ErrorKind::NullSpaceNotKilled;
        }
        auto v = null_space_violation(bad, d);
        const bool in_n = v && v->norm() > 0 && max_principal_angle(d.null_basis, *v) < 1e-8;
        t.check(rejected && in_n, name + " corrupted map not rejected with a null-space vector");
      }
    }
  }
}

// 8. the C*-seminorm
void criterion_8(Tally& t) {
  Rng rng(808);
  for (const auto& name : fixtures::names()) {
    auto a = fixtures::by_name(name);
    auto ctx = make_context(whole_algebra(a), 1, GramSpan::Generated, kTol);
    const int count = name == "ALG_M2" ? 100 : 30;
    for (int s = 0; s < count; ++s) {
      CVec x = random_cvec(rng, a->dim());
      const double v = seminorm(*ctx, x, kTol).value;
      const double op = spectral_norm(oracle::rep(name, x));
      const double sq = seminorm(*ctx, a->multiply(a->adjoint(x), x), kTol).value;
      const double tol_op = name == "ALG_M2" ? 1e-8 : 1e-6;
      t.residual(std::abs(v - op) / std::max(1.0, op));
      t.check(std::abs(v - op) <= tol_op * std::max(1.0, op), name + " seminorm " + fmt(v) + " vs spectral " + fmt(op));
      t.check(std::abs(sq - v * v) <= 1e-6 * std::max(1.0, v * v), name + " C*-law " + fmt(sq) + " vs " + fmt(v * v));
    }
    auto ideal = reducing_ideal(a, kTol);
    for (Eigen::Index k = 0; k < ideal.W_basis.cols(); ++k) {
      const double w = seminorm(*ctx, ideal.W_basis.col(k), kTol).value;
      t.check(w <= 1e-8, name + " seminorm on the ideal " + fmt(w));
    }
    // W agrees with the kernel of the oracle representation
    CMat rep_map(oracle::rep_dim(name) * oracle::rep_dim(name), a->dim());
    for (Eigen::Index k = 0; k < a->dim(); ++k) {
      CMat r = oracle::rep(name, CVec::Unit(a->dim(), k));
      rep_map.col(k) = Eigen::Map<const CVec>(r.data(), r.size());
    }
    CMat ker = null_space(rep_map);
    const bool same = ker.cols() == ideal.W_basis.cols() &&
                      (ker.cols() == 0 || max_principal_angle(ker, ideal.W_basis) < 1e-6);
    t.check(same, name + " reducing ideal differs from the zero set of the seminorm");
  }
}

// 9. entrywise bounds, matrix null spaces, compatibility
void criterion_9(Tally& t) {
  Rng rng(909);
  for (const auto& name : fixtures::names()) {
    auto a = fixtures::by_name(name);
    const Eigen::Index m = a->dim();
    auto whole = whole_algebra(a);
    auto c1 = make_context(whole, 1, GramSpan::Generated, kTol);
    for (int n = 2; n <= 3; ++n) {
      auto cn = make_context(whole, n, GramSpan::Generated, kTol);
      for (int s = 0; s < (n == 2 ? 5 : 2); ++s) {
        CVec z = random_cvec(rng, n * n * m);
        const double all = seminorm(*cn, z, kTol).value;
        double top = 0.0, sum = 0.0;
        for (int b = 0; b < n * n; ++b) {
          const double e = seminorm(*c1, z.segment(b * m, m), kTol).value;
          top = std::max(top, e);
          sum += e;
        }
        const bool equiv = std::isfinite(all) == std::isfinite(sum);
        t.check(equiv && top <= all + 1e-6 && all <= sum + 1e-6,
                name + " level " + std::to_string(n) + " entrywise bounds " + fmt(top) + " " + fmt(all) + " " + fmt(sum));
      }
    }
    auto d = archimedeanize(a, 1, kTol);
    const Eigen::Index k = d.null_basis.cols();
    for (int n = 2; n <= 3; ++n) {
      CMat nn = order_null_space(level_context(d, n, kTol)).basis_N;
      CMat mn = CMat::Zero(n * n * m, n * n * k);
      for (int b = 0; b < n * n; ++b) mn.block(b * m, b * k, m, k) = d.null_basis;
      const bool same = nn.cols() == mn.cols() && (mn.cols() == 0 || max_principal_angle(nn, mn) < 1e-6);
      t.check(same, name + " N_" + std::to_string(n) + " differs from M_n(N)");
    }
    std::vector<ContextPtr> levels;
    for (int n = 1; n <= 3; ++n) levels.push_back(make_context(whole, n, GramSpan::Generated, kTol));
    for (int s = 0; s < 50; ++s) {
      const int n = 1 + s % 3, q = 1 + (s / 3) % 3;
      CMat lambda = random_cmat(rng, n, q);
      t.check(compatibility_check(*levels[n - 1], *levels[q - 1], lambda, 1, rng, kTol),
              name + " compatibility " + std::to_string(n) + "x" + std::to_string(q));
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit;
    std::function<void(Tally&)> run;
  };
  const Criterion list[] = {
      {1, "correspondence round trips", 10.0, criterion_1},
      {2, "cone membership soundness", 60.0, criterion_2},
      {3, "state extension", 0.0, criterion_3},
      {4, "CP verdict vs brute force", 0.0, criterion_4},
      {5, "CP extension direct and pipeline", 600.0, criterion_5},
      {6, "Archimedeanization exactness", 0.0, criterion_6},
      {7, "induced maps", 0.0, criterion_7},
      {8, "seminorm correctness", 0.0, criterion_8},
      {9, "entrywise bounds, N_n = M_n(N), compatibility", 0.0, criterion_9},
  };
  int failed = 0;
  for (const auto& c : list) {
    Tally t;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(t);
    } catch (const std::exception& e) {
      t.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit > 0 && secs > c.limit) t.check(false, "runtime " + fmt(secs) + " s over " + fmt(c.limit) + " s");
    const bool ok = t.failures == 0;
    failed += ok ? 0 : 1;
    std::printf("criterion %d %s: %s (checks %d, failures %d, max residual %s, %.2f s)%s%s\n", c.id, c.title,
                ok ? "PASS" : "FAIL", t.checks, t.failures, fmt(t.worst).c_str(), secs, ok ? "" : " first: ",
                ok ? "" : t.first.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
