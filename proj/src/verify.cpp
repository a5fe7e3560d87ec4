#include "qos/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include "qos/arch.hpp"
#include "qos/extension.hpp"
#include "qos/linalg.hpp"
#include "qos/norms.hpp"
#include "qos/realization.hpp"
#include "qos/states.hpp"

namespace qos {

using Json = nlohmann::json;

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"correspondence", "lemma2_2", "lemma2_3", "thm2_1",  "thm2_5", "thm2_8",
                                              "lemma3_1",       "lemma3_3", "arch",     "thm3_5",  "thm3_6", "seminorm"};
  return names;
}

bool VerifyReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.status != "fail"; });
}

Json VerifyReport::to_json(bool timing) const {
  Json out = {{"seed", seed}, {"passed", passed()}, {"suites", Json::array()}};
  for (const auto& s : suites) {
    Json j = {{"name", s.name},
              {"status", s.status},
              {"checks", s.checks},
              {"failures", s.failures},
              {"max_residual", s.max_residual},
              {"counterexamples", s.counterexamples}};
    if (timing) j["seconds"] = s.seconds;
    out["suites"].push_back(j);
  }
  return out;
}

namespace {

struct Run {
  const VerifyConfig& cfg;
  SuiteResult& res;
  Tolerances tol;
  std::string fixture;

  Rng rng_for(const std::string& name) const {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(std::hash<std::string>{}(res.name + "/" + name))};
    return Rng(seq);
  }
  void check(bool ok, Json detail = {}) {
    ++res.checks;
    if (!ok) {
      ++res.failures;
      if (res.counterexamples.size() < 10) {
        detail["fixture"] = fixture;
        detail["seed"] = cfg.seed;
        res.counterexamples.push_back(detail);
      }
    }
  }
  void residual(double r) { res.max_residual = std::max(res.max_residual, r); }
};

SystemPtr random_system(const AlgebraPtr& a, Rng& rng, int extra) {
  CMat v(a->dim(), extra);
  for (int k = 0; k < extra; ++k) {
    CVec x = random_cvec(rng, a->dim());
    v.col(k) = x + a->adjoint(x);
  }
  return build_system(a, v);
}

std::vector<CMat> random_kraus(Rng& rng, Eigen::Index d, Eigen::Index r, int count, bool unital) {
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

// x -> sum_k V_k rho(x) V_k^*
CPMapCandidate stinespring(const CStarRealization& r, const SystemPtr& x, const std::vector<CMat>& kraus) {
  CPMapCandidate phi;
  phi.domain = x;
  phi.target_dim = kraus.front().rows();
  for (Eigen::Index k = 0; k < x->dim(); ++k) {
    CMat rho = represent(r, x->basis.col(k));
    CMat img = CMat::Zero(phi.target_dim, phi.target_dim);
    for (const auto& v : kraus) img += v * rho * v.adjoint();
    phi.images.push_back(img);
  }
  return phi;
}

LinearFunctional random_state(const CStarRealization& r, const SystemPtr& x, Rng& rng) {
  CMat dens = random_psd(rng, r.rep_dim());
  dens /= dens.trace().real();
  LinearFunctional f;
  f.domain = x;
  f.coeffs.resize(x->dim());
  for (Eigen::Index k = 0; k < x->dim(); ++k) f.coeffs(k) = (dens * represent(r, x->basis.col(k))).trace();
  return f;
}

// t 1 + h with h a random self-adjoint element of the level-n system, t at or just above the boundary
CVec boundary_element(const ConeContext& ctx, Rng& rng, const Tolerances& tol) {
  CVec h = ctx.system->basis * random_cvec(rng, ctx.system->dim());
  h = h + ctx.ambient()->adjoint(h);
  RVec eta = frame_coords(ctx, h);
  std::uniform_real_distribution<double> margin(0.0, 1e-3);
  const double t = support(ctx, -eta, tol).value + (rng() % 2 ? margin(rng) : 0.0);
  return h + t * ctx.ambient()->unit();
}

CStarRealization realize(const AlgebraPtr& a, Rng& rng, const Tolerances& tol) {
  return cstar_realization(reducing_ideal(a, tol), rng, 0, tol);
}

void suite_correspondence(Run& run, const AlgebraPtr& a) {
  Rng rng = run.rng_for(run.fixture);
  auto x = whole_algebra(a);
  for (int n = 1; n <= run.cfg.levels; ++n)
    for (int s = 0; s < run.cfg.samples; ++s) {
      CPMapCandidate phi;
      phi.domain = x;
      phi.target_dim = n;
      for (Eigen::Index k = 0; k < x->dim(); ++k) phi.images.push_back(random_cmat(rng, n, n));
      CPMapCandidate back = functional_to_map(map_to_functional(phi), x, n);
      double err = 0.0;
      for (Eigen::Index k = 0; k < x->dim(); ++k) err = std::max(err, (back.images[k] - phi.images[k]).norm());
      LinearFunctional f = map_to_functional(phi);
      f.coeffs = random_cvec(rng, f.coeffs.size());
      err = std::max(err, (map_to_functional(functional_to_map(f, x, n)).coeffs - f.coeffs).norm());
      run.residual(err);
      run.check(err <= 1e-12, {{"level", n}, {"error", err}});
    }
}

void suite_lemma2_2(Run& run, const AlgebraPtr& a) {
  Rng rng = run.rng_for(run.fixture);
  for (int n = 1; n <= std::min(2, run.cfg.levels); ++n) {
    auto ctx = make_context(whole_algebra(a), n, GramSpan::Generated, run.tol);
    for (int s = 0; s < run.cfg.samples; ++s) {
      CVec z = random_cone_element(*ctx, rng);
      ConeDecision d = cone_membership(*ctx, z, run.tol);
      const bool ok = d.status == sdp::Status::Feasible;
      const double res = ok ? (gram_image(*ctx, d.certificate.gram) - z).norm() : 1.0;
      run.residual(res);
      run.check(ok && res <= 1e-8 && min_eigenvalue(d.certificate.gram) >= -1e-8, {{"level", n}, {"kind", "member"}});

      // (s + 0.1) 1 - ... pushed below every state
      CVec h = ctx->system->basis * random_cvec(rng, ctx->system->dim());
      h = h + ctx->ambient()->adjoint(h);
      const double top = support(*ctx, frame_coords(*ctx, h), run.tol).value;
      CVec bad = h - (top + 0.1) * ctx->ambient()->unit();
      ConeDecision r = cone_membership(*ctx, bad, run.tol);
      const bool rejected = r.status == sdp::Status::Infeasible && r.dual.strict &&
                            min_eigenvalue(ctx->moment(r.dual.gamma)) >= -1e-8 &&
                            r.dual.gamma.dot(frame_coords(*ctx, bad)) < 0.0;
      run.check(rejected, {{"level", n}, {"kind", "non-member"}});
    }
  }
}

void suite_lemma2_3(Run& run, const AlgebraPtr& a) {
  Rng rng = run.rng_for(run.fixture);
  auto c1 = make_context(whole_algebra(a), 1, GramSpan::Generated, run.tol);
  auto c2 = make_context(whole_algebra(a), 2, GramSpan::Generated, run.tol);
  const Eigen::Index m = a->dim();
  for (int s = 0; s < run.cfg.samples; ++s) {
    CVec z = random_cvec(rng, 4 * m);
    const double whole = seminorm(*c2, z, run.tol).value;
    double top = 0.0, sum = 0.0;
    for (int b = 0; b < 4; ++b) {
      const double e = seminorm(*c1, z.segment(b * m, m), run.tol).value;
      top = std::max(top, e);
      sum += e;
    }
    const bool equivalent = std::isfinite(whole) == std::isfinite(sum);
    run.check(equivalent && (!std::isfinite(whole) || (top <= whole + 1e-6 && whole <= sum + 1e-6)),
              {{"matrix", whole}, {"max_entry", top}, {"entry_sum", sum}});
  }
}

void suite_thm2_1(Run& run, const AlgebraPtr& a) {
  Rng rng = run.rng_for(run.fixture);
  auto r = realize(a, rng, run.tol);
  for (int s = 0; s < run.cfg.samples; ++s) {
    auto x = random_system(a, rng, 1 + s % 2);
    auto f = random_state(r, x, rng);
    auto e = extend_state(f, run.tol);
    const double fb = functional_bound_exact(f, r, run.tol).value;
    const double eb = functional_bound_exact(e.extension, r, run.tol).value;
    run.residual(e.restriction_residual);
    run.check(e.status == sdp::Status::Feasible && e.restriction_residual <= 1e-8 && std::abs(fb - eb) <= 1e-6,
              {{"restriction_residual", e.restriction_residual}, {"bound_f", fb}, {"bound_ext", eb}});
  }
}

void suite_thm2_5(Run& run, const AlgebraPtr& a) {
  Rng rng = run.rng_for(run.fixture);
  auto r = realize(a, rng, run.tol);
  const Eigen::Index d = 2;
  for (int s = 0; s < run.cfg.samples; ++s) {
    auto x = random_system(a, rng, 1);
    auto ctx = make_context(x, static_cast<int>(d), GramSpan::Generated, run.tol);
    auto phi = stinespring(r, x, random_kraus(rng, d, r.rep_dim(), 2, false));
    if (s % 2) {
      std::normal_distribution<double> g(0.0, 0.5);
      const double t = std::abs(g(rng));
      for (auto& im : phi.images) {
        CMat p = random_cmat(rng, d, d);
        im += t * (p + p.adjoint());
      }
      // keep phi self-adjoint
      CPMapCandidate sym = phi;
      for (Eigen::Index k = 0; k < x->dim(); ++k) {
        CVec c = x->coordinates(a->adjoint(x->basis.col(k)));
        CMat adj = CMat::Zero(d, d);
        for (Eigen::Index l = 0; l < x->dim(); ++l) adj += std::conj(c(l)) * phi.images[l].adjoint();
        sym.images[k] = 0.5 * (phi.images[k] + adj);
      }
      phi = sym;
    }
    CPResult cp = is_completely_positive(phi, *ctx, run.tol);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      CVec z = boundary_element(*ctx, rng, run.tol);
      worst = std::min(worst, min_eigenvalue(hermitian_part(phi.amplified(z))) / std::max(1.0, z.norm()));
    }
    run.check(!(cp.completely_positive && worst < -1e-6), {{"sdp_cp", true}, {"sample_min_eig", worst}});
    if (!cp.completely_positive && cp.violating.size()) {
      const double in_cone = min_eigenvalue(hermitian_part(represent_element(r, ctx->ambient(), cp.violating)));
      const double image = min_eigenvalue(hermitian_part(phi.amplified(cp.violating)));
      run.check(in_cone >= -1e-7 && image < 0.0, {{"violating_rep_min_eig", in_cone}, {"violating_image_min_eig", image}});
    }
  }
  if (a->dim() == 4 && a->names().front() == "E11") {
    auto x = whole_algebra(a);
    CPMapCandidate tr;
    tr.domain = x;
    tr.target_dim = 2;
    for (Eigen::Index k = 0; k < 4; ++k) tr.images.push_back(represent(r, x->basis.col(k)).transpose());
    run.check(!is_completely_positive(tr, run.tol).completely_positive, {{"map", "transpose"}});
  }
}

void suite_thm2_8(Run& run, const AlgebraPtr& a) {
  Rng rng = run.rng_for(run.fixture);
  auto r = realize(a, rng, run.tol);
  for (int s = 0; s < std::max(1, run.cfg.samples / 2); ++s) {
    auto x = random_system(a, rng, 1);
    auto phi = stinespring(r, x, random_kraus(rng, 2, r.rep_dim(), 2, true));
    auto rep = contractivity_equivalence_check(phi, r, rng, run.tol);
    run.check(rep.consistent && rep.functional == Verdict::Contractive && rep.complete != Verdict::NotContractive,
              {{"functional", to_string(rep.functional)}, {"n", to_string(rep.n_contractive)}});
    for (auto& im : phi.images) im *= 2.0;
    auto twice = contractivity_equivalence_check(phi, r, rng, run.tol);
    run.check(twice.consistent && twice.functional == Verdict::NotContractive &&
                  twice.n_contractive == Verdict::NotContractive,
              {{"functional", to_string(twice.functional)}, {"n", to_string(twice.n_contractive)}});
  }
}

void suite_lemma3_1(Run& run, const AlgebraPtr& a) {
  Rng rng = run.rng_for(run.fixture);
  for (int s = 0; s < run.cfg.samples; ++s) {
    const int n = 1 + static_cast<int>(rng() % 2), m = 1 + static_cast<int>(rng() % 2);
    CMat lambda = random_cmat(rng, n, m);
    run.check(compatibility_check(a, n, m, lambda, 3, rng, run.tol), {{"n", n}, {"m", m}});
  }
}

void suite_lemma3_3(Run& run, const AlgebraPtr& a) {
  auto d = archimedeanize(a, 1, run.tol);
  const Eigen::Index m = a->dim();
  const Eigen::Index k = d.null_basis.cols();
  for (int n = 2; n <= run.cfg.levels; ++n) {
    CMat nn = order_null_space(level_context(d, n, run.tol)).basis_N;
    CMat mn = CMat::Zero(n * n * m, n * n * k);
    for (int b = 0; b < n * n; ++b) mn.block(b * m, b * k, m, k) = d.null_basis;
    const double angle = max_principal_angle(nn, mn);
    run.residual(angle);
    run.check(angle < 1e-6, {{"level", n}, {"angle", angle}});
  }
}

void suite_arch(Run& run, const AlgebraPtr& a) {
  Rng rng = run.rng_for(run.fixture);
  auto d = archimedeanize(a, 2, run.tol);
  run.check(d.full && d.proper && d.archimedean, {{"full", d.full}, {"proper", d.proper}, {"archimedean", d.archimedean}});
  for (int n = 1; n <= 2; ++n) {
    auto ctx = level_context(d, n, run.tol);
    for (int s = 0; s < run.cfg.samples; ++s) {
      CVec z = random_cone_element(*ctx, rng);
      run.check(arch_cone_membership(d, d.project(z, n), n, 1e-8, run.tol).member, {{"level", n}});
    }
  }
  if (run.fixture == "ALG_NIL") {
    CVec x = CVec::Unit(2, 1);
    run.check(d.null_basis.cols() == 1 && d.quotient_dim() == 1 && d.project(x).norm() < 1e-14, {{"case", "nil"}});
  }
  if (run.fixture == "ALG_M2") run.check(d.null_basis.cols() == 0, {{"case", "m2"}});
}

void suite_thm3_5(Run& run, const AlgebraPtr& a) {
  Rng rng = run.rng_for(run.fixture);
  auto r = realize(a, rng, run.tol);
  for (int s = 0; s < run.cfg.samples; ++s) {
    auto x = random_system(a, rng, 1 + s % 2);
    auto phi = stinespring(r, x, random_kraus(rng, 2, r.rep_dim(), 2, s % 2 == 0));
    auto direct = extend_cp_direct(phi, run.tol);
    run.residual(direct.restriction_residual);
    run.check(direct.status == sdp::Status::Feasible && direct.restriction_residual <= 1e-7 &&
                  direct.moment_min_eig >= -1e-8,
              {{"method", "direct"}, {"residual", direct.restriction_residual}, {"min_eig", direct.moment_min_eig}});
    auto pipe = extend_cp_pipeline(phi, rng, run.tol);
    const auto& t = pipe.trace;
    run.check(pipe.status == sdp::Status::Feasible && pipe.restriction_residual <= 1e-7 &&
                  pipe.moment_min_eig >= -1e-8 && t.step2_angle < 1e-6 && t.step5_forward_failures == 0 &&
                  t.step5_backward_failures == 0,
              {{"method", "pipeline"}, {"residual", pipe.restriction_residual}, {"min_eig", pipe.moment_min_eig},
               {"step2_angle", t.step2_angle}});
  }
}

void suite_thm3_6(Run& run, const AlgebraPtr& a) {
  Rng rng = run.rng_for(run.fixture);
  auto r = realize(a, rng, run.tol);
  auto d = archimedeanize(a, 1, run.tol);
  for (int s = 0; s < run.cfg.samples; ++s) {
    auto phi = stinespring(r, d.source, random_kraus(rng, 2, r.rep_dim(), 2, true));
    auto ind = induced_map(phi, d);
    run.residual(ind.factor_residual);
    run.check(ind.factor_residual <= 1e-10, {{"factor_residual", ind.factor_residual}});
    if (d.null_basis.cols() > 0) {
      CPMapCandidate bad = phi;
      CVec c = d.source->coordinates(d.null_basis.col(0));
      for (Eigen::Index k = 0; k < bad.domain->dim(); ++k) bad.images[k] += std::conj(c(k)) * CMat::Identity(2, 2);
      bool thrown = false;
      try {
        induced_map(bad, d);
      } catch (const QosError& e) {
        thrown = e.kind() == ErrorKind::NullSpaceNotKilled;
      }
      run.check(thrown && null_space_violation(bad, d).has_value(), {{"case", "corrupted"}});
    }
  }
}

void suite_seminorm(Run& run, const AlgebraPtr& a) {
  Rng rng = run.rng_for(run.fixture);
  auto ctx = make_context(whole_algebra(a), 1, GramSpan::Generated, run.tol);
  auto ideal = reducing_ideal(a, run.tol);
  auto r = cstar_realization(ideal, rng, 0, run.tol);
  for (int s = 0; s < run.cfg.samples; ++s) {
    CVec x = random_cvec(rng, a->dim());
    auto sx = seminorm(*ctx, x, run.tol);
    const double op = spectral_norm(represent(r, x));
    const double law = seminorm(*ctx, a->multiply(a->adjoint(x), x), run.tol).value;
    run.residual(std::abs(sx.value - op));
    run.check(std::abs(sx.value - op) <= 1e-6 * std::max(1.0, op) &&
                  std::abs(law - sx.value * sx.value) <= 1e-6 * std::max(1.0, law) && sx.witness_ok && sx.lower_ok,
              {{"seminorm", sx.value}, {"operator_norm", op}, {"square", law}});
  }
  for (Eigen::Index k = 0; k < ideal.W_basis.cols(); ++k) {
    const double v = seminorm(*ctx, ideal.W_basis.col(k), run.tol).value;
    run.check(v <= 1e-8, {{"ideal_element", k}, {"seminorm", v}});
  }
}

using SuiteFn = void (*)(Run&, const AlgebraPtr&);

const std::map<std::string, SuiteFn>& suite_table() {
  static const std::map<std::string, SuiteFn> table{
      {"correspondence", suite_correspondence}, {"lemma2_2", suite_lemma2_2}, {"lemma2_3", suite_lemma2_3},
      {"thm2_1", suite_thm2_1},                 {"thm2_5", suite_thm2_5},     {"thm2_8", suite_thm2_8},
      {"lemma3_1", suite_lemma3_1},             {"lemma3_3", suite_lemma3_3}, {"arch", suite_arch},
      {"thm3_5", suite_thm3_5},                 {"thm3_6", suite_thm3_6},     {"seminorm", suite_seminorm}};
  return table;
}

}  // namespace

VerifyReport run_verify(const VerifyConfig& config) {
  if (config.levels < 1 || config.levels > 3) throw QosError(ErrorKind::LevelMismatch, "levels must be in 1..3");
  std::vector<std::pair<std::string, AlgebraPtr>> algebras;
  for (const auto& name : config.fixtures.empty() ? fixtures::names() : config.fixtures)
    algebras.emplace_back(name, fixtures::by_name(name));
  std::vector<std::string> selected = config.suites.empty() ? suite_names() : config.suites;
  for (const auto& s : selected)
    if (!suite_table().count(s)) throw QosError(ErrorKind::FixtureNotFound, "unknown suite " + s);

  Tolerances tol = Tolerances::from_env();
  tol.eps_psd = config.eps;
  tol.eps_affine = config.eps;
  VerifyReport report;
  report.seed = config.seed;
  for (const auto& name : selected) {
    SuiteResult res;
    res.name = name;
    const auto start = std::chrono::steady_clock::now();
    bool indeterminate = false;
    for (const auto& [fixture, alg] : algebras) {
      Run run{config, res, tol, fixture};
      try {
        suite_table().at(name)(run, alg);
      } catch (const QosError& e) {
        if (e.kind() == ErrorKind::Indeterminate) {
          indeterminate = true;
        } else {
          run.check(false, {{"error", e.what()}});
        }
      }
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.status = res.failures > 0 ? "fail" : (indeterminate ? "inconclusive" : "pass");
    report.suites.push_back(std::move(res));
  }
  return report;
}

}  // namespace qos
