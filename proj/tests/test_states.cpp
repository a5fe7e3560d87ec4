#include "doctest.h"

#include "oracles.hpp"
#include "qos/linalg.hpp"
#include "qos/norms.hpp"
#include "qos/realization.hpp"
#include "qos/states.hpp"

using namespace qos;

namespace {

CPMapCandidate identity_map(const SystemPtr& sys) {
  return oracle::stinespring("ALG_M2", sys, {CMat::Identity(2, 2)});
}

CPMapCandidate transpose_map(const SystemPtr& sys) {
  CPMapCandidate phi;
  phi.domain = sys;
  phi.target_dim = 2;
  for (Eigen::Index k = 0; k < sys->dim(); ++k) phi.images.push_back(oracle::rep("ALG_M2", sys->basis.col(k)).transpose());
  return phi;
}

CStarRealization realize(const AlgebraPtr& a, Rng& rng) { return cstar_realization(reducing_ideal(a), rng, 0); }

}  // namespace

TEST_SUITE("states") {

TEST_CASE("map and functional correspondence round trips") {
  Rng rng(7);
  auto sys = whole_algebra(fixtures::matrices2());
  for (int n = 1; n <= 3; ++n) {
    CPMapCandidate phi;
    phi.domain = sys;
    phi.target_dim = n;
    for (int k = 0; k < 4; ++k) phi.images.push_back(random_cmat(rng, n, n));
    CPMapCandidate back = functional_to_map(map_to_functional(phi), sys, n);
    for (int k = 0; k < 4; ++k) CHECK((back.images[k] - phi.images[k]).norm() < 1e-12);
  }
}

TEST_CASE("f_phi pairs phi_n with the maximally entangled vector") {
  Rng rng(8);
  auto sys = whole_algebra(fixtures::group_z2());
  auto phi = oracle::stinespring("ALG_Z2", sys, oracle::random_kraus(rng, 2, 2, 2, false));
  auto f = map_to_functional(phi);
  CVec e = CVec::Zero(4);
  e(0) = e(3) = 1.0;
  for (int t = 0; t < 5; ++t) {
    CVec z = random_cvec(rng, f.domain->ambient->dim());
    Complex expect = (e.adjoint() * phi.amplified(z) * e)(0) / 2.0;
    CHECK(std::abs(f(z) - expect) < 1e-12);
  }
}

TEST_CASE("positivity of functionals") {
  auto a = fixtures::group_z2();
  auto ctx = make_context(whole_algebra(a));
  LinearFunctional f;
  f.domain = ctx->system;
  f.coeffs = CVec(2);
  f.coeffs << 1.0, 0.5;
  CHECK(functional_positive(f, *ctx).positive);
  f.coeffs << 1.0, -2.0;
  auto r = functional_positive(f, *ctx);
  CHECK_FALSE(r.positive);
  // the returned Gram matrix is an independent witness
  CHECK(min_eigenvalue(r.gram) > -1e-8);
  CHECK(f(gram_image(*ctx, r.gram)).real() < -1e-3);
  f.coeffs << 1.0, Complex(0.0, 1.0);
  auto s = functional_positive(f, *ctx);
  CHECK_FALSE(s.self_adjoint);
  CHECK_FALSE(s.positive);
}

TEST_CASE("identity is CP and transpose is not") {
  auto sys = whole_algebra(fixtures::matrices2());
  CHECK(is_completely_positive(identity_map(sys)).completely_positive);
  auto t = is_completely_positive(transpose_map(sys));
  CHECK_FALSE(t.completely_positive);
  REQUIRE(t.violating.size() == 16);
  // the violating element is psd under rho_2 but its transpose image is not
  CHECK(min_eigenvalue(hermitian_part(oracle::rep_n("ALG_M2", t.violating, 2))) > -1e-8);
  CHECK(min_eigenvalue(hermitian_part(transpose_map(sys).amplified(t.violating))) < -1e-4);
}

TEST_CASE("Stinespring maps on random systems are CP") {
  Rng rng(11);
  for (const auto& name : fixtures::names()) {
    auto a = fixtures::by_name(name);
    auto sys = oracle::random_system(a, rng, 1);
    auto ks = oracle::random_kraus(rng, 2, oracle::rep_dim(name), 2, true);
    auto phi = oracle::stinespring(name, sys, ks);
    CHECK_MESSAGE(is_completely_positive(phi).completely_positive, name);
  }
}

TEST_CASE("state extension") {
  auto a = fixtures::group_z2();
  auto x = build_system(a, CMat::Zero(2, 0));
  LinearFunctional f;
  f.domain = x;
  f.coeffs = CVec::Constant(1, 1.0);
  auto e = extend_state(f);
  CHECK(e.status == sdp::Status::Feasible);
  CHECK(e.restriction_residual < 1e-8);
  Complex t = e.extension(CVec::Unit(2, 1));
  CHECK(std::abs(t.imag()) < 1e-8);
  CHECK(std::abs(t.real()) <= 1.0 + 1e-8);

  f.coeffs(0) = 0.0;
  auto z = extend_state(f);
  CHECK(z.extension.coeffs.norm() == 0.0);

  Rng rng(3);
  for (const auto& name : fixtures::names()) {
    auto alg = fixtures::by_name(name);
    auto sys = oracle::random_system(alg, rng, 1);
    auto g = oracle::state(name, sys, oracle::random_density(rng, oracle::rep_dim(name)));
    auto ext = extend_state(g);
    CHECK_MESSAGE(ext.status == sdp::Status::Feasible, name);
    CHECK(ext.restriction_residual < 1e-8);
    CHECK(ext.margin > -1e-8);
  }
}

TEST_CASE("symmetrized extension") {
  Rng rng(5);
  auto a = fixtures::matrices2();
  auto r = realize(a, rng);
  CMat e12 = CMat::Zero(4, 1);
  e12(1, 0) = 1.0;
  auto x = build_space(a, e12);
  CHECK_FALSE(x->self_adjoint);
  auto phi = identity_map(x);
  auto ext = symmetrized_extension(phi, r, rng);
  CHECK(ext.domain->dim() == 3);
  for (int k = 0; k < 3; ++k)
    CHECK((ext.images[k] - oracle::rep("ALG_M2", ext.domain->basis.col(k))).norm() < 1e-10);

  CPMapCandidate twice = phi;
  for (auto& im : twice.images) im *= 2.0;
  CHECK_THROWS_AS(symmetrized_extension(twice, r, rng), QosError);
}

TEST_CASE("contractivity verdicts") {
  Rng rng(9);
  auto a = fixtures::matrices2();
  auto r = realize(a, rng);
  auto sys = whole_algebra(a);
  auto id = contractivity_equivalence_check(identity_map(sys), r, rng);
  CHECK(id.functional == Verdict::Contractive);
  CHECK(id.n_contractive == Verdict::Contractive);
  CHECK(id.complete == Verdict::Contractive);
  CHECK(id.consistent);

  auto phi2 = identity_map(sys);
  for (auto& im : phi2.images) im *= 2.0;
  auto two = contractivity_equivalence_check(phi2, r, rng);
  CHECK(two.functional == Verdict::NotContractive);
  CHECK(two.n_contractive == Verdict::NotContractive);
  CHECK(two.complete == Verdict::NotContractive);

  auto tr = contractivity_equivalence_check(transpose_map(sys), r, rng);
  CHECK(tr.functional == Verdict::NotContractive);
  CHECK(tr.functional_bound == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(tr.n_contractive == Verdict::NotContractive);
  CHECK(tr.map_lower == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(tr.consistent);
}

}  // TEST_SUITE
