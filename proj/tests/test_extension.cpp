#include "doctest.h"

#include "oracles.hpp"
#include "qos/extension.hpp"
#include "qos/linalg.hpp"

using namespace qos;

namespace {

CPMapCandidate transpose_map(const SystemPtr& sys) {
  CPMapCandidate phi;
  phi.domain = sys;
  phi.target_dim = 2;
  for (Eigen::Index k = 0; k < sys->dim(); ++k) phi.images.push_back(oracle::rep("ALG_M2", sys->basis.col(k)).transpose());
  return phi;
}

void check_valid(const ExtensionResult& r, const std::string& label) {
  CHECK_MESSAGE(r.status == sdp::Status::Feasible, label);
  CHECK_MESSAGE(r.restriction_residual <= 1e-7, label);
  CHECK_MESSAGE(r.moment_min_eig >= -1e-8, label);
}

}  // namespace

TEST_SUITE("extension") {

TEST_CASE("extension from the whole algebra is the map itself") {
  Rng rng(1);
  auto sys = whole_algebra(fixtures::matrices2());
  auto phi = oracle::stinespring("ALG_M2", sys, oracle::random_kraus(rng, 2, 2, 2, true));
  auto r = extend_cp_direct(phi);
  check_valid(r, "M2");
  for (int k = 0; k < 4; ++k) CHECK((r.psi.images[k] - phi.images[k]).norm() < 1e-9);
}

TEST_CASE("state on span{1, E12, E21}") {
  auto a = fixtures::matrices2();
  CMat v = CMat::Zero(4, 1);
  v(1, 0) = 1.0;
  auto x = build_system(a, v);
  REQUIRE(x->dim() == 3);
  CPMapCandidate phi;
  phi.domain = x;
  phi.target_dim = 1;
  for (Eigen::Index k = 0; k < 3; ++k) {
    CVec b = x->basis.col(k);
    phi.images.push_back(CMat::Constant(1, 1, (b(0) + b(3)) / 2.0));
  }
  auto r = extend_cp_direct(phi);
  check_valid(r, "trace/2");
  Rng rng(4);
  CHECK(verify_extension(r.psi, phi, rng).ok);
}

TEST_CASE("transpose has no CP extension") {
  auto sys = whole_algebra(fixtures::matrices2());
  auto r = extend_cp_direct(transpose_map(sys));
  CHECK(r.status == sdp::Status::Infeasible);
  CHECK(min_eigenvalue(r.dual_gram) > -1e-10);
  CHECK(r.dual_gram.trace().real() == doctest::Approx(1.0));
  CHECK(r.dual_value < -1e-3);
  CHECK(r.dual_residual < 1e-8);
}

TEST_CASE("transpose on the diagonal extends") {
  auto a = fixtures::matrices2();
  CMat v = CMat::Zero(4, 1);
  v(0, 0) = 1.0;
  auto x = build_system(a, v);
  auto phi = transpose_map(x);
  auto r = extend_cp_direct(phi);
  check_valid(r, "diagonal transpose");
  Rng rng(5);
  CHECK(verify_extension(r.psi, phi, rng).ok);
  auto full = transpose_map(whole_algebra(a));
  double diff = 0.0;
  for (int k = 0; k < 4; ++k) diff = std::max(diff, (r.psi.images[k] - full.images[k]).norm());
  CHECK(diff > 1e-3);
}

TEST_CASE("corrupted extension is flagged") {
  Rng rng(6);
  auto sys = whole_algebra(fixtures::group_z2());
  auto phi = oracle::stinespring("ALG_Z2", sys, oracle::random_kraus(rng, 2, 2, 2, true));
  auto r = extend_cp_direct(phi);
  check_valid(r, "Z2");
  auto bad = r.psi;
  bad.images[0](0, 0) = -1.0;
  auto rep = verify_extension(bad, phi, rng);
  CHECK_FALSE(rep.ok);
  CHECK(rep.moment_min_eig < -1e-3);
}

TEST_CASE("nilpotent pipeline routes through the scalars") {
  Rng rng(8);
  auto sys = whole_algebra(fixtures::nilpotent());
  CPMapCandidate phi;
  phi.domain = sys;
  phi.target_dim = 1;
  phi.images = {CMat::Ones(1, 1), CMat::Zero(1, 1)};
  auto r = extend_cp_pipeline(phi, rng);
  check_valid(r, "NIL");
  CHECK(r.trace.arch_dim == 1);
  CHECK(r.trace.quotient_dim == 1);
  CHECK(std::abs(r.psi.images[0](0, 0) - 1.0) < 1e-9);
  CHECK(std::abs(r.psi.images[1](0, 0)) < 1e-9);
}

TEST_CASE("unit system extends to a unital CP map") {
  Rng rng(9);
  for (const auto& name : fixtures::names()) {
    auto a = fixtures::by_name(name);
    auto x = build_system(a, CMat::Zero(a->dim(), 0));
    CPMapCandidate phi;
    phi.domain = x;
    phi.target_dim = 2;
    phi.images = {CMat::Identity(2, 2) / x->coordinates(a->unit())(0)};
    CHECK(phi.is_unital(1e-10));
    check_valid(extend_cp_pipeline(phi, rng), name);
  }
}

TEST_CASE("Stinespring maps extend by both methods") {
  Rng rng(12);
  for (const auto& name : fixtures::names()) {
    auto a = fixtures::by_name(name);
    for (int t = 0; t < 2; ++t) {
      auto x = oracle::random_system(a, rng, 1);
      auto phi = oracle::stinespring(name, x, oracle::random_kraus(rng, 2, oracle::rep_dim(name), 2, true));
      auto direct = extend_cp_direct(phi);
      check_valid(direct, name + " direct");
      CHECK_MESSAGE(verify_extension(direct.psi, phi, rng, 50).ok, name);
      auto pipe = extend_cp_pipeline(phi, rng);
      check_valid(pipe, name + " pipeline");
      CHECK(pipe.trace.step2_angle < 1e-6);
      CHECK(pipe.trace.theta_residual < 1e-10);
      CHECK(pipe.trace.transfer_residual > 1e-8);
      CHECK(pipe.trace.step5_forward_failures == 0);
      CHECK(pipe.trace.step5_backward_failures == 0);
    }
  }
}

}  // TEST_SUITE
