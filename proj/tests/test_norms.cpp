#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "qos/linalg.hpp"
#include "qos/norms.hpp"
#include "qos/realization.hpp"

using namespace qos;

namespace {

CVec vec(std::initializer_list<Complex> xs) {
  CVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_SUITE("seminorm") {

TEST_CASE("seminorm examples") {
  auto m2 = make_context(whole_algebra(fixtures::matrices2()));
  auto s = seminorm(*m2, vec({1, 0, 0, 2}));
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(s.witness_ok);
  CHECK(s.lower_ok);
  auto nil = make_context(whole_algebra(fixtures::nilpotent()));
  CHECK(seminorm(*nil, vec({0, 1})).value < 1e-8);
  CHECK(seminorm(*nil, vec({1, 0})).value == doctest::Approx(1.0).epsilon(1e-8));
  auto z2 = make_context(whole_algebra(fixtures::group_z2()));
  CHECK(seminorm(*z2, vec({1, 1})).value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("seminorm agrees with the operator norm") {
  Rng rng(21);
  for (const auto& name : fixtures::names()) {
    auto a = fixtures::by_name(name);
    auto ctx = make_context(whole_algebra(a));
    for (int t = 0; t < 5; ++t) {
      CVec x = random_cvec(rng, a->dim());
      auto s = seminorm(*ctx, x);
      CHECK_MESSAGE(s.value == doctest::Approx(spectral_norm(oracle::rep(name, x))).epsilon(1e-7), name);
      CHECK_MESSAGE(s.witness_ok, name);
      CHECK(s.lower_ok);
      auto ss = seminorm(*ctx, a->multiply(a->adjoint(x), x));
      CHECK(ss.value == doctest::Approx(s.value * s.value).epsilon(1e-6));
    }
  }
}

TEST_CASE("boundedness and the unit ball") {
  auto a = fixtures::group_z2();
  auto ctx = make_context(whole_algebra(a));
  CHECK(is_bounded(*ctx, vec({1, 0})).bound == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(is_bounded(*ctx, vec({0, 1})).bound == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(is_bounded(*ctx, vec({5, 0})).bound == doctest::Approx(5.0).epsilon(1e-5));
  CHECK(in_unit_ball(*ctx, vec({1, 0})));
  CHECK(in_unit_ball(*ctx, vec({0, 1})));
  CHECK_FALSE(in_unit_ball(*ctx, vec({2, 0})));
}

TEST_CASE("functional bounds") {
  Rng rng(4);
  auto a = fixtures::group_z2();
  auto r = cstar_realization(reducing_ideal(a), rng, 0);
  LinearFunctional f;
  f.domain = whole_algebra(a);
  f.coeffs = vec({1, -1});
  auto b = functional_bound(f, r);
  CHECK(b.positive_shortcut);
  CHECK(b.value == doctest::Approx(1.0));
  CHECK(functional_bound_exact(f, r).value == doctest::Approx(1.0).epsilon(1e-7));
  f.coeffs = vec({1, Complex(0, 1)});
  CHECK(functional_bound(f, r).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-7));
  f.coeffs = vec({0, 0});
  CHECK(functional_bound(f, r).value == 0.0);

  auto nil = fixtures::nilpotent();
  auto rn = cstar_realization(reducing_ideal(nil), rng, 0);
  LinearFunctional g;
  g.domain = whole_algebra(nil);
  g.coeffs = vec({0, 1});
  CHECK(functional_bound(g, rn).unbounded);
}

TEST_CASE("map bounds") {
  Rng rng(6);
  auto a = fixtures::matrices2();
  auto r = cstar_realization(reducing_ideal(a), rng, 0);
  auto sys = whole_algebra(a);
  auto id = oracle::stinespring("ALG_M2", sys, {CMat::Identity(2, 2)});
  auto b = map_bound(id, r, rng);
  CHECK(b.lower == doctest::Approx(1.0));
  CHECK(b.upper == doctest::Approx(1.0));

  CPMapCandidate zero = id;
  for (auto& im : zero.images) im.setZero();
  auto z = map_bound(zero, r, rng);
  CHECK(z.lower == 0.0);
  CHECK(z.upper == 0.0);

  // 3 f(x) I with f a state, not routed through the CP shortcut
  auto f = oracle::state("ALG_M2", sys, oracle::random_density(rng, 2));
  CPMapCandidate three;
  three.domain = sys;
  three.target_dim = 2;
  for (int k = 0; k < 4; ++k) three.images.push_back(3.0 * f.coeffs(k) * CMat::Identity(2, 2));
  auto t = map_bound(three, r, rng, 50, Tolerances::from_env(), CpHint::No);
  CHECK(t.lower == doctest::Approx(3.0).epsilon(1e-4));
  CHECK(t.upper == doctest::Approx(3.0).epsilon(1e-4));
}

}  // TEST_SUITE

TEST_SUITE("correspondence") {

TEST_CASE("reducing ideals of the fixtures") {
  auto nil = reducing_ideal(fixtures::nilpotent());
  REQUIRE(nil.W_basis.cols() == 1);
  CHECK(std::abs(nil.W_basis(0, 0)) < 1e-10);
  CHECK(nil.quotient->dim() == 1);
  CHECK(nil.max_seminorm < 1e-8);
  CHECK(reducing_ideal(fixtures::matrices2()).W_basis.cols() == 0);
  CHECK(reducing_ideal(fixtures::group_z2()).W_basis.cols() == 0);
  auto mix = reducing_ideal(fixtures::m2_plus_nil());
  CHECK(mix.W_basis.cols() == 1);
  CHECK(mix.quotient->dim() == 5);
  CHECK(mix.route_angle < 1e-6);
}

TEST_CASE("C* realizations") {
  Rng rng(13);
  for (const auto& name : fixtures::names()) {
    auto r = cstar_realization(reducing_ideal(fixtures::by_name(name)), rng);
    CHECK_MESSAGE(r.homomorphism_error < 1e-8, name);
    CHECK(r.injective);
    CHECK_MESSAGE(r.norm_check < 1e-6, name);
    CHECK(r.state_min_eig > 0);
  }
}

}  // TEST_SUITE
