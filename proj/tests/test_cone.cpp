#include "doctest.h"

#include "qos/cone.hpp"
#include "qos/linalg.hpp"

using namespace qos;

namespace {

CVec vec2(Complex a, Complex b) {
  CVec v(2);
  v << a, b;
  return v;
}

ContextPtr whole(const AlgebraPtr& a, int level = 1) { return make_context(whole_algebra(a), level); }

}  // namespace

TEST_SUITE("cone") {

TEST_CASE("gram images on small fixtures") {
  auto z2 = whole(fixtures::group_z2());
  CMat e1 = CMat::Zero(2, 2);
  e1(0, 0) = 1;
  CHECK((gram_image(*z2, e1) - vec2(1, 0)).norm() < 1e-12);
  CHECK((gram_image(*z2, CMat::Identity(2, 2)) - vec2(2, 0)).norm() < 1e-12);
  auto nil = whole(fixtures::nilpotent());
  CHECK((gram_image(*nil, CMat::Ones(2, 2)) - vec2(1, 2)).norm() < 1e-12);
  CHECK_THROWS_AS(gram_image(*nil, CMat::Ones(3, 3)), QosError);
}

TEST_CASE("membership in the Z2 cone") {
  auto ctx = whole(fixtures::group_z2());
  auto in = cone_membership(*ctx, vec2(2, 1));
  CHECK(in.status == sdp::Status::Feasible);
  CHECK(in.certificate.residual < 1e-8);
  CHECK(in.certificate.min_eig > -1e-8);

  auto out = cone_membership(*ctx, vec2(-2, 1));
  CHECK(out.status == sdp::Status::Infeasible);
  CHECK(out.dual.strict);
  // the separating state is evaluation at sigma = -1
  CHECK(out.dual.gamma(0) == doctest::Approx(1.0));
  CHECK(out.dual.gamma(1) == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(out.dual.value < 0);

  CHECK(cone_membership(*ctx, vec2(0, 0)).status == sdp::Status::Feasible);
  CHECK(cone_membership(*ctx, vec2(1, 0)).status == sdp::Status::Feasible);
  CHECK(cone_membership(*ctx, vec2(1, 1)).status == sdp::Status::Feasible);
  CHECK(cone_membership(*ctx, vec2(1, 1.001)).status == sdp::Status::Infeasible);
}

TEST_CASE("nilpotent cone is not closed") {
  auto ctx = whole(fixtures::nilpotent());
  auto r = cone_membership(*ctx, vec2(0, 1));
  CHECK(r.status == sdp::Status::Infeasible);
  CHECK(r.in_closure);
  CHECK(archimedean_membership(*ctx, vec2(0, 1), 1e-8));
  CHECK(archimedean_membership(*ctx, vec2(0, -1), 1e-8));
  CHECK(cone_membership(*ctx, vec2(1e-3, 1)).status == sdp::Status::Feasible);
  CHECK_FALSE(archimedean_membership(*ctx, vec2(-1, 0), 0.5));
}

TEST_CASE("input validation") {
  auto ctx = whole(fixtures::nilpotent());
  CHECK_THROWS_AS(cone_membership(*ctx, vec2(Complex(0, 1), 0)), QosError);
  auto m2 = fixtures::matrices2();
  CMat v = CMat::Zero(4, 1);
  v(1, 0) = 1;
  v(2, 0) = 1;
  auto sys = make_context(build_system(m2, v));
  CVec d = CVec::Zero(4);
  d(0) = 1;  // E11 is outside span{1, E12 + E21}
  try {
    cone_membership(*sys, d);
    CHECK(false);
  } catch (const QosError& e) {
    CHECK(e.kind() == ErrorKind::NotInSpan);
  }
}

TEST_CASE("order null spaces of the fixtures") {
  auto nil = order_null_space(whole(fixtures::nilpotent()));
  REQUIRE(nil.basis_N.cols() == 1);
  CHECK(std::abs(std::abs(nil.basis_N(1, 0)) - 1.0) < 1e-8);
  CHECK(order_null_space(whole(fixtures::matrices2())).basis_N.cols() == 0);
  CHECK(order_null_space(whole(fixtures::scalars())).basis_N.cols() == 0);
  CHECK(order_null_space(whole(fixtures::group_z2())).basis_N.cols() == 0);
}

TEST_CASE("order units") {
  CHECK(is_order_unit(*whole(fixtures::matrices2())));
  CHECK(is_order_unit(*whole(fixtures::nilpotent())));
  CHECK(is_order_unit(*whole(fixtures::group_z2(), 2)));
}

TEST_CASE("compression of cone members") {
  Rng rng(5);
  auto c = fixtures::scalars();
  CMat col = CMat::Zero(2, 1);
  col(0, 0) = 1;
  CVec one = CVec::Ones(1);
  CVec d = compress(c, one, 1, col.adjoint());
  CHECK(std::abs(d(0) - 1.0) < 1e-15);
  CHECK(std::abs(d(3)) < 1e-15);
  CHECK(compatibility_check(c, 1, 2, col.adjoint(), 5, rng));
  CHECK(compatibility_check(fixtures::group_z2(), 2, 2, CMat::Identity(2, 2), 5, rng));
  CHECK(compatibility_check(fixtures::group_z2(), 2, 1, random_cmat(rng, 2, 1), 10, rng));
}

TEST_CASE("random gram images pass") {
  Rng rng(17);
  for (const auto& name : fixtures::names()) {
    auto ctx = whole(fixtures::by_name(name));
    for (int t = 0; t < 5; ++t) {
      CVec z = random_cone_element(*ctx, rng);
      auto r = cone_membership(*ctx, z);
      CHECK_MESSAGE(r.status == sdp::Status::Feasible, name);
      CHECK(r.certificate.residual < 1e-8);
    }
    CVec neg = -ctx->ambient()->unit();
    auto r = cone_membership(*ctx, neg);
    CHECK(r.status == sdp::Status::Infeasible);
    CHECK(r.dual.strict);
  }
}

}
