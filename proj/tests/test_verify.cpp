#include <doctest.h>

#include "qos/verify.hpp"

TEST_SUITE("verify") {
  TEST_CASE("suites pass on the fixtures and are deterministic") {
    qos::VerifyConfig cfg;
    cfg.seed = 7;
    cfg.samples = 2;
    cfg.levels = 2;
    auto a = qos::run_verify(cfg);
    for (const auto& s : a.suites) {
      INFO(s.name << " " << s.counterexamples.dump());
      CHECK(s.status == "pass");
    }
    auto b = qos::run_verify(cfg);
    CHECK(a.to_json(false) == b.to_json(false));
  }

  TEST_CASE("unknown suite rejected") {
    qos::VerifyConfig cfg;
    cfg.suites = {"nope"};
    CHECK_THROWS_AS(qos::run_verify(cfg), qos::QosError);
  }
}
