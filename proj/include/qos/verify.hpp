#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qos/common.hpp"

namespace qos {

struct VerifyConfig {
  std::uint64_t seed = 1;
  double eps = 1e-8;
  int levels = 3;   // at most 3
  int samples = 10; // random instances per fixture and level
  std::vector<std::string> fixtures;  // empty: all shipped fixtures
  std::vector<std::string> suites;    // empty: all suites
};

const std::vector<std::string>& suite_names();

struct SuiteResult {
  std::string name;
  std::string status;  // pass | fail | inconclusive
  int checks = 0;
  int failures = 0;
  double max_residual = 0.0;
  double seconds = 0.0;
  nlohmann::json counterexamples = nlohmann::json::array();
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<SuiteResult> suites;

  bool passed() const;
  nlohmann::json to_json(bool timing = true) const;
};

VerifyReport run_verify(const VerifyConfig& config);

}  // namespace qos
