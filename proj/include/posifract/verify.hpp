#pragma once

// Property suites run by `posifract verify`. Each returns a JSON report with
// one entry per property: {"name", "passed", "trials", "violations", "worst_slack"}.

#include <cstdint>
#include <string>
#include <vector>

#include "posifract/io.hpp"

namespace posifract {

struct SuiteResult {
  std::string suite;
  bool passed = false;
  Json report;
};

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// Runs one suite. `config` may carry a spec (used by the sandwich suite) and
/// tolerances. Throws ConfigurationError for an unknown suite name.
SuiteResult run_suite(const std::string& name, const RunConfig& config, std::uint64_t seed);

}  // namespace posifract
