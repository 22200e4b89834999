#pragma once

#include "bhl/experiment_config.hpp"

#include <string>
#include <vector>

#include <json.hpp>

namespace bhl {

struct CheckResult {
    std::string name;
    bool passed = false;
    nlohmann::json witness;
};

struct VerifyReport {
    std::string config_hash;
    std::vector<CheckResult> checks;

    bool all_passed() const;
    nlohmann::json to_json() const;
};

/// Runs the property suites of every module on cfg's parameters. Never throws
/// for a failing property; errors inside a check are reported as failures.
VerifyReport run_verify(const ExperimentConfig& cfg);

} // namespace bhl
