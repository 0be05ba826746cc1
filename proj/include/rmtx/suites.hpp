#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rmtx {

struct CheckResult {
    std::string suite;
    std::string name;
    double observed = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct SuiteOptions {
    /// Restricts the a-dependent suites to one value; each suite has its own default set.
    std::optional<double> a;
    long samples = 100000;
    std::uint64_t seed = 1;
    int streams = 4;
};

const std::vector<std::string>& suite_names();

/// Runs one named property suite. Throws DomainError for an unknown name.
std::vector<CheckResult> run_suite(const std::string& name, const SuiteOptions& options = {});

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace rmtx
