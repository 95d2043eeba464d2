#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cuspflow::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;  // measured constants, counterexamples
};

struct Options {
    bool full = false;   // acceptance-scale budgets instead of quick ones
    uint64_t seed = 1;
};

/// Runs every module's invariant suite; one result per named check.
std::vector<CheckResult> run_all(const Options& opt);

}  // namespace cuspflow::verify
