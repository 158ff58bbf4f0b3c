#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace anonpram::acceptance {

struct CriterionResult {
    int number = 0;
    std::string title;
    bool passed = false;
    std::string detail;
};

struct SuiteOptions {
    std::uint32_t jobs = 1;
    /// Master seed of every suite experiment; fixed so published runs are
    /// reproducible bit for bit.
    std::uint64_t master_seed = 0x414e4f4e5052414dULL;
};

/// Runs the statistical verification suite, printing one pass/fail line per
/// criterion to `os` as results arrive.
std::vector<CriterionResult> run_suite(std::ostream& os, const SuiteOptions& options = {});

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace anonpram::acceptance
