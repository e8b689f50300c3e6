#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace deltaq {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Fast self-checks of the structural invariants (seconds, not minutes).
std::vector<CheckResult> run_invariant_checks(std::uint64_t seed);

}  // namespace deltaq
