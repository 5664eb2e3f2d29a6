#pragma once

#include <string>
#include <vector>

namespace repct {

struct property_result {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct verification_options {
    /// Run the complete threshold sweeps instead of a few spot cells.
    bool full = false;
    unsigned threads = 0;
    unsigned long long seed = 20240611ULL;
};

/// Invariant, closed-form and threshold-recovery property suite.
std::vector<property_result> run_verification(const verification_options& opts = {});

}  // namespace repct
