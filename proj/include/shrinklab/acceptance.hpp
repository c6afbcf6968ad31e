#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shrinklab/report.hpp"

namespace shrinklab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AcceptanceOutcome {
    std::vector<CriterionResult> results;
    Json report;
    bool all_pass = true;
};

// Runs the full verification battery at the given seed. The final entry
// re-runs everything and byte-compares the serialized reports, so the
// whole battery executes twice.
AcceptanceOutcome run_acceptance(std::uint64_t seed);

}  // namespace shrinklab
