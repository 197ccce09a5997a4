#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace crit::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail; // deterministic given the seed; no timings
    double seconds = 0.0;
};

struct AcceptanceReport {
    std::vector<CriterionResult> results;
    bool all_pass = false;

    /// Byte-stable text: one line per criterion, no timestamps or timings.
    std::string canonical_text() const;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20240801ULL;
    int threads = 0;
    bool determinism_rerun = true; // re-run the suite and compare reports byte for byte
};

/// Runs every acceptance criterion at its stated tolerance.
AcceptanceReport run_acceptance(const AcceptanceOptions& opts = {});

} // namespace crit::acceptance
