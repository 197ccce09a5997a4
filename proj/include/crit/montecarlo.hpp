#pragma once

#include <cstdint>
#include <vector>

#include "crit/schedule.hpp"

namespace crit::mc {

struct SimConfig {
    std::uint64_t master_seed = 1;
    long replicates = 1;
    std::vector<double> checkpoints;    // generation indices (discrete) or times (continuous), ascending
    double population_cap = 1e8;        // total individual updates per replicate
    int threads = 0;                    // 0 = library default; replicates are independent work units
    bool force_generic_sampling = false; // disable the two-atom binomial fast path
};

/// Populations at each checkpoint over replicates, plus the exact-engine
/// normalizers E(zeta) = m_n/phi_n (or M(t)/phi(t)) once attached.
struct SampleBatch {
    std::vector<double> checkpoints;
    std::vector<std::vector<std::int64_t>> values; // values[c][replicate]
    std::vector<std::uint8_t> excluded;            // replicate hit the population cap
    long excluded_count = 0;
    std::vector<double> normalizers; // NaN until attached

    long active_replicates() const { return static_cast<long>(excluded.size()) - excluded_count; }
    long survivor_count(int checkpoint_index) const;
    double survivor_fraction(int checkpoint_index) const;
};

/// Z_{n+1} as a sum of Z_n i.i.d. offspring draws; inverse-CDF sampling with a
/// binomial decomposition fast path for two-atom laws.  Deterministic per
/// (master_seed, replicate), independent of thread count.
SampleBatch simulate_discrete(const OffspringSchedule& schedule, const SimConfig& config);

/// Thinning against a per-capita envelope rate refreshed on every accepted jump
/// and on envelope expiry (lifetime 1.0); the envelope is a grid-sampled sup of
/// the total rate (step 1e-3, safety factor 1.001).  Throws
/// Error(EnvelopeViolation) if the observed total rate ever exceeds it.
SampleBatch simulate_continuous(const RateSchedule& rates, const SimConfig& config);

/// Survivor populations divided by the attached normalizer.
/// Throws Error(NoSurvivors) when the survivor set is empty.
std::vector<double> conditioned_scaled_samples(const SampleBatch& batch, int checkpoint_index);

} // namespace crit::mc
