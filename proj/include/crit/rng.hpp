#pragma once

#include <cmath>
#include <cstdint>

namespace crit {

/// SplitMix64; also used as the counter-based splitting function for
/// per-replicate substreams, so parallel and serial runs draw identical paths.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t operator()() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~0ULL; }

  private:
    std::uint64_t state_;
};

/// Stream for replicate r of a run seeded with master_seed; a pure function of
/// (master_seed, r), independent of scheduling.
inline SplitMix64 replicate_stream(std::uint64_t master_seed, std::uint64_t replicate) {
    SplitMix64 mixer(master_seed ^ (0xA5A5A5A55A5A5A5AULL + replicate * 0x9E3779B97F4A7C15ULL));
    std::uint64_t s = mixer();
    s ^= mixer() << 1;
    return SplitMix64(s);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(SplitMix64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Exp(1) via inversion; the log argument lies in (0, 1], never 0.
inline double exponential1(SplitMix64& rng) { return -std::log1p(-uniform01(rng)); }

} // namespace crit
