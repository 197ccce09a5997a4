#include "crit/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "crit/errors.hpp"
#include "crit/rng.hpp"

namespace crit::mc {

namespace {

void check_config(const SimConfig& config) {
    if (config.replicates < 1) fail(ErrorCode::ConfigInvalid, "replicates must be >= 1");
    if (config.checkpoints.empty()) fail(ErrorCode::ConfigInvalid, "at least one checkpoint required");
    for (size_t i = 0; i < config.checkpoints.size(); ++i) {
        if (config.checkpoints[i] < 0.0) fail(ErrorCode::ConfigInvalid, "checkpoints must be >= 0");
        if (i > 0 && config.checkpoints[i] < config.checkpoints[i - 1])
            fail(ErrorCode::ConfigInvalid, "checkpoints must be sorted ascending");
    }
}

struct GenerationLaw {
    std::vector<double> cdf; // inverse-CDF table
    bool two_atom = false;   // support {0, atom}
    int atom = 0;
    double p_atom = 0.0;
};

std::int64_t draw_offspring_sum(const GenerationLaw& law, std::int64_t parents, SplitMix64& rng,
                                bool force_generic) {
    if (law.two_atom && !force_generic) {
        // Z' = atom * Binomial(parents, p_atom)
        std::int64_t successes;
        if (parents <= 64) {
            successes = 0;
            for (std::int64_t i = 0; i < parents; ++i)
                if (uniform01(rng) < law.p_atom) ++successes;
        } else {
            std::binomial_distribution<std::int64_t> binom(parents, law.p_atom);
            successes = binom(rng);
        }
        return successes * law.atom;
    }
    std::int64_t total = 0;
    for (std::int64_t i = 0; i < parents; ++i) {
        double u = uniform01(rng);
        size_t k = 0;
        while (k + 1 < law.cdf.size() && u >= law.cdf[k]) ++k;
        total += static_cast<std::int64_t>(k);
    }
    return total;
}

template <typename ReplicateFn>
void run_replicates(const SimConfig& config, SampleBatch& batch, ReplicateFn&& replicate_fn) {
    long reps = config.replicates;
    batch.values.assign(config.checkpoints.size(), std::vector<std::int64_t>(reps, 0));
    batch.excluded.assign(reps, 0);

#ifdef _OPENMP
    int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
    for (long r = 0; r < reps; ++r) replicate_fn(r);

    batch.excluded_count = 0;
    for (auto e : batch.excluded) batch.excluded_count += e;
}

} // namespace

long SampleBatch::survivor_count(int checkpoint_index) const {
    const auto& v = values.at(checkpoint_index);
    long count = 0;
    for (size_t r = 0; r < v.size(); ++r)
        if (!excluded[r] && v[r] != 0) ++count;
    return count;
}

double SampleBatch::survivor_fraction(int checkpoint_index) const {
    long active = active_replicates();
    return active > 0 ? static_cast<double>(survivor_count(checkpoint_index)) / static_cast<double>(active)
                      : 0.0;
}

SampleBatch simulate_discrete(const OffspringSchedule& schedule, const SimConfig& config) {
    check_config(config);
    long last_gen = static_cast<long>(config.checkpoints.back());
    for (double c : config.checkpoints)
        if (c != std::floor(c)) fail(ErrorCode::ConfigInvalid, "discrete checkpoints must be integers");

    std::vector<GenerationLaw> laws(last_gen);
    for (long n = 0; n < last_gen; ++n) {
        Pmf pmf = schedule.pmf_at(n);
        GenerationLaw law;
        law.cdf.resize(pmf.probs.size());
        double acc = 0.0;
        for (size_t k = 0; k < pmf.probs.size(); ++k) {
            acc += pmf.probs[k];
            law.cdf[k] = acc;
        }
        int nonzero_atoms = 0;
        for (size_t k = 1; k < pmf.probs.size(); ++k)
            if (pmf.probs[k] > 0.0) {
                ++nonzero_atoms;
                law.atom = static_cast<int>(k);
                law.p_atom = pmf.probs[k];
            }
        law.two_atom = nonzero_atoms == 1;
        laws[n] = std::move(law);
    }

    SampleBatch batch;
    batch.checkpoints = config.checkpoints;
    batch.normalizers.assign(config.checkpoints.size(), std::numeric_limits<double>::quiet_NaN());

    run_replicates(config, batch, [&](long r) {
        SplitMix64 rng = replicate_stream(config.master_seed, static_cast<std::uint64_t>(r));
        std::int64_t z = 1;
        double updates = 0.0;
        size_t ck = 0;
        for (long gen = 0; gen <= last_gen; ++gen) {
            while (ck < config.checkpoints.size() && static_cast<long>(config.checkpoints[ck]) == gen) {
                batch.values[ck][r] = z;
                ++ck;
            }
            if (ck >= config.checkpoints.size() || z == 0) break;
            updates += static_cast<double>(z);
            if (updates > config.population_cap) {
                batch.excluded[r] = 1;
                return;
            }
            z = draw_offspring_sum(laws[gen], z, rng, config.force_generic_sampling);
        }
        // an extinct path stays at zero through all remaining checkpoints
    });
    return batch;
}

namespace {

/// Range-max table over grid-sampled total rates: O(1) sup queries for envelope refreshes.
class RateEnvelope {
  public:
    RateEnvelope(const RateSchedule& rates, double horizon, double step) : step_(step) {
        size_t cells = static_cast<size_t>(std::ceil((horizon + 1.0) / step)) + 2;
        std::vector<double> samples(cells);
        for (size_t i = 0; i < cells; ++i) {
            RateValues rv = rates.at(std::min(static_cast<double>(i) * step, horizon + 1.0), 1);
            samples[i] = rv.total_jump_rate();
            if (!std::isfinite(samples[i]))
                fail(ErrorCode::EvaluationError, "total jump rate not finite on the horizon");
        }
        // sparse table
        levels_.push_back(std::move(samples));
        while (levels_.back().size() > 1) {
            const auto& prev = levels_.back();
            std::vector<double> next((prev.size() + 1) / 2);
            for (size_t i = 0; i < next.size(); ++i) {
                double a = prev[2 * i];
                double b = 2 * i + 1 < prev.size() ? prev[2 * i + 1] : a;
                next[i] = std::max(a, b);
            }
            levels_.push_back(std::move(next));
        }
    }

    /// sup of the sampled total rate over [a, b], times a safety factor.
    double sup(double a, double b) const {
        size_t lo = static_cast<size_t>(std::floor(a / step_));
        size_t hi = std::min(static_cast<size_t>(std::ceil(b / step_)) + 1, levels_[0].size() - 1);
        double best = 0.0;
        size_t level = 0;
        while (lo <= hi) {
            if (lo & 1) best = std::max(best, levels_[level][lo++]);
            if (!(hi & 1)) {
                best = std::max(best, levels_[level][hi]);
                if (hi == 0) break;
                --hi;
            }
            lo >>= 1;
            hi >>= 1;
            ++level;
            if (lo > hi) break;
        }
        return best * 1.001;
    }

  private:
    double step_;
    std::vector<std::vector<double>> levels_;
};

} // namespace

SampleBatch simulate_continuous(const RateSchedule& rates, const SimConfig& config) {
    check_config(config);
    double horizon = config.checkpoints.back();
    constexpr double kEnvelopeLifetime = 1.0;
    RateEnvelope envelope(rates, horizon, 1e-3);

    SampleBatch batch;
    batch.checkpoints = config.checkpoints;
    batch.normalizers.assign(config.checkpoints.size(), std::numeric_limits<double>::quiet_NaN());

    bool violation = false;

    run_replicates(config, batch, [&](long r) {
        SplitMix64 rng = replicate_stream(config.master_seed, static_cast<std::uint64_t>(r));
        std::int64_t z = 1;
        double t = 0.0;
        double events = 0.0;
        size_t ck = 0;

        auto record_through = [&](double up_to) {
            while (ck < config.checkpoints.size() && config.checkpoints[ck] <= up_to) {
                batch.values[ck][r] = z;
                ++ck;
            }
        };

        record_through(0.0); // a checkpoint at exactly t = 0 sees Z_0 = 1

        double window_end = std::min(kEnvelopeLifetime, horizon);
        double bbar = envelope.sup(0.0, window_end);

        while (ck < config.checkpoints.size()) {
            if (z == 0) {
                record_through(horizon);
                break;
            }
            if (bbar <= 0.0) {
                // frozen within this window
                record_through(std::min(window_end, horizon));
                if (window_end >= horizon) break;
                t = window_end;
                window_end = std::min(t + kEnvelopeLifetime, horizon);
                bbar = envelope.sup(t, window_end);
                continue;
            }
            double dt = exponential1(rng) / (static_cast<double>(z) * bbar);
            double t_next = t + dt;
            if (t_next >= window_end) {
                record_through(std::min(window_end, horizon));
                if (window_end >= horizon) break;
                t = window_end;
                window_end = std::min(t + kEnvelopeLifetime, horizon);
                bbar = envelope.sup(t, window_end);
                continue;
            }
            record_through(t_next); // checkpoints strictly before the proposal keep the old Z
            t = t_next;
            events += 1.0;
            if (events > config.population_cap) {
                batch.excluded[r] = 1;
                return;
            }
            RateValues rv = rates.at(t, 1);
            double lambda = rv.total_jump_rate();
            if (lambda > bbar) {
#ifdef _OPENMP
#pragma omp atomic write
#endif
                violation = true;
                return;
            }
            double u = uniform01(rng) * bbar;
            if (u < lambda) {
                // accepted; reuse u to select the jump size
                if (u < rv.death) {
                    z -= 1;
                } else {
                    double acc = rv.death;
                    int k = 1;
                    for (; k < rates.max_jump(); ++k) {
                        acc += rv.birth[k - 1];
                        if (u < acc) break;
                    }
                    z += k;
                }
                window_end = std::min(t + kEnvelopeLifetime, horizon);
                bbar = envelope.sup(t, window_end);
            }
        }
    });

    if (violation)
        fail(ErrorCode::EnvelopeViolation, "observed total rate exceeded the thinning envelope");
    return batch;
}

std::vector<double> conditioned_scaled_samples(const SampleBatch& batch, int checkpoint_index) {
    double normalizer = batch.normalizers.at(checkpoint_index);
    if (!std::isfinite(normalizer) || normalizer <= 0.0)
        fail(ErrorCode::EngineError, "no normalizer attached for this checkpoint");
    const auto& v = batch.values[checkpoint_index];
    std::vector<double> out;
    out.reserve(v.size());
    for (size_t r = 0; r < v.size(); ++r)
        if (!batch.excluded[r] && v[r] != 0) out.push_back(static_cast<double>(v[r]) / normalizer);
    if (out.empty()) fail(ErrorCode::NoSurvivors, "survivor set is empty at this checkpoint");
    return out;
}

} // namespace crit::mc
