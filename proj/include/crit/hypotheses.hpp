#pragma once

#include <string>
#include <vector>

#include "crit/bd_engine.hpp"
#include "crit/pgf_engine.hpp"
#include "crit/schedule.hpp"

namespace crit::model {

enum class Verdict { SatisfiedOnHorizon, Violated, InconclusiveTrend };

const char* to_string(Verdict v);

struct HypothesisEntry {
    std::string id;
    double statistic = 0.0;
    Verdict verdict = Verdict::InconclusiveTrend;
    std::string note;
};

/// A sufficient-condition check (generation means tending to 1, or mean jump
/// tending to 0) reported alongside the hypothesis list.
struct ConditionReport {
    std::string id;
    bool holds = false;
    double tail_estimate = 0.0;
};

struct HypothesisReport {
    std::vector<HypothesisEntry> entries;
    std::vector<ConditionReport> conditions;

    const HypothesisEntry& entry(const std::string& id) const;
};

/// Discrete hypotheses H1-H6 on the horizon; sup/inf statistics over the grid
/// (tail windows for liminf/limsup forms), trend verdicts for the limits.
/// Throws Error(HorizonMismatch) when the curves stop short of the horizon.
HypothesisReport hypothesis_report(const OffspringSchedule& schedule, long horizon,
                                   const pgf::DiscreteCurves& curves);

/// Continuous hypotheses H7-H11 on the horizon.
HypothesisReport hypothesis_report(const RateSchedule& rates, const TimeGrid& grid,
                                   const bd::MeanGamma& curves);

} // namespace crit::model
