#pragma once

#include <vector>

namespace crit {

/// Strictly increasing output knots starting at 0.
struct TimeGrid {
    std::vector<double> knots;

    static TimeGrid uniform(double horizon, long intervals);

    double horizon() const { return knots.empty() ? 0.0 : knots.back(); }
    size_t size() const { return knots.size(); }

    /// Throws Error(EngineError) unless knots[0] == 0 and knots strictly increase.
    void validate() const;
};

} // namespace crit
