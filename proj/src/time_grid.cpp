#include "crit/time_grid.hpp"

#include <string>

#include "crit/errors.hpp"

namespace crit {

TimeGrid TimeGrid::uniform(double horizon, long intervals) {
    if (horizon <= 0.0 || intervals < 1) fail(ErrorCode::EngineError, "uniform grid needs horizon > 0");
    TimeGrid g;
    g.knots.reserve(intervals + 1);
    for (long i = 0; i <= intervals; ++i)
        g.knots.push_back(horizon * static_cast<double>(i) / static_cast<double>(intervals));
    return g;
}

void TimeGrid::validate() const {
    if (knots.empty() || knots.front() != 0.0) fail(ErrorCode::EngineError, "grid must start at 0");
    for (size_t i = 1; i < knots.size(); ++i)
        if (knots[i] <= knots[i - 1])
            fail(ErrorCode::EngineError, "grid knots must strictly increase (violation at index " +
                                             std::to_string(i) + ")");
}

} // namespace crit
