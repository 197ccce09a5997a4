#pragma once

#include <string>
#include <vector>

#include "crit/schedule.hpp"

namespace crit {

// Bundled reference models used by the verification suite and shipped as configs.
//
// Discrete:
//   paper_example        unit start, then P(X_n=2) = (n+1)/(2n)
//   binary_critical      {p0 = 1/2, p2 = 1/2} at every generation
//   subcritical_binary   {p0 = 0.6, p2 = 0.4}
//   polynomial_mean_*    two-atom laws with mean ((n+1)/n)^alpha, alpha in {-1, 0.5, 1}
// Continuous:
//   linear_critical      b_{-1} = b_1 = 1
//   decaying_drift       b_{-1} = 1, b_1 = 1 + 1/(1+t)  (mean jump 1/(1+t) -> 0)
//   two_birth            b_{-1} = 1, b_1 = 0.6, b_2 = 0.2 (critical, nonlinear g'')

OffspringSchedule discrete_reference(const std::string& name);
RateSchedule continuous_reference(const std::string& name);

const std::vector<std::string>& discrete_reference_names();
const std::vector<std::string>& continuous_reference_names();

} // namespace crit
