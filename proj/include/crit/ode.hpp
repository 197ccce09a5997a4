#pragma once

#include <functional>
#include <span>
#include <vector>

namespace crit {

struct OdeOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int initial_steps_per_unit = 8; // per unit of integration span, at least 1 per segment
    int max_doublings = 22;         // StepUnderflow beyond this
};

using OdeField = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Classic fixed-order RK4 over [times.front(), times.back()], recording the state at
/// every requested time.  The whole path is re-solved with doubled step counts until
/// successive refinements agree to rel_tol/abs_tol at every output, then the finer
/// path is returned.  rows: result[i] = state at times[i].
std::vector<std::vector<double>> rk4_path(const OdeField& field, std::vector<double> y0,
                                          const std::vector<double>& times, const OdeOptions& opts = {});

/// Adaptive Simpson quadrature; tolerance is absolute per unit length of [a, b].
/// Throws Error(QuadratureFailure) if the recursion depth cap is hit before the
/// tolerance is met.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol_per_unit = 1e-9, int max_depth = 48);

} // namespace crit
