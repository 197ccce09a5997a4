#pragma once

#include <vector>

#include "crit/ode.hpp"
#include "crit/schedule.hpp"
#include "crit/time_grid.hpp"

namespace crit::bd {

/// M(t) = exp(int_0^t E(X_s) ds) and Gamma(t) = int_0^t E(X_s^2)/(2 M(s)) ds on the grid,
/// by nested adaptive quadrature.
struct MeanGamma {
    TimeGrid grid;
    std::vector<double> log_M;
    std::vector<double> M;
    std::vector<double> Gamma;
};

MeanGamma mean_and_gamma(const RateSchedule& rates, const TimeGrid& grid, double tol_per_unit = 1e-9);

/// Moments M_r(t) = E(Z_t^r) from the lower-triangular ODE system
///   dM_r/dt = sum_{j=1}^{r} C(r,j) M_{r-j+1} E(X_t^j),   M_r(0) = 1.
struct MomentCurves {
    TimeGrid grid;
    int order = 1;
    std::vector<std::vector<double>> values; // values[i][r-1] = M_r(knots[i])
};

MomentCurves moment_curves(const RateSchedule& rates, const TimeGrid& grid, int R,
                           const OdeOptions& opts = {});

/// phi(s, t) for one start time, from the backward characteristic equation
/// d(phi)/ds = g_s(1 - phi), phi(t) = 1, integrated in the survival variable.
double survival_backward(const RateSchedule& rates, double s, double t, const OdeOptions& opts = {});

struct SurvivalSlice {
    double target = 0.0;
    std::vector<double> s;   // grid knots <= target, plus the target itself
    std::vector<double> phi; // phi(s[i], target)
    double max_domain_escape = 0.0;
};

/// One backward sweep recording phi(s, t) at every grid knot below t.
SurvivalSlice survival_slice(const RateSchedule& rates, double t, const TimeGrid& grid,
                             const OdeOptions& opts = {});

struct SurvivalBounds {
    double t = 0.0;
    double M_t = 0.0;
    double second_order_lower = 0.0;     // [1/M + int g''(1)/(2M)]^{-1}
    double second_order_upper = 0.0;     // [1/M + int g''(1 - phi(s,t))/(2M)]^{-1}
    double formula_value = 0.0;      // the exact survival formula
    double exact_phi = 0.0;     // phi(0, t) from the backward equation
    double formula_residual = 0.0; // |exact_phi - formula_value|; an identity, must vanish
    double max_domain_escape = 0.0;
};

SurvivalBounds survival_bounds(const RateSchedule& rates, double t, const OdeOptions& opts = {},
                       double quad_tol = 1e-10);

/// | int_0^t g_s''(1)/(2M) ds  -  (Gamma(t) - 1/(2M(t)) + 1/2) |, an exact identity.
double gamma_identity_residual(const RateSchedule& rates, double t, double tol_per_unit = 1e-11);

/// Truncated forward Kolmogorov system on {0..cap}; leaked mass is the probability
/// flow into states above cap.
struct MasterEquationResult {
    std::vector<double> p;
    double leaked_mass = 0.0;
    bool truncation_warning = false; // leak > 1e-6

    double survival() const { return 1.0 - p[0]; }
    double moment(int r) const;
};

MasterEquationResult master_equation_oracle(const RateSchedule& rates, double t, int cap,
                                            const OdeOptions& opts = {});

/// Limit diagnostics: phi*Gamma, M*Gamma, M_r/(M^r Gamma^{r-1}) and E(X_t) per knot.
struct ContinuousDiagnostics {
    TimeGrid grid;
    int order = 2;
    std::vector<double> M, Gamma, phi, phi_gamma, m_gamma, ex;
    std::vector<std::vector<double>> Mr;     // Mr[i][r-1]
    std::vector<std::vector<double>> ratios; // ratios[i][r-2] = M_r/(M^r Gamma^{r-1}), r = 2..R
    bool not_applicable = false;             // Gamma identically zero on the horizon
};

ContinuousDiagnostics limit_diagnostics_continuous(const RateSchedule& rates, const TimeGrid& grid, int R,
                                                   const OdeOptions& opts = {}, int threads = 0);

} // namespace crit::bd
