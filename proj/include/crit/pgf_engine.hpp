#pragma once

#include <vector>

#include "crit/jet.hpp"
#include "crit/schedule.hpp"

namespace crit::pgf {

/// phi[j] = P(Z_target != 0 | Z_j = 1) for j = 0..target; phi[target] = 1.
struct SurvivalProfile {
    long target = 0;
    std::vector<double> phi;
};

/// Single inward pass j = target-1 .. 0 of the complement recursion
///   phi_j = phi_{j+1} * sum_i P(X_j > i) (1 - phi_{j+1})^i,
/// which is 1 - g_j(1 - phi_{j+1}) without cancellation near extinction.
SurvivalProfile survival_profile(const OffspringSchedule& schedule, long target);

struct DiscreteCurveOptions {
    std::vector<long> phi_checkpoints; // empty = auto: every n up to 1e4, geometric above
    bool compute_phi = true;
    bool with_agresti = false; // adds Agresti bound columns (s = 0) at each checkpoint
    int threads = 0;           // 0 = library default; checkpoints are independent work units
};

struct DiscreteCurves {
    long horizon = 0;

    // Per n = 0..horizon (possibly truncated at a degenerate mean).
    std::vector<double> mu;      // mu_n = E(X_n)
    std::vector<double> log_m;   // log m_n; m_0 = 1
    std::vector<double> gamma;   // Gamma_n
    std::vector<double> m_gamma; // m_n * Gamma_n, by the stable recursion P_{n+1} = mu_n P_n + g_n''(1)/(2 mu_n)

    // Survival columns at checkpoints (ascending; last equals horizon unless truncated).
    std::vector<long> checkpoints;
    std::vector<double> phi;       // phi_n
    std::vector<double> phi_gamma; // phi_n * Gamma_n

    // Agresti columns at checkpoints when requested (all at s = 0).
    std::vector<double> agresti_lower;       // (1/m_n + Gamma_n)^{-1}
    std::vector<double> agresti_upper_sharp; // (1/m_n + sum_j g_j''(f_jn(0))/(2 mu_j m_{j+1}))^{-1}
    std::vector<double> agresti_zero_variant; // g''(0) sum variant

    long truncated_at = -1; // first n with mu_n = 0 (DegenerateMean), -1 if none

    double m(long n) const;
    long max_n() const { return static_cast<long>(mu.size()) - 1; }
};

/// Means, log-means, Gamma and m*Gamma for every n <= N; survival probabilities at
/// checkpoints by re-running the inward pass per checkpoint (O(N^2) at desk scale).
DiscreteCurves discrete_curves(const OffspringSchedule& schedule, long N, DiscreteCurveOptions opts = {});

struct AgrestiBounds {
    long n = 0;
    double s = 0.0;
    // Bounds at the supplied s.
    double lower_at_s = 0.0;
    double upper_sharp_at_s = 0.0;
    // Values at s = 0.
    double lower_at_zero = 0.0;
    double upper_sharp_at_zero = 0.0;
    double upper_zero_variant = 0.0; // g''(0) sum in place of the sharp sum
    double exact = 0.0;              // 1 - f_n(s)
    double exact_phi = 0.0;          // phi_n = 1 - f_n(0)
    // The three weighted sums (g'' at 1, at f_jn(0), at 0).
    double gamma = 0.0;
    double sharp_sum = 0.0;
    double zero_sum = 0.0;
    double m_n = 0.0;
    // Pointwise breaches of the stated sandwich order; recorded, never asserted.
    int order_violations = 0;
};

AgrestiBounds agresti_sandwich(const OffspringSchedule& schedule, long n, double s);

/// Forward jet propagation of f_n about s = 1, carried in the scaled coefficients
/// F_{n,r} / m_n^r so that super- and subcritical horizons stay representable.
struct FactorialMomentCurve {
    int order = 1;
    std::vector<long> n;
    std::vector<double> log_m;
    std::vector<double> gamma;
    std::vector<std::vector<double>> scaled; // scaled[i][r-1] = F_{n_i, r} / m_{n_i}^r

    /// F_{n_i, r}; +inf once past 1e300 (use log10_value then).
    double value(int i, int r) const;
    double log10_value(int i, int r) const;
    /// F / (m^r Gamma^{r-1}), evaluated in log space; NaN where Gamma = 0.
    double limit_ratio(int i, int r) const;

    long overflow_at = -1; // first n whose plain-double F exceeded 1e300
};

FactorialMomentCurve factorial_moment_curve(const OffspringSchedule& schedule, long N, int R,
                                            std::vector<long> checkpoints = {});

/// Truncated distribution of Z_n by generation-by-generation pmf-power convolution.
struct DistributionVector {
    std::vector<double> p;
    double leaked_mass = 0.0;
    bool truncation_warning = false; // leak > 1e-9

    double survival() const { return 1.0 - p[0]; } // leaked mass counts as alive
    double factorial_moment(int r) const;
    double raw_moment(int r) const;
};

/// Independent oracle; pre: n <= 16, cap <= 4096.
DistributionVector exact_distribution_oracle(const OffspringSchedule& schedule, long n, int cap);

} // namespace crit::pgf
