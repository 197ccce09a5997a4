#include "crit/bd_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "crit/errors.hpp"

namespace crit::bd {

namespace {

// Escapes beyond 1e-10 are still clipped; the sweep records the worst excursion
// as a diagnostic rather than aborting.
double clamp_phi(double phi, double* escape) {
    if (phi < 0.0) {
        if (escape && -phi > 1e-10) *escape = std::max(*escape, -phi);
        return 0.0;
    }
    if (phi > 1.0) {
        if (escape && phi - 1.0 > 1e-10) *escape = std::max(*escape, phi - 1.0);
        return 1.0;
    }
    return phi;
}

} // namespace

MeanGamma mean_and_gamma(const RateSchedule& rates, const TimeGrid& grid, double tol_per_unit) {
    grid.validate();
    MeanGamma out;
    out.grid = grid;
    size_t count = grid.size();
    out.log_M.assign(count, 0.0);
    out.M.assign(count, 1.0);
    out.Gamma.assign(count, 0.0);

    auto ex1 = [&](double s) { return rates.at(s, 1).ex(1); };

    for (size_t i = 1; i < count; ++i) {
        double a = grid.knots[i - 1], b = grid.knots[i];
        double base = out.log_M[i - 1];
        // Gamma integrand needs M inside the interval; the inner integral spans at
        // most one interval, so the nested quadrature stays cheap.
        auto gamma_integrand = [&](double s) {
            double log_m = base + (s > a ? adaptive_simpson(ex1, a, s, 0.1 * tol_per_unit) : 0.0);
            double ex2 = rates.at(s, 2).ex(2);
            return ex2 / (2.0 * std::exp(log_m));
        };
        out.Gamma[i] = out.Gamma[i - 1] + adaptive_simpson(gamma_integrand, a, b, tol_per_unit);
        out.log_M[i] = base + adaptive_simpson(ex1, a, b, 0.1 * tol_per_unit);
        out.M[i] = std::exp(out.log_M[i]);
    }
    return out;
}

MomentCurves moment_curves(const RateSchedule& rates, const TimeGrid& grid, int R, const OdeOptions& opts) {
    grid.validate();
    if (R < 1) fail(ErrorCode::EngineError, "moment order must be >= 1");
    if (R > 10) fail(ErrorCode::EngineError, "moment order capped at 10");

    // binom[r][j], j <= r <= R
    std::vector<std::vector<double>> binom(R + 1);
    for (int r = 0; r <= R; ++r) {
        binom[r].assign(r + 1, 1.0);
        for (int j = 1; j < r; ++j) binom[r][j] = binom[r - 1][j - 1] + binom[r - 1][j];
    }

    OdeField field = [&](double t, std::span<const double> y, std::span<double> dy) {
        RateValues rv = rates.at(t, R);
        for (int r = 1; r <= R; ++r) {
            double acc = 0.0;
            for (int j = 1; j <= r; ++j) acc += binom[r][j] * y[r - j] * rv.ex(j);
            dy[r - 1] = acc;
        }
    };

    auto rows = rk4_path(field, std::vector<double>(R, 1.0), grid.knots, opts);
    MomentCurves out;
    out.grid = grid;
    out.order = R;
    out.values = std::move(rows);
    return out;
}

namespace {

struct SweepResult {
    std::vector<double> s;
    std::vector<double> phi;
    double upper_integral = 0.0; // int_0^t g''(1 - phi(s,t))/(2 M(s)) ds
    double lower_integral = 0.0; // int_0^t g''(1)/(2 M(s)) ds
    double formula_integral = 0.0;    // exact-formula integral
    double log_M_t = 0.0;
    double max_escape = 0.0;
};

/// Backward sweep in sigma = t - s with state [phi, log M(s), upper, lower, cm].
SweepResult backward_sweep(const RateSchedule& rates, double t, std::vector<double> s_points,
                           const OdeOptions& opts, bool with_integrals, double quad_tol) {
    std::sort(s_points.begin(), s_points.end());
    s_points.erase(std::unique(s_points.begin(), s_points.end()), s_points.end());
    if (!s_points.empty() && (s_points.front() < 0.0 || s_points.back() > t))
        fail(ErrorCode::EngineError, "start times must lie in [0, t]");

    SweepResult out;
    out.s = s_points;
    out.phi.assign(s_points.size(), 1.0);
    if (t == 0.0) {
        return out;
    }

    double log_M_t = adaptive_simpson([&](double u) { return rates.at(u, 1).ex(1); }, 0.0, t, quad_tol);
    out.log_M_t = log_M_t;

    double escape = 0.0;
    OdeField field = [&](double sigma, std::span<const double> y, std::span<double> dy) {
        double s = t - sigma;
        RateValues rv = rates.at(s, 1);
        double phi = clamp_phi(y[0], &escape);
        dy[0] = -g_rate_complement(rv, phi);
        dy[1] = -rv.ex(1);
        if (dy.size() > 2) {
            double M = std::exp(y[1]);
            dy[2] = g_rate_second(rv, 1.0 - phi) / (2.0 * M);
            dy[3] = g_rate_second(rv, 1.0) / (2.0 * M);
            double phi_safe = std::max(phi, 1e-300);
            dy[4] = g_rate_survival_numerator(rv, phi) / (phi_safe * phi_safe * M);
        }
    };

    // Output times in sigma, increasing: t - s for s descending; always include 0 and t.
    std::vector<double> sigmas;
    sigmas.push_back(0.0);
    for (auto it = s_points.rbegin(); it != s_points.rend(); ++it) {
        double sigma = t - *it;
        if (sigma > sigmas.back()) sigmas.push_back(sigma);
    }
    if (sigmas.back() < t) sigmas.push_back(t);

    std::vector<double> y0;
    if (with_integrals)
        y0 = {1.0, log_M_t, 0.0, 0.0, 0.0};
    else
        y0 = {1.0, log_M_t};
    auto rows = rk4_path(field, y0, sigmas, opts);

    for (size_t i = 0; i < s_points.size(); ++i) {
        double sigma = t - s_points[i];
        // locate sigma in the outputs (built from the same values)
        size_t row = 0;
        for (size_t k = 0; k < sigmas.size(); ++k)
            if (sigmas[k] == sigma) row = k;
        out.phi[i] = clamp_phi(rows[row][0], &escape);
    }
    if (with_integrals) {
        out.upper_integral = rows.back()[2];
        out.lower_integral = rows.back()[3];
        out.formula_integral = rows.back()[4];
    }
    out.max_escape = escape;
    return out;
}

} // namespace

double survival_backward(const RateSchedule& rates, double s, double t, const OdeOptions& opts) {
    if (s < 0.0 || s > t) fail(ErrorCode::EngineError, "need 0 <= s <= t");
    if (s == t) return 1.0;
    auto sweep = backward_sweep(rates, t, {s}, opts, false, 1e-10);
    return sweep.phi[0];
}

SurvivalSlice survival_slice(const RateSchedule& rates, double t, const TimeGrid& grid,
                             const OdeOptions& opts) {
    grid.validate();
    std::vector<double> s_points;
    for (double s : grid.knots)
        if (s <= t) s_points.push_back(s);
    if (s_points.empty() || s_points.back() < t) s_points.push_back(t);
    auto sweep = backward_sweep(rates, t, s_points, opts, false, 1e-10);
    SurvivalSlice out;
    out.target = t;
    out.s = sweep.s;
    out.phi = sweep.phi;
    out.max_domain_escape = sweep.max_escape;
    return out;
}

SurvivalBounds survival_bounds(const RateSchedule& rates, double t, const OdeOptions& opts, double quad_tol) {
    SurvivalBounds out;
    out.t = t;
    if (t == 0.0) {
        out.M_t = 1.0;
        out.second_order_lower = out.second_order_upper = out.formula_value = out.exact_phi = 1.0;
        return out;
    }
    auto sweep = backward_sweep(rates, t, {0.0}, opts, true, quad_tol);
    out.M_t = std::exp(sweep.log_M_t);
    double inv_M = 1.0 / out.M_t;
    out.second_order_lower = 1.0 / (inv_M + sweep.lower_integral);
    out.second_order_upper = 1.0 / (inv_M + sweep.upper_integral);
    out.formula_value = 1.0 / (inv_M + sweep.formula_integral);
    out.exact_phi = sweep.phi[0];
    out.formula_residual = std::abs(out.exact_phi - out.formula_value);
    out.max_domain_escape = sweep.max_escape;
    return out;
}

double gamma_identity_residual(const RateSchedule& rates, double t, double tol_per_unit) {
    if (t == 0.0) return 0.0;
    auto ex1 = [&](double s) { return rates.at(s, 1).ex(1); };

    double lhs = adaptive_simpson(
        [&](double s) {
            RateValues rv = rates.at(s, 2);
            double log_m = adaptive_simpson(ex1, 0.0, s, 0.1 * tol_per_unit);
            return g_rate_second(rv, 1.0) / (2.0 * std::exp(log_m));
        },
        0.0, t, tol_per_unit);

    double gamma = adaptive_simpson(
        [&](double s) {
            RateValues rv = rates.at(s, 2);
            double log_m = adaptive_simpson(ex1, 0.0, s, 0.1 * tol_per_unit);
            return rv.ex(2) / (2.0 * std::exp(log_m));
        },
        0.0, t, tol_per_unit);

    double M_t = std::exp(adaptive_simpson(ex1, 0.0, t, 0.1 * tol_per_unit));
    double rhs = gamma - 0.5 / M_t + 0.5;
    return std::abs(lhs - rhs);
}

double MasterEquationResult::moment(int r) const {
    double sum = 0.0;
    for (size_t z = 1; z < p.size(); ++z) sum += std::pow(static_cast<double>(z), r) * p[z];
    return sum;
}

MasterEquationResult master_equation_oracle(const RateSchedule& rates, double t, int cap,
                                            const OdeOptions& opts) {
    if (cap < 1 || cap > 2000) fail(ErrorCode::EngineError, "master equation cap must lie in [1, 2000]");
    int K = rates.max_jump();
    int dim = cap + 2; // p_0..p_cap plus leaked mass

    // The fastest mode decays at roughly cap * total_rate; start the refinement
    // inside the RK4 stability region instead of letting the first sweeps blow up.
    double sup_rate = 0.0;
    for (int i = 0; i <= 128; ++i)
        sup_rate = std::max(sup_rate, rates.at(t * i / 128.0, 1).total_jump_rate());
    OdeOptions stiff = opts;
    stiff.initial_steps_per_unit =
        std::max<int>(opts.initial_steps_per_unit, static_cast<int>(0.75 * cap * sup_rate) + 1);

    OdeField field = [&](double u, std::span<const double> y, std::span<double> dy) {
        RateValues rv = rates.at(u, 1);
        double lambda = rv.total_jump_rate();
        for (int z = 0; z <= cap; ++z) dy[z] = -static_cast<double>(z) * lambda * y[z];
        double leak_flow = 0.0;
        // death flow: z+1 -> z at rate (z+1) b_{-1}
        if (rv.death > 0.0)
            for (int z = 0; z < cap; ++z) dy[z] += static_cast<double>(z + 1) * rv.death * y[z + 1];
        for (int k = 1; k <= K; ++k) {
            double bk = rv.birth[k - 1];
            if (bk == 0.0) continue;
            for (int z = 1; z + k <= cap; ++z) dy[z + k] += static_cast<double>(z) * bk * y[z];
            for (int z = std::max(1, cap - k + 1); z <= cap; ++z)
                leak_flow += static_cast<double>(z) * bk * y[z];
        }
        dy[cap + 1] = leak_flow;
    };

    std::vector<double> y0(dim, 0.0);
    y0[1] = 1.0;
    std::vector<double> times{0.0, t};
    auto rows = rk4_path(field, y0, times, stiff);

    MasterEquationResult out;
    out.p.assign(rows.back().begin(), rows.back().begin() + cap + 1);
    for (double& v : out.p) v = std::max(v, 0.0);
    out.leaked_mass = rows.back()[cap + 1];
    out.truncation_warning = out.leaked_mass > 1e-6;
    return out;
}

ContinuousDiagnostics limit_diagnostics_continuous(const RateSchedule& rates, const TimeGrid& grid, int R,
                                                   const OdeOptions& opts, int threads) {
    grid.validate();
    if (R < 2) R = 2;
    MeanGamma mg = mean_and_gamma(rates, grid);
    MomentCurves mc = moment_curves(rates, grid, R, opts);

    size_t count = grid.size();
    ContinuousDiagnostics out;
    out.grid = grid;
    out.order = R;
    out.M = mg.M;
    out.Gamma = mg.Gamma;
    out.phi.assign(count, 1.0);
    out.phi_gamma.assign(count, 0.0);
    out.m_gamma.assign(count, 0.0);
    out.ex.assign(count, 0.0);
    out.Mr = mc.values;
    out.ratios.assign(count, std::vector<double>(R - 1, 0.0));
    out.not_applicable = mg.Gamma.back() == 0.0;

    for (size_t i = 0; i < count; ++i) out.ex[i] = rates.at(grid.knots[i], 1).ex(1);

    // Independent backward solves per grid target.
#ifdef _OPENMP
    int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
#endif
    for (long i = 0; i < static_cast<long>(count); ++i) {
        double t = grid.knots[i];
        out.phi[i] = (t == 0.0) ? 1.0 : survival_backward(rates, 0.0, t, opts);
    }

    for (size_t i = 0; i < count; ++i) {
        out.phi_gamma[i] = out.phi[i] * out.Gamma[i];
        out.m_gamma[i] = out.M[i] * out.Gamma[i];
        for (int r = 2; r <= R; ++r) {
            double denom = std::pow(out.M[i], r) * std::pow(out.Gamma[i], r - 1);
            out.ratios[i][r - 2] =
                denom > 0.0 ? mc.values[i][r - 1] / denom : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return out;
}

} // namespace crit::bd
