#include "crit/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "crit/errors.hpp"

namespace crit {

namespace {

struct Rk4Work {
    std::vector<double> k1, k2, k3, k4, tmp;
    explicit Rk4Work(size_t dim) : k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim) {}
};

void rk4_step(const OdeField& f, double t, double h, std::vector<double>& y, Rk4Work& w) {
    size_t dim = y.size();
    f(t, y, w.k1);
    for (size_t i = 0; i < dim; ++i) w.tmp[i] = y[i] + 0.5 * h * w.k1[i];
    f(t + 0.5 * h, w.tmp, w.k2);
    for (size_t i = 0; i < dim; ++i) w.tmp[i] = y[i] + 0.5 * h * w.k2[i];
    f(t + 0.5 * h, w.tmp, w.k3);
    for (size_t i = 0; i < dim; ++i) w.tmp[i] = y[i] + h * w.k3[i];
    f(t + h, w.tmp, w.k4);
    for (size_t i = 0; i < dim; ++i)
        y[i] += h / 6.0 * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]);
}

std::vector<std::vector<double>> solve_once(const OdeField& f, const std::vector<double>& y0,
                                            const std::vector<double>& times, long steps_per_segment_base,
                                            double span) {
    std::vector<std::vector<double>> out;
    out.reserve(times.size());
    std::vector<double> y = y0;
    Rk4Work work(y0.size());
    out.push_back(y);
    for (size_t seg = 0; seg + 1 < times.size(); ++seg) {
        double a = times[seg], b = times[seg + 1];
        double seg_span = b - a;
        long steps = std::max<long>(1, static_cast<long>(std::ceil(
                                           static_cast<double>(steps_per_segment_base) * seg_span / span)));
        double h = seg_span / static_cast<double>(steps);
        for (long s = 0; s < steps; ++s) rk4_step(f, a + s * h, h, y, work);
        out.push_back(y);
    }
    return out;
}

} // namespace

std::vector<std::vector<double>> rk4_path(const OdeField& field, std::vector<double> y0,
                                          const std::vector<double>& times, const OdeOptions& opts) {
    if (times.size() < 2) return {y0};
    double span = times.back() - times.front();
    if (span <= 0.0) fail(ErrorCode::EngineError, "output times must be increasing");

    long base = std::max<long>(static_cast<long>(times.size()) - 1,
                               static_cast<long>(std::ceil(span * opts.initial_steps_per_unit)));
    auto coarse = solve_once(field, y0, times, base, span);
    for (int round = 0; round < opts.max_doublings; ++round) {
        base *= 2;
        auto fine = solve_once(field, y0, times, base, span);
        double worst = 0.0;
        for (size_t i = 0; i < times.size(); ++i) {
            for (size_t d = 0; d < y0.size(); ++d) {
                double a = coarse[i][d], b = fine[i][d];
                if (!std::isfinite(a) || !std::isfinite(b)) {
                    worst = std::numeric_limits<double>::infinity();
                    continue;
                }
                double scale = opts.abs_tol + opts.rel_tol * std::max(std::abs(a), std::abs(b));
                worst = std::max(worst, std::abs(a - b) / scale);
            }
        }
        if (worst <= 1.0) return fine;
        coarse = std::move(fine);
    }
    fail(ErrorCode::StepUnderflow, "RK4 refinement did not converge after " +
                                       std::to_string(opts.max_doublings) + " halvings");
}

namespace {

double simpson(double a, double fa, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                            double m, double fm, double whole, double tol, int depth, int max_depth,
                            bool& depth_hit, double& achieved) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, fa, flm, m, fm);
    double right = simpson(m, fm, frm, b, fb);
    double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol || (b - a) < 1e-14 * std::max(1.0, std::abs(a))) {
        achieved += std::abs(err);
        return left + right + err;
    }
    if (depth >= max_depth) {
        depth_hit = true;
        achieved += std::abs(err);
        return left + right + err;
    }
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1, max_depth, depth_hit,
                                achieved) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1, max_depth, depth_hit,
                                achieved);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol_per_unit,
                        int max_depth) {
    if (b == a) return 0.0;
    if (b < a) fail(ErrorCode::EngineError, "integration bounds must be ordered");
    double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    double whole = simpson(a, fa, fm, b, fb);
    bool depth_hit = false;
    double achieved = 0.0;
    double tol = tol_per_unit * (b - a);
    double result =
        adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 0, max_depth, depth_hit, achieved);
    if (depth_hit && achieved > tol)
        fail(ErrorCode::QuadratureFailure,
             "depth cap hit; achieved error estimate " + std::to_string(achieved) + " > " + std::to_string(tol));
    return result;
}

} // namespace crit
