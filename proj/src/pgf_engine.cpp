#include "crit/pgf_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "crit/errors.hpp"

namespace crit::pgf {

namespace {

struct PmfCache {
    std::vector<Pmf> pmf;
    std::vector<std::vector<double>> tail;

    explicit PmfCache(const OffspringSchedule& schedule, long count) {
        pmf.reserve(count);
        tail.reserve(count);
        for (long n = 0; n < count; ++n) {
            pmf.push_back(schedule.pmf_at(n));
            tail.push_back(pmf.back().tail_coeffs());
        }
    }
};

/// One inward pass; returns 1 - f_{0,target}(s) given the seed 1 - s.
double inward_pass(const PmfCache& cache, long target, double seed) {
    double phi = seed;
    for (long j = target - 1; j >= 0; --j) phi *= tail_poly(cache.tail[j], 1.0 - phi);
    return phi;
}

struct PassSums {
    double phi;       // phi_{0,target}
    double sharp_sum; // sum_j g_j''(1 - phi_{j,target}) / (2 mu_j m_{j+1})
};

PassSums inward_pass_with_sharp_sum(const PmfCache& cache, long target, const std::vector<double>& mu,
                                    const std::vector<double>& log_m) {
    double phi = 1.0;
    double sharp = 0.0;
    for (long j = target - 1; j >= 0; --j) {
        phi *= tail_poly(cache.tail[j], 1.0 - phi);
        if (mu[j] > 0.0)
            sharp += cache.pmf[j].g_second(1.0 - phi) / (2.0 * mu[j] * std::exp(log_m[j + 1]));
    }
    return {phi, sharp};
}

std::vector<long> auto_checkpoints(long N) {
    std::vector<long> cps;
    if (N <= 10000) {
        cps.reserve(N + 1);
        for (long n = 0; n <= N; ++n) cps.push_back(n);
        return cps;
    }
    for (long n = 0; n <= 100; ++n) cps.push_back(n);
    double x = 100.0;
    while (true) {
        x *= 1.05;
        long n = static_cast<long>(std::ceil(x));
        if (n >= N) break;
        if (n > cps.back()) cps.push_back(n);
    }
    cps.push_back(N);
    return cps;
}

} // namespace

SurvivalProfile survival_profile(const OffspringSchedule& schedule, long target) {
    if (target < 0) fail(ErrorCode::EngineError, "horizon must be >= 0");
    PmfCache cache(schedule, target);
    SurvivalProfile out;
    out.target = target;
    out.phi.assign(target + 1, 1.0);
    double phi = 1.0;
    for (long j = target - 1; j >= 0; --j) {
        phi *= tail_poly(cache.tail[j], 1.0 - phi);
        out.phi[j] = phi;
    }
    return out;
}

double DiscreteCurves::m(long n) const { return std::exp(log_m[n]); }

DiscreteCurves discrete_curves(const OffspringSchedule& schedule, long N, DiscreteCurveOptions opts) {
    if (N < 1) fail(ErrorCode::EngineError, "horizon must be >= 1");
    PmfCache cache(schedule, N + 1);

    DiscreteCurves out;
    out.horizon = N;
    out.mu.assign(N + 1, 0.0);
    out.log_m.assign(N + 1, 0.0);
    out.gamma.assign(N + 1, 0.0);
    out.m_gamma.assign(N + 1, 0.0);

    std::vector<double> zero_sum_prefix;
    if (opts.with_agresti) zero_sum_prefix.assign(N + 1, 0.0);

    long limit = N;
    for (long n = 0; n <= N; ++n) {
        out.mu[n] = cache.pmf[n].mean();
        if (n == N) break;
        if (out.mu[n] == 0.0) {
            // m_{n+1} = 0: Gamma terms beyond here divide by zero.
            out.truncated_at = n + 1;
            limit = n;
            break;
        }
        double gpp = cache.pmf[n].factorial_moment(2);
        out.log_m[n + 1] = out.log_m[n] + std::log(out.mu[n]);
        out.gamma[n + 1] = out.gamma[n] + gpp / (2.0 * out.mu[n] * std::exp(out.log_m[n + 1]));
        out.m_gamma[n + 1] = out.mu[n] * out.m_gamma[n] + gpp / (2.0 * out.mu[n]);
        if (opts.with_agresti)
            zero_sum_prefix[n + 1] = zero_sum_prefix[n] + cache.pmf[n].g_second(0.0) /
                                                              (2.0 * out.mu[n] * std::exp(out.log_m[n + 1]));
    }
    if (out.truncated_at >= 0) {
        out.mu.resize(limit + 1);
        out.log_m.resize(limit + 1);
        out.gamma.resize(limit + 1);
        out.m_gamma.resize(limit + 1);
    }

    if (!opts.compute_phi) return out;

    std::vector<long> cps = opts.phi_checkpoints.empty() ? auto_checkpoints(N) : opts.phi_checkpoints;
    std::erase_if(cps, [&](long n) { return n < 0 || n > limit; });
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());

    out.checkpoints = cps;
    size_t count = cps.size();
    out.phi.assign(count, 0.0);
    out.phi_gamma.assign(count, 0.0);
    if (opts.with_agresti) {
        out.agresti_lower.assign(count, 0.0);
        out.agresti_upper_sharp.assign(count, 0.0);
        out.agresti_zero_variant.assign(count, 0.0);
    }

    // Each checkpoint is an independent inward pass.
#ifdef _OPENMP
    int threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
    for (long i = 0; i < static_cast<long>(count); ++i) {
        long n = cps[i];
        if (opts.with_agresti) {
            PassSums s = inward_pass_with_sharp_sum(cache, n, out.mu, out.log_m);
            out.phi[i] = s.phi;
            double inv_m = std::exp(-out.log_m[n]);
            out.agresti_lower[i] = 1.0 / (inv_m + out.gamma[n]);
            out.agresti_upper_sharp[i] = 1.0 / (inv_m + s.sharp_sum);
            out.agresti_zero_variant[i] = 1.0 / (inv_m + zero_sum_prefix[n]);
        } else {
            out.phi[i] = inward_pass(cache, n, 1.0);
        }
        out.phi_gamma[i] = out.phi[i] * out.gamma[n];
    }
    return out;
}

AgrestiBounds agresti_sandwich(const OffspringSchedule& schedule, long n, double s) {
    if (n < 0) fail(ErrorCode::EngineError, "horizon must be >= 0");
    if (s < 0.0 || s >= 1.0) fail(ErrorCode::EngineError, "s must lie in [0, 1)");
    PmfCache cache(schedule, n);

    std::vector<double> mu(n + 1, 0.0), log_m(n + 1, 0.0);
    double gamma = 0.0, zero_sum = 0.0;
    for (long j = 0; j < n; ++j) {
        mu[j] = cache.pmf[j].mean();
        if (mu[j] == 0.0) fail(ErrorCode::DegenerateMean, "mu_" + std::to_string(j) + " = 0");
        log_m[j + 1] = log_m[j] + std::log(mu[j]);
        double denom = 2.0 * mu[j] * std::exp(log_m[j + 1]);
        gamma += cache.pmf[j].factorial_moment(2) / denom;
        zero_sum += cache.pmf[j].g_second(0.0) / denom;
    }

    PassSums sums = inward_pass_with_sharp_sum(cache, n, mu, log_m);

    AgrestiBounds out;
    out.n = n;
    out.s = s;
    out.m_n = std::exp(log_m[n]);
    out.gamma = gamma;
    out.sharp_sum = sums.sharp_sum;
    out.zero_sum = zero_sum;
    out.exact_phi = sums.phi;
    out.exact = (s == 0.0) ? sums.phi : inward_pass(cache, n, 1.0 - s);

    double inv_ms = 1.0 / ((1.0 - s) * out.m_n);
    double inv_m = 1.0 / out.m_n;
    out.lower_at_s = 1.0 / (inv_ms + gamma);
    out.upper_sharp_at_s = 1.0 / (inv_ms + sums.sharp_sum);
    out.lower_at_zero = 1.0 / (inv_m + gamma);
    out.upper_sharp_at_zero = 1.0 / (inv_m + sums.sharp_sum);
    out.upper_zero_variant = 1.0 / (inv_m + zero_sum);

    const double slack = 1e-12;
    if (out.lower_at_s > out.exact * (1.0 + slack) + slack) ++out.order_violations;
    if (out.exact > out.upper_sharp_at_s * (1.0 + slack) + slack) ++out.order_violations;
    if (out.lower_at_zero > out.exact_phi * (1.0 + slack) + slack) ++out.order_violations;
    if (out.exact_phi > out.upper_sharp_at_zero * (1.0 + slack) + slack) ++out.order_violations;
    return out;
}

double FactorialMomentCurve::value(int i, int r) const {
    double lg = log10_value(i, r);
    if (lg > 300.0) return std::numeric_limits<double>::infinity();
    return scaled[i][r - 1] * std::exp(r * log_m[i]);
}

double FactorialMomentCurve::log10_value(int i, int r) const {
    double s = scaled[i][r - 1];
    if (s <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log10(s) + r * log_m[i] / std::numbers::ln10;
}

double FactorialMomentCurve::limit_ratio(int i, int r) const {
    double g = gamma[i];
    double s = scaled[i][r - 1];
    if (g <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (s <= 0.0) return 0.0;
    return std::exp(std::log(s) - (r - 1) * std::log(g));
}

FactorialMomentCurve factorial_moment_curve(const OffspringSchedule& schedule, long N, int R,
                                            std::vector<long> checkpoints) {
    if (R < 1) fail(ErrorCode::EngineError, "moment order must be >= 1");
    if (R > 12) fail(ErrorCode::EngineError, "moment order capped at 12 (factorial growth)");
    if (N < 0) fail(ErrorCode::EngineError, "horizon must be >= 0");

    if (checkpoints.empty()) checkpoints = {N};
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
    if (checkpoints.front() < 0 || checkpoints.back() > N)
        fail(ErrorCode::EngineError, "checkpoints must lie in [0, N]");

    FactorialMomentCurve out;
    out.order = R;

    Jet jet = Jet::identity(R); // scaled coefficients c_j / m_n^j; m_0 = 1
    double log_m = 0.0, gamma = 0.0;
    size_t next_cp = 0;

    auto record = [&](long n) {
        out.n.push_back(n);
        out.log_m.push_back(log_m);
        out.gamma.push_back(gamma);
        std::vector<double> row(R);
        double fact = 1.0;
        for (int r = 1; r <= R; ++r) {
            fact *= r;
            row[r - 1] = (r % 2 == 0 ? fact : -fact) * jet.c[r] + 0.0; // r! (-1)^r c_r >= 0
        }
        out.scaled.push_back(std::move(row));
    };

    for (long n = 0; n <= N; ++n) {
        while (next_cp < checkpoints.size() && checkpoints[next_cp] == n) {
            record(n);
            ++next_cp;
        }
        if (next_cp >= checkpoints.size() || n == N) break;

        Pmf pmf = schedule.pmf_at(n);
        double mu = pmf.mean();
        if (mu == 0.0) fail(ErrorCode::DegenerateMean, "mu_" + std::to_string(n) + " = 0");
        double log_m_next = log_m + std::log(mu);

        Jet inner = Jet::complement_from_pmf(pmf, R);
        // Rescale the inner jet from the m_n frame to the m_{n+1} frame:
        //   G_hat_i = G_i * m_n / m_{n+1}^i   (G_hat_1 = 1 exactly in the critical case).
        for (int i = 1; i <= R; ++i) inner.c[i] *= std::exp(log_m - i * log_m_next);
        jet = Jet::compose(jet, inner);
        log_m = log_m_next;
        double gpp = pmf.factorial_moment(2);
        gamma += gpp / (2.0 * mu * std::exp(log_m_next));

        bool finite = true;
        for (double c : jet.c)
            if (!std::isfinite(c)) finite = false;
        if (!finite) {
            out.overflow_at = n + 1;
            break;
        }
        if (out.overflow_at < 0 && (R * log_m > 300.0 * std::numbers::ln10)) out.overflow_at = n + 1;
    }
    return out;
}

double DistributionVector::factorial_moment(int r) const {
    double sum = 0.0;
    for (size_t z = 0; z < p.size(); ++z) {
        double term = p[z];
        for (int j = 0; j < r; ++j) term *= static_cast<double>(z) - j;
        if (static_cast<int>(z) >= r) sum += term;
    }
    return sum;
}

double DistributionVector::raw_moment(int r) const {
    double sum = 0.0;
    for (size_t z = 1; z < p.size(); ++z) sum += std::pow(static_cast<double>(z), r) * p[z];
    return sum;
}

DistributionVector exact_distribution_oracle(const OffspringSchedule& schedule, long n, int cap) {
    if (n > 16) fail(ErrorCode::EngineError, "oracle horizon capped at 16 generations");
    if (cap > 4096 || cap < 1) fail(ErrorCode::EngineError, "oracle cap must lie in [1, 4096]");

    DistributionVector out;
    std::vector<double> v{0.0, 1.0}; // Z_0 = 1
    double leak = 0.0;

    for (long j = 0; j < n; ++j) {
        Pmf pmf = schedule.pmf_at(j);
        std::vector<double> acc(1, 0.0);
        std::vector<double> pow_conv{1.0}; // pmf^{*z}, z = 0
        double pow_tail = 0.0;             // mass of pmf^{*z} beyond cap

        for (size_t z = 0; z < v.size(); ++z) {
            if (v[z] != 0.0) {
                if (acc.size() < pow_conv.size()) acc.resize(pow_conv.size(), 0.0);
                for (size_t i = 0; i < pow_conv.size(); ++i) acc[i] += v[z] * pow_conv[i];
                leak += v[z] * pow_tail;
            }
            if (z + 1 < v.size()) {
                // pow_conv <- pow_conv * pmf, truncated at cap; dropped mass goes to the tail.
                size_t new_len = std::min<size_t>(pow_conv.size() + pmf.probs.size() - 1, cap + 1);
                std::vector<double> next(new_len, 0.0);
                for (size_t a = 0; a < pow_conv.size(); ++a) {
                    if (pow_conv[a] == 0.0) continue;
                    for (size_t b = 0; b < pmf.probs.size(); ++b) {
                        if (pmf.probs[b] == 0.0) continue;
                        if (a + b < new_len)
                            next[a + b] += pow_conv[a] * pmf.probs[b];
                        else
                            pow_tail += pow_conv[a] * pmf.probs[b];
                    }
                }
                pow_conv.swap(next);
            }
        }
        size_t last = acc.size();
        while (last > 1 && acc[last - 1] == 0.0) --last;
        acc.resize(last);
        v.swap(acc);
    }

    out.p = std::move(v);
    out.leaked_mass = leak;
    out.truncation_warning = leak > 1e-9;
    return out;
}

} // namespace crit::pgf
