#include "crit/stats.hpp"

#include <algorithm>
#include <cmath>

#include "crit/errors.hpp"

namespace crit::stats {

double kolmogorov_sf(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // dual theta-function form; the alternating series is useless at small lambda
        double pi = std::acos(-1.0);
        double sum = 0.0;
        for (int k = 1; k <= 20; ++k) {
            double odd = 2.0 * k - 1.0;
            sum += std::exp(-odd * odd * pi * pi / (8.0 * lambda * lambda));
        }
        return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * sum, 0.0, 1.0);
    }
    double sum = 0.0;
    for (int k = 1; k <= 20; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1) ? term : -term;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_vs_exponential(std::vector<double> samples) {
    if (samples.size() < 8)
        fail(ErrorCode::TooFewSamples, "KS test needs >= 8 samples, got " + std::to_string(samples.size()));
    std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        double cdf = -std::expm1(-samples[i]); // 1 - e^{-x}
        double hi = (static_cast<double>(i) + 1.0) / n - cdf;
        double lo = cdf - static_cast<double>(i) / n;
        d = std::max({d, hi, lo});
    }
    KsResult out;
    out.n_samples = static_cast<long>(samples.size());
    out.ks_distance = d;
    out.p_value = kolmogorov_sf(std::sqrt(n) * d);
    return out;
}

std::vector<MomentCi> empirical_moments_ci(std::span<const double> samples, int R) {
    if (samples.size() < 30)
        fail(ErrorCode::TooFewSamples, "moment table needs >= 30 samples, got " + std::to_string(samples.size()));
    if (R < 1 || R > 6) fail(ErrorCode::EngineError, "moment order must lie in [1, 6]");

    double m = static_cast<double>(samples.size());
    std::vector<MomentCi> out;
    out.reserve(R);
    for (int r = 1; r <= R; ++r) {
        double mean = 0.0;
        for (double x : samples) mean += std::pow(x, r);
        mean /= m;
        double var = 0.0;
        for (double x : samples) {
            double d = std::pow(x, r) - mean;
            var += d * d;
        }
        var /= m;
        out.push_back({r, mean, 3.0 * std::sqrt(var / m)});
    }
    return out;
}

namespace {

struct WindowStats {
    double mean = 0.0, min = 0.0, max = 0.0;
    double range() const { return max - min; }
};

WindowStats window_stats(std::span<const double> v, size_t lo, size_t hi) {
    WindowStats w;
    w.min = w.max = v[lo];
    double sum = 0.0;
    for (size_t i = lo; i < hi; ++i) {
        sum += v[i];
        w.min = std::min(w.min, v[i]);
        w.max = std::max(w.max, v[i]);
    }
    w.mean = sum / static_cast<double>(hi - lo);
    return w;
}

} // namespace

TrendVerdict sequence_trend(std::span<const double> values) {
    size_t n = values.size();
    if (n < 16) fail(ErrorCode::TooFewPoints, "trend needs >= 16 points, got " + std::to_string(n));

    // Geometric partition of the index range: windows at genuinely different
    // scales so that difference ratios separate slow divergence (log-like,
    // d1/d2 -> 1) from convergence with power tails (d1/d2 -> 1/3 for 1/n).
    size_t c0 = std::max<size_t>(1, n / 27);
    size_t b0 = std::max<size_t>(c0 + 1, n / 9);
    size_t a0 = std::max<size_t>(b0 + 1, n / 3);

    WindowStats A = window_stats(values, a0, n);  // [n/3, n)
    WindowStats B = window_stats(values, b0, a0); // [n/9, n/3)
    WindowStats C = window_stats(values, c0, b0); // [n/27, n/9)
    WindowStats prior = window_stats(values, 0, c0);
    size_t t0 = n - std::max<size_t>(2, n / 27);
    WindowStats tail = window_stats(values, t0, n);

    double scale =
        std::max({std::abs(A.mean), std::abs(B.mean), std::abs(C.mean), A.range(), C.range(), 1e-300});
    double tiny = 1e-9 * scale;
    double eps_stop = 1e-6 * scale;
    double d1 = std::abs(A.mean - B.mean);
    double d2 = std::abs(B.mean - C.mean);

    TrendVerdict out;
    out.tail_estimate = tail.mean;
    out.window = static_cast<long>(n - t0);

    // Tail has effectively stopped moving: converged regardless of direction.
    if (d1 <= eps_stop && A.range() <= eps_stop) {
        out.kind = TrendKind::Converging;
        return out;
    }

    // Monotone window means escaping every prior value, with inter-window
    // movement that is not decaying geometrically.  The monotonicity slack is
    // relative to each pair, not the global scale, so explosive growth in the
    // last window cannot mask the ordering of the earlier ones.
    auto mono_gt = [](double x, double y) { return x > y + 1e-9 * (std::abs(x) + std::abs(y)); };
    bool growing_up = mono_gt(A.mean, B.mean) && mono_gt(B.mean, C.mean) && A.mean > prior.max;
    bool growing_down = mono_gt(B.mean, A.mean) && mono_gt(C.mean, B.mean) && A.mean < prior.min;
    if ((growing_up || growing_down) && d1 > eps_stop && d1 >= 0.9 * d2) {
        out.kind = TrendKind::Diverging;
        return out;
    }

    bool drift_shrinks = d1 <= std::max(0.8 * d2, tiny);
    bool oscillation_shrinks = A.range() <= std::max(0.95 * C.range(), tiny);
    if (drift_shrinks && oscillation_shrinks) {
        out.kind = TrendKind::Converging;
        return out;
    }

    out.kind = TrendKind::Inconclusive;
    return out;
}

} // namespace crit::stats
