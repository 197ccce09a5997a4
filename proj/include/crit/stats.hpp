#pragma once

#include <span>
#include <vector>

namespace crit::stats {

struct KsResult {
    long n_samples = 0;
    double ks_distance = 0.0;
    double p_value = 0.0;
};

/// One-sample Kolmogorov-Smirnov against Exp(1); p-value from the asymptotic
/// Kolmogorov series (20 terms).  Requires >= 8 samples.
KsResult ks_vs_exponential(std::vector<double> samples);

/// Survival function of the asymptotic Kolmogorov distribution at lambda.
double kolmogorov_sf(double lambda);

struct MomentCi {
    int r = 1;
    double mean = 0.0;
    double half_width = 0.0; // 3 sigma normal approximation

    bool contains(double x) const { return x >= mean - half_width && x <= mean + half_width; }
};

/// Plug-in moments of x^r with 3*sd/sqrt(m) half-widths, r = 1..R.
/// Requires >= 30 samples and R <= 6.
std::vector<MomentCi> empirical_moments_ci(std::span<const double> samples, int R);

enum class TrendKind { Diverging, Converging, Inconclusive };

struct TrendVerdict {
    TrendKind kind = TrendKind::Inconclusive;
    double tail_estimate = 0.0; // mean of the innermost window
    long window = 0;            // innermost window length
};

/// Finite-horizon trend over the last three geometric windows (final 1/27, 1/9,
/// 1/3 of the index range): sustained growth past every prior value reads as
/// diverging, shrinking oscillation around a level as converging to it.
/// Requires >= 16 points.
TrendVerdict sequence_trend(std::span<const double> values);

} // namespace crit::stats
