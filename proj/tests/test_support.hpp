#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

// Small independent oracles shared by the unit tests.  These deliberately use
// naive formulations (scalar iteration, direct summation) so they exercise the
// engines along a different computational route.

namespace testsupport {

/// Survival probability for the homogeneous two-atom law {p0, p2} by scalar
/// iteration of phi <- 1 - g(1 - phi) = p2 (2 phi - phi^2), starting at 1.
inline double phi_two_atom(double p2, long generations) {
    double phi = 1.0;
    for (long i = 0; i < generations; ++i) phi = p2 * (2.0 * phi - phi * phi);
    return phi;
}

inline double harmonic(long n) {
    double h = 0.0;
    for (long i = 1; i <= n; ++i) h += 1.0 / static_cast<double>(i);
    return h;
}

/// Two-sample Kolmogorov-Smirnov distance.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        double fa = static_cast<double>(i) / static_cast<double>(a.size());
        double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

/// Exp(1) plug-in quantile sample of size m: -log(1 - (i - 1/2)/m).
inline std::vector<double> exp_quantile_sample(long m) {
    std::vector<double> out;
    out.reserve(m);
    for (long i = 1; i <= m; ++i)
        out.push_back(-std::log1p(-(static_cast<double>(i) - 0.5) / static_cast<double>(m)));
    return out;
}

} // namespace testsupport
