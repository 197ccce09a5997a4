#pragma once

#include <vector>

namespace crit {

inline constexpr int kDefaultMaxSupport = 64;
inline constexpr double kMassTolerance = 1e-12;

/// Finite-support offspring distribution; probs[k] = P(X = k), trailing zeros trimmed.
struct Pmf {
    std::vector<double> probs;

    int max_k() const { return static_cast<int>(probs.size()) - 1; }
    double p(int k) const { return k >= 0 && k < static_cast<int>(probs.size()) ? probs[k] : 0.0; }

    double mean() const;

    /// E[X(X-1)...(X-r+1)] = g^(r)(1).
    double factorial_moment(int r) const;
    double raw_moment(int r) const;

    /// g(x) = sum_k p_k x^k.
    double g(double x) const;
    /// g''(x) = sum_k k(k-1) p_k x^(k-2); nonnegative coefficients, monotone in x.
    double g_second(double x) const;

    /// Tail sums P(X > i) for i = 0..max_k-1.  The survival recursion uses the
    /// cancellation-free identity 1 - g(1-phi) = phi * sum_i P(X>i) (1-phi)^i.
    std::vector<double> tail_coeffs() const;
};

/// Checks nonnegativity, unit mass (tolerance 1e-12) and the support cap;
/// trims trailing zeros.  Throws Error(NegativeMass|MassNotOne|SupportTooLarge).
Pmf validate_pmf(const std::vector<double>& probs, int max_support = kDefaultMaxSupport);

struct PmfMoments {
    std::vector<double> raw;       // E(X^j), j = 1..r
    std::vector<double> factorial; // g^(j)(1), j = 1..r
};

PmfMoments pmf_moments(const Pmf& pmf, int r);

/// Evaluates sum_i tail[i] * q^i by Horner; all-positive arithmetic.
double tail_poly(const std::vector<double>& tail, double q);

} // namespace crit
