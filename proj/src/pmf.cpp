#include "crit/pmf.hpp"

#include <cmath>
#include <string>

#include "crit/errors.hpp"

namespace crit {

double Pmf::mean() const {
    double m = 0.0;
    for (size_t k = 1; k < probs.size(); ++k) m += static_cast<double>(k) * probs[k];
    return m;
}

double Pmf::factorial_moment(int r) const {
    double sum = 0.0;
    for (size_t k = 0; k < probs.size(); ++k) {
        double term = probs[k];
        for (int j = 0; j < r; ++j) term *= static_cast<double>(k) - j;
        if (static_cast<int>(k) >= r) sum += term;
    }
    return sum;
}

double Pmf::raw_moment(int r) const {
    double sum = 0.0;
    for (size_t k = 1; k < probs.size(); ++k) sum += std::pow(static_cast<double>(k), r) * probs[k];
    return sum;
}

double Pmf::g(double x) const {
    double acc = 0.0;
    for (size_t k = probs.size(); k-- > 0;) acc = acc * x + probs[k];
    return acc;
}

double Pmf::g_second(double x) const {
    double acc = 0.0;
    for (size_t k = probs.size(); k-- > 2;) {
        double coeff = static_cast<double>(k) * (static_cast<double>(k) - 1.0) * probs[k];
        acc = acc * x + coeff;
    }
    return acc;
}

std::vector<double> Pmf::tail_coeffs() const {
    if (probs.size() <= 1) return {};
    std::vector<double> tail(probs.size() - 1);
    double acc = 0.0;
    for (size_t i = probs.size() - 1; i-- > 0;) {
        acc += probs[i + 1];
        tail[i] = acc;
    }
    return tail;
}

Pmf validate_pmf(const std::vector<double>& probs, int max_support) {
    if (probs.empty()) fail(ErrorCode::MassNotOne, "empty probability vector");
    double sum = 0.0;
    for (size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] < 0.0)
            fail(ErrorCode::NegativeMass, "p[" + std::to_string(k) + "] = " + std::to_string(probs[k]));
        sum += probs[k];
    }
    if (std::abs(sum - 1.0) > kMassTolerance)
        fail(ErrorCode::MassNotOne, "mass sums to " + std::to_string(sum));

    size_t last = probs.size();
    while (last > 1 && probs[last - 1] == 0.0) --last;
    if (static_cast<int>(last) - 1 > max_support)
        fail(ErrorCode::SupportTooLarge,
             "support " + std::to_string(last - 1) + " exceeds cap " + std::to_string(max_support));

    Pmf pmf;
    pmf.probs.assign(probs.begin(), probs.begin() + last);
    return pmf;
}

PmfMoments pmf_moments(const Pmf& pmf, int r) {
    if (r < 1) fail(ErrorCode::EngineError, "moment order must be >= 1");
    PmfMoments out;
    out.raw.reserve(r);
    out.factorial.reserve(r);
    for (int j = 1; j <= r; ++j) {
        out.raw.push_back(pmf.raw_moment(j));
        out.factorial.push_back(pmf.factorial_moment(j));
    }
    return out;
}

double tail_poly(const std::vector<double>& tail, double q) {
    double acc = 0.0;
    for (size_t i = tail.size(); i-- > 0;) acc = acc * q + tail[i];
    return acc;
}

} // namespace crit
