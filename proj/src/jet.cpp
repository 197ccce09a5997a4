#include "crit/jet.hpp"

#include <cmath>

#include "crit/errors.hpp"

namespace crit {

Jet Jet::identity(int order) {
    Jet j(order);
    j.c[0] = 1.0;
    if (order >= 1) j.c[1] = -1.0;
    return j;
}

Jet Jet::from_pmf(const Pmf& pmf, int order) {
    // c_j = (-1)^j E[C(X, j)]; binomial moments accumulated exactly.
    Jet out(order);
    for (size_t k = 0; k < pmf.probs.size(); ++k) {
        double p = pmf.probs[k];
        if (p == 0.0) continue;
        double binom = 1.0; // C(k, 0)
        int top = std::min<int>(order, static_cast<int>(k));
        for (int j = 0; j <= top; ++j) {
            out.c[j] += (j % 2 == 0 ? binom : -binom) * p;
            binom *= static_cast<double>(k - j) / static_cast<double>(j + 1);
        }
    }
    return out;
}

Jet Jet::complement_from_pmf(const Pmf& pmf, int order) {
    Jet g = from_pmf(pmf, order);
    Jet out(order);
    out.c[0] = 0.0;
    for (int j = 1; j <= order; ++j) out.c[j] = -g.c[j];
    return out;
}

Jet Jet::compose(const Jet& outer, const Jet& inner) {
    if (inner.c[0] != 0.0) fail(ErrorCode::EngineError, "inner jet must have zero constant term");
    int order = std::min(outer.order(), inner.order());
    Jet result(order);
    result.c[0] = outer.c[0];

    // power[j] = coefficients of inner(phi)^m, built incrementally in m.
    std::vector<double> power(order + 1, 0.0);
    power[0] = 1.0; // inner^0
    std::vector<double> next(order + 1, 0.0);
    for (int m = 1; m <= order; ++m) {
        // next = power * inner, truncated; inner has zero constant so degree shifts up.
        for (int j = 0; j <= order; ++j) next[j] = 0.0;
        for (int a = 0; a <= order - 1; ++a) {
            if (power[a] == 0.0) continue;
            for (int b = 1; a + b <= order; ++b) next[a + b] += power[a] * inner.c[b];
        }
        power.swap(next);
        double cm = outer.c[m];
        if (cm != 0.0)
            for (int j = m; j <= order; ++j) result.c[j] += cm * power[j];
    }
    return result;
}

double Jet::factorial_moment(int r) const {
    if (r < 0 || r > order()) fail(ErrorCode::EngineError, "factorial moment order out of range");
    double fact = 1.0;
    for (int j = 2; j <= r; ++j) fact *= j;
    return (r % 2 == 0 ? fact : -fact) * c[r];
}

std::vector<std::vector<double>> stirling_second_table(int max_r) {
    std::vector<std::vector<double>> s(max_r + 1);
    for (int r = 0; r <= max_r; ++r) {
        s[r].assign(r + 1, 0.0);
        s[r][0] = (r == 0) ? 1.0 : 0.0;
        for (int k = 1; k <= r; ++k) {
            double prev_same = (k <= r - 1) ? s[r - 1][k] : 0.0;
            double prev_less = s[r - 1][k - 1];
            s[r][k] = k * prev_same + prev_less;
        }
    }
    return s;
}

std::vector<double> raw_moments_from_factorial(const std::vector<double>& factorial) {
    int R = static_cast<int>(factorial.size());
    if (R < 1) fail(ErrorCode::EngineError, "need at least one factorial moment");
    auto s = stirling_second_table(R);
    std::vector<double> raw(R, 0.0);
    for (int r = 1; r <= R; ++r) {
        double m = 0.0;
        for (int k = 1; k <= r; ++k) m += s[r][k] * factorial[k - 1];
        raw[r - 1] = m;
    }
    return raw;
}

} // namespace crit
