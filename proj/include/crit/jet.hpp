#pragma once

#include <vector>

#include "crit/pmf.hpp"

namespace crit {

// Truncated expansion of a generating function h about s = 1 in the survival
// complement variable phi = 1 - s:
//
//   h(1 - phi) = c_0 + c_1 phi + ... + c_R phi^R,    c_j = (-1)^j h^(j)(1) / j!
//
// For a pgf, c_0 = 1 and the factorial moments are F_r = r! (-1)^r c_r.
// Population pgfs propagate by composition: with G(phi) = 1 - g(1 - phi)
// (the complement jet of an offspring pgf, zero constant term),
//
//   f_{n+1}(1 - phi) = f_n(1 - G(phi)).
//
// Truncated composition against a zero-constant inner jet is exact in the
// retained orders, so jets carry the exact F_{n,r} without Faa di Bruno
// bookkeeping.
class Jet {
  public:
    explicit Jet(int order) : c(order + 1, 0.0) {}

    int order() const { return static_cast<int>(c.size()) - 1; }

    /// The pgf of Z_0 = 1, i.e. f(s) = s:  1 - phi.
    static Jet identity(int order);

    /// Expansion of g(1 - phi) for a pmf; c_j = (-1)^j sum_k C(k, j) p_k.
    static Jet from_pmf(const Pmf& pmf, int order);

    /// Expansion of 1 - g(1 - phi); constant term zero, suitable as inner jet.
    static Jet complement_from_pmf(const Pmf& pmf, int order);

    /// outer(1 - inner_complement(phi)) up to the common order.
    /// Requires inner.c[0] == 0.
    static Jet compose(const Jet& outer, const Jet& inner);

    /// F_r = r! (-1)^r c_r for a pgf jet.
    double factorial_moment(int r) const;

    std::vector<double> c;
};

/// Stirling numbers of the second kind S(r, k) for 0 <= k <= r <= max_r.
std::vector<std::vector<double>> stirling_second_table(int max_r);

/// M_r = sum_{k=1}^{r} S(r, k) F_k, r = 1..F.size() (raw moments from factorial moments).
std::vector<double> raw_moments_from_factorial(const std::vector<double>& factorial);

} // namespace crit
