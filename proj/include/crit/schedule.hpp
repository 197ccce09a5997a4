#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crit/expression.hpp"
#include "crit/pmf.hpp"

namespace crit {

enum class OffspringFamily { Table, Constant, PaperExample, PolynomialMean, Expression };

/// Generation-indexed offspring law X_n.  Immutable after construction; evaluation
/// at any n >= 0 yields a validated Pmf.
class OffspringSchedule {
  public:
    /// Same law at every generation.
    static OffspringSchedule table(std::vector<double> probs, int max_support = kDefaultMaxSupport);

    /// Point mass at a fixed offspring count.
    static OffspringSchedule constant(int offspring_count);

    /// Unit start then the two-atom law P(X_n = 2) = (n+1)/(2n), P(X_n = 0) = 1 - P(X_n = 2).
    static OffspringSchedule paper_example();

    /// Two-atom law at {0, 2} with mean ((n+1)/n)^alpha for n >= 1 (unit start at n = 0),
    /// so the population mean grows like n^alpha.  Requires alpha <= 1.
    static OffspringSchedule polynomial_mean(double alpha);

    /// One expression of n per offspring count; each evaluation must produce a valid pmf.
    static OffspringSchedule expression(std::vector<std::pair<int, crit::Expression>> entries,
                                        int max_support = kDefaultMaxSupport);

    /// Throws Error(EvaluationError) when an expression family produces invalid mass.
    Pmf pmf_at(long n) const;

    OffspringFamily family() const { return family_; }
    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

  private:
    OffspringSchedule() = default;

    OffspringFamily family_ = OffspringFamily::Table;
    int max_support_ = kDefaultMaxSupport;
    Pmf fixed_;                                               // Table
    int constant_count_ = 1;                                  // Constant
    double alpha_ = 1.0;                                      // PolynomialMean
    std::vector<std::pair<int, crit::Expression>> exprs_;     // Expression
    std::string name_;
};

struct RateValues {
    double death;                 // b_{-1}(t)
    std::vector<double> birth;    // birth[k-1] = b_k(t), k = 1..K
    double b0;                    // -(death + sum of births)
    std::vector<double> moments;  // moments[j-1] = E(X_t^j) = sum_k k^j b_k(t), j = 1..max

    double total_jump_rate() const { return -b0; }
    double ex(int j) const { return moments[j - 1]; }
};

/// Time-indexed jump rates b_k(t), k in {-1, 1, .., K}; b_0 is derived.
/// Rates supplied as expressions are treated as (piecewise) continuous functions.
class RateSchedule {
  public:
    /// rate_exprs keys must lie in {-1, 1..max_jump}; missing keys mean rate zero.
    RateSchedule(int max_jump, std::map<int, crit::Expression> rate_exprs);

    static RateSchedule constant(const std::map<int, double>& rates);

    /// Evaluates all rates and pseudo-moments at time t.
    /// Throws Error(NegativeRate) if any rate is negative, Error(EvaluationError) on bad expressions.
    RateValues at(double t, int max_moment = 3) const;

    int max_jump() const { return max_jump_; }
    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

  private:
    int max_jump_;
    std::optional<crit::Expression> death_;
    std::vector<std::optional<crit::Expression>> birth_; // index k-1
    std::string name_;
};

// Helpers over evaluated rates; all use cancellation-free forms built on the
// identity g_t(1) = 0 (the k = -1 and k = 0 contributions drop out analytically
// wherever possible).

/// g_t(x) = sum_{k=-1..K} b_k x^{k+1} evaluated directly.
double g_rate(const RateValues& r, double x);

/// g_t(1 - phi) without cancellation: -phi * D(1-phi) where
/// D(q) = -b_{-1} + sum_{i>=1} q^i * (sum_{k>=i} b_k).
double g_rate_complement(const RateValues& r, double phi);

/// g_t''(x) = sum_{k>=1} k(k+1) b_k x^{k-1}  (death and b_0 terms vanish).
double g_rate_second(const RateValues& r, double x);

/// g_t(1-phi) + phi g_t'(1) = sum_{k>=1} b_k [ (1-phi)^{k+1} - 1 + (k+1) phi ],
/// the numerator of the exact survival formula integrand; >= 0, O(phi^2) at 0.
double g_rate_survival_numerator(const RateValues& r, double phi);

} // namespace crit
