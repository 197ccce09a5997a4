#include "crit/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "crit/errors.hpp"

namespace crit {

OffspringSchedule OffspringSchedule::table(std::vector<double> probs, int max_support) {
    OffspringSchedule s;
    s.family_ = OffspringFamily::Table;
    s.max_support_ = max_support;
    s.fixed_ = validate_pmf(probs, max_support);
    s.name_ = "table";
    return s;
}

OffspringSchedule OffspringSchedule::constant(int offspring_count) {
    if (offspring_count < 0 || offspring_count > kDefaultMaxSupport)
        fail(ErrorCode::SupportTooLarge, "constant offspring count " + std::to_string(offspring_count));
    OffspringSchedule s;
    s.family_ = OffspringFamily::Constant;
    s.constant_count_ = offspring_count;
    std::vector<double> p(offspring_count + 1, 0.0);
    p[offspring_count] = 1.0;
    s.fixed_ = validate_pmf(p);
    s.name_ = "constant";
    return s;
}

OffspringSchedule OffspringSchedule::paper_example() {
    OffspringSchedule s;
    s.family_ = OffspringFamily::PaperExample;
    s.name_ = "paper_example";
    return s;
}

OffspringSchedule OffspringSchedule::polynomial_mean(double alpha) {
    if (alpha > 1.0)
        fail(ErrorCode::EvaluationError,
             "polynomial_mean requires alpha <= 1 (mean would exceed the {0,2} support at n = 1)");
    OffspringSchedule s;
    s.family_ = OffspringFamily::PolynomialMean;
    s.alpha_ = alpha;
    s.name_ = "polynomial_mean";
    return s;
}

OffspringSchedule OffspringSchedule::expression(std::vector<std::pair<int, crit::Expression>> entries,
                                                int max_support) {
    OffspringSchedule s;
    s.family_ = OffspringFamily::Expression;
    s.max_support_ = max_support;
    s.exprs_ = std::move(entries);
    s.name_ = "expression";
    for (const auto& [k, expr] : s.exprs_) {
        if (k < 0) fail(ErrorCode::EvaluationError, "offspring count must be nonnegative");
        if (k > max_support)
            fail(ErrorCode::SupportTooLarge, "offspring count " + std::to_string(k) + " exceeds cap");
    }
    return s;
}

Pmf OffspringSchedule::pmf_at(long n) const {
    if (n < 0) fail(ErrorCode::EngineError, "generation index must be >= 0");
    switch (family_) {
        case OffspringFamily::Table:
        case OffspringFamily::Constant:
            return fixed_;
        case OffspringFamily::PaperExample: {
            if (n == 0) return validate_pmf({0.0, 1.0});
            double p2 = 0.5 * (static_cast<double>(n) + 1.0) / static_cast<double>(n);
            return validate_pmf({1.0 - p2, 0.0, p2});
        }
        case OffspringFamily::PolynomialMean: {
            if (n == 0) return validate_pmf({0.0, 1.0});
            double mu = std::pow((static_cast<double>(n) + 1.0) / static_cast<double>(n), alpha_);
            double p2 = 0.5 * mu;
            return validate_pmf({1.0 - p2, 0.0, p2});
        }
        case OffspringFamily::Expression: {
            int top = 0;
            for (const auto& [k, expr] : exprs_) top = std::max(top, k);
            std::vector<double> p(top + 1, 0.0);
            for (const auto& [k, expr] : exprs_) p[k] = expr.eval(static_cast<double>(n));
            try {
                return validate_pmf(p, max_support_);
            } catch (const Error& e) {
                fail(ErrorCode::EvaluationError,
                     "expression family produced invalid mass at n = " + std::to_string(n) + " (" + e.what() + ")");
            }
        }
    }
    fail(ErrorCode::EngineError, "corrupt offspring family");
}

RateSchedule::RateSchedule(int max_jump, std::map<int, crit::Expression> rate_exprs) : max_jump_(max_jump) {
    if (max_jump < 1) fail(ErrorCode::ConfigInvalid, "max_jump must be >= 1");
    if (max_jump > kDefaultMaxSupport)
        fail(ErrorCode::SupportTooLarge, "max_jump " + std::to_string(max_jump) + " exceeds cap");
    birth_.resize(max_jump);
    for (auto& [k, expr] : rate_exprs) {
        if (k == -1)
            death_ = std::move(expr);
        else if (k >= 1 && k <= max_jump)
            birth_[k - 1] = std::move(expr);
        else
            fail(ErrorCode::ConfigInvalid, "rate index " + std::to_string(k) + " outside {-1, 1.." +
                                               std::to_string(max_jump) + "}");
    }
    name_ = "rates";
}

RateSchedule RateSchedule::constant(const std::map<int, double>& rates) {
    int max_jump = 1;
    for (const auto& [k, v] : rates) max_jump = std::max(max_jump, k);
    std::map<int, crit::Expression> exprs;
    for (const auto& [k, v] : rates) exprs.emplace(k, crit::Expression::constant(v));
    return RateSchedule(max_jump, std::move(exprs));
}

RateValues RateSchedule::at(double t, int max_moment) const {
    RateValues out;
    auto eval_rate = [&](const std::optional<crit::Expression>& e, int k) {
        if (!e) return 0.0;
        double v = e->eval(t);
        if (!(v >= 0.0))
            fail(ErrorCode::NegativeRate,
                 "b_" + std::to_string(k) + "(" + std::to_string(t) + ") = " + std::to_string(v));
        return v;
    };
    out.death = eval_rate(death_, -1);
    out.birth.resize(max_jump_);
    double total = out.death;
    for (int k = 1; k <= max_jump_; ++k) {
        out.birth[k - 1] = eval_rate(birth_[k - 1], k);
        total += out.birth[k - 1];
    }
    out.b0 = -total;
    out.moments.assign(std::max(max_moment, 1), 0.0);
    for (int j = 1; j <= static_cast<int>(out.moments.size()); ++j) {
        double m = (j % 2 == 0) ? out.death : -out.death; // (-1)^j b_{-1}
        double kj = 1.0;
        for (int k = 1; k <= max_jump_; ++k) {
            kj = std::pow(static_cast<double>(k), j);
            m += kj * out.birth[k - 1];
        }
        out.moments[j - 1] = m;
    }
    return out;
}

double g_rate(const RateValues& r, double x) {
    // sum over k = K..1 of b_k x^{k+1}, then b_0 x + b_{-1}
    double acc = 0.0;
    for (int k = static_cast<int>(r.birth.size()); k >= 1; --k) acc = (acc + r.birth[k - 1]) * x;
    acc = (acc + r.b0) * x + r.death;
    return acc;
}

double g_rate_complement(const RateValues& r, double phi) {
    // D(q) = sum_{i>=0} q^i R_i with R_0 = -b_{-1} and R_i = sum_{k>=i} b_k (i >= 1).
    double q = 1.0 - phi;
    double acc = 0.0;
    double running_tail = 0.0;
    for (int i = static_cast<int>(r.birth.size()); i >= 1; --i) {
        running_tail += r.birth[i - 1];
        acc = acc * q + running_tail;
    }
    double d = acc * q - r.death;
    return -phi * d;
}

double g_rate_second(const RateValues& r, double x) {
    double acc = 0.0;
    for (int k = static_cast<int>(r.birth.size()); k >= 1; --k) {
        double coeff = static_cast<double>(k) * (static_cast<double>(k) + 1.0) * r.birth[k - 1];
        acc = acc * x + coeff;
    }
    return acc;
}

double g_rate_survival_numerator(const RateValues& r, double phi) {
    double total = 0.0;
    for (int k = 1; k <= static_cast<int>(r.birth.size()); ++k) {
        double b = r.birth[k - 1];
        if (b == 0.0) continue;
        double bracket;
        if (phi < 0.1) {
            // series: sum_{j=2}^{k+1} C(k+1, j) (-phi)^j
            double binom = static_cast<double>((k + 1) * k) / 2.0; // C(k+1, 2)
            double powphi = phi * phi;
            bracket = 0.0;
            for (int j = 2; j <= k + 1; ++j) {
                bracket += ((j % 2 == 0) ? binom : -binom) * powphi;
                binom *= static_cast<double>(k + 1 - j) / static_cast<double>(j + 1);
                powphi *= phi;
            }
        } else {
            bracket = std::pow(1.0 - phi, k + 1) - 1.0 + (k + 1) * phi;
        }
        total += b * bracket;
    }
    return total;
}

} // namespace crit
