#include "crit/hypotheses.hpp"

#include <algorithm>
#include <cmath>

#include "crit/errors.hpp"
#include "crit/stats.hpp"

namespace crit::model {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::SatisfiedOnHorizon: return "satisfied-on-horizon";
        case Verdict::Violated: return "violated";
        case Verdict::InconclusiveTrend: return "inconclusive-trend";
    }
    return "?";
}

const HypothesisEntry& HypothesisReport::entry(const std::string& id) const {
    for (const auto& e : entries)
        if (e.id == id) return e;
    fail(ErrorCode::EngineError, "no hypothesis entry '" + id + "'");
}

namespace {

using stats::TrendKind;

/// Verdict for a "-> infinity" hypothesis.
Verdict divergence_verdict(const stats::TrendVerdict& t) {
    switch (t.kind) {
        case TrendKind::Diverging: return Verdict::SatisfiedOnHorizon;
        case TrendKind::Converging: return Verdict::Violated;
        case TrendKind::Inconclusive: return Verdict::InconclusiveTrend;
    }
    return Verdict::InconclusiveTrend;
}

/// Verdict for a "stays bounded" hypothesis.
Verdict boundedness_verdict(const stats::TrendVerdict& t) {
    switch (t.kind) {
        case TrendKind::Diverging: return Verdict::Violated;
        case TrendKind::Converging: return Verdict::SatisfiedOnHorizon;
        case TrendKind::Inconclusive: return Verdict::InconclusiveTrend;
    }
    return Verdict::InconclusiveTrend;
}

size_t tail_start(size_t n) { return n - std::max<size_t>(1, n / 3); }

} // namespace

HypothesisReport hypothesis_report(const OffspringSchedule& schedule, long horizon,
                                   const pgf::DiscreteCurves& curves) {
    if (horizon < 16) fail(ErrorCode::HorizonMismatch, "horizon must be >= 16 for trend verdicts");
    if (curves.max_n() < horizon)
        fail(ErrorCode::HorizonMismatch, "gamma curve stops at n = " + std::to_string(curves.max_n()) +
                                             ", horizon is " + std::to_string(horizon));

    size_t count = static_cast<size_t>(horizon) + 1;
    std::vector<double> p0(count), p01(count), ex3(count), ex_hi(count), mu(count);
    for (size_t n = 0; n < count; ++n) {
        Pmf pmf = schedule.pmf_at(static_cast<long>(n));
        p0[n] = pmf.p(0);
        p01[n] = pmf.p(0) + pmf.p(1);
        ex3[n] = pmf.raw_moment(3);
        ex_hi[n] = pmf.raw_moment(8);
        mu[n] = pmf.mean();
    }

    HypothesisReport out;

    double sup_p0 = *std::max_element(p0.begin(), p0.end());
    out.entries.push_back({"H1", sup_p0,
                           sup_p0 < 1.0 ? Verdict::SatisfiedOnHorizon : Verdict::Violated,
                           "sup P(X_n = 0) over the horizon"});

    size_t tail = tail_start(count);
    double limsup_p01 = *std::max_element(p01.begin() + tail, p01.end());
    out.entries.push_back({"H2", limsup_p01,
                           limsup_p01 < 1.0 ? Verdict::SatisfiedOnHorizon : Verdict::Violated,
                           "sup P(X_n = 0) + P(X_n = 1) over the tail third"});

    double liminf_p0 = *std::min_element(p0.begin() + tail, p0.end());
    out.entries.push_back({"H3", liminf_p0,
                           liminf_p0 > 0.0 ? Verdict::SatisfiedOnHorizon : Verdict::Violated,
                           "inf P(X_n = 0) over the tail third"});

    auto t_ex3 = stats::sequence_trend(ex3);
    out.entries.push_back({"H4a", *std::max_element(ex3.begin(), ex3.end()), boundedness_verdict(t_ex3),
                           "third-moment boundedness trend"});
    auto t_exhi = stats::sequence_trend(ex_hi);
    out.entries.push_back({"H4b", *std::max_element(ex_hi.begin(), ex_hi.end()), boundedness_verdict(t_exhi),
                           "eighth-moment boundedness trend (finite support bounds all orders)"});

    auto t_gamma = stats::sequence_trend(std::span(curves.gamma.data(), count));
    out.entries.push_back({"H5", curves.gamma[count - 1], divergence_verdict(t_gamma), "Gamma_n trend"});

    auto t_mgamma = stats::sequence_trend(std::span(curves.m_gamma.data(), count));
    out.entries.push_back(
        {"H6", curves.m_gamma[count - 1], divergence_verdict(t_mgamma), "m_n Gamma_n trend"});

    auto t_mu = stats::sequence_trend(mu);
    bool mu_to_one = t_mu.kind == TrendKind::Converging && std::abs(t_mu.tail_estimate - 1.0) <= 0.02;
    out.conditions.push_back({"mean_to_one", mu_to_one, t_mu.tail_estimate});
    return out;
}

HypothesisReport hypothesis_report(const RateSchedule& rates, const TimeGrid& grid,
                                   const bd::MeanGamma& curves) {
    grid.validate();
    if (grid.size() < 16) fail(ErrorCode::HorizonMismatch, "grid must have >= 16 knots for trend verdicts");
    if (curves.Gamma.size() != grid.size())
        fail(ErrorCode::HorizonMismatch, "gamma curve does not match the grid");

    size_t count = grid.size();
    std::vector<double> death(count), birth_sum(count), total(count), ex(count), m_gamma(count);
    for (size_t i = 0; i < count; ++i) {
        RateValues rv = rates.at(grid.knots[i], 1);
        death[i] = rv.death;
        double bs = 0.0;
        for (double b : rv.birth) bs += b;
        birth_sum[i] = bs;
        total[i] = rv.total_jump_rate();
        ex[i] = rv.ex(1);
        m_gamma[i] = curves.M[i] * curves.Gamma[i];
    }

    HypothesisReport out;
    size_t tail = tail_start(count);

    double liminf_death = *std::min_element(death.begin() + tail, death.end());
    out.entries.push_back({"H7", liminf_death,
                           liminf_death > 0.0 ? Verdict::SatisfiedOnHorizon : Verdict::Violated,
                           "inf b_{-1}(t) over the tail third"});

    double liminf_birth = *std::min_element(birth_sum.begin() + tail, birth_sum.end());
    out.entries.push_back({"H8", liminf_birth,
                           liminf_birth > 0.0 ? Verdict::SatisfiedOnHorizon : Verdict::Violated,
                           "inf total birth rate over the tail third"});

    auto t_total = stats::sequence_trend(total);
    out.entries.push_back({"H9", *std::max_element(total.begin(), total.end()), boundedness_verdict(t_total),
                           "total rate boundedness trend"});

    auto t_gamma = stats::sequence_trend(curves.Gamma);
    out.entries.push_back({"H10", curves.Gamma.back(), divergence_verdict(t_gamma), "Gamma(t) trend"});

    auto t_mgamma = stats::sequence_trend(m_gamma);
    out.entries.push_back({"H11", m_gamma.back(), divergence_verdict(t_mgamma), "M(t) Gamma(t) trend"});

    auto t_ex = stats::sequence_trend(ex);
    bool drift_to_zero = t_ex.kind == TrendKind::Converging && std::abs(t_ex.tail_estimate) <= 0.02;
    out.conditions.push_back({"mean_jump_to_zero", drift_to_zero, t_ex.tail_estimate});
    return out;
}

} // namespace crit::model
