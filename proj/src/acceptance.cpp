#include "crit/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "crit/bd_engine.hpp"
#include "crit/curve_table.hpp"
#include "crit/hypotheses.hpp"
#include "crit/montecarlo.hpp"
#include "crit/pgf_engine.hpp"
#include "crit/reference_models.hpp"
#include "crit/stats.hpp"

namespace crit::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) { return format_double(v); }

int effective_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    return threads > 0 ? threads : 1;
#endif
}

struct Checker {
    bool pass = true;
    std::ostringstream detail;
    bool first = true;

    void note(const std::string& s) {
        if (!first) detail << "; ";
        first = false;
        detail << s;
    }

    void check_in(const std::string& label, double value, double lo, double hi) {
        bool ok = value >= lo && value <= hi;
        pass = pass && ok;
        note(label + "=" + fmt(value) + (ok ? " in [" : " NOT in [") + fmt(lo) + "," + fmt(hi) + "]");
    }

    void check_below(const std::string& label, double value, double bound) {
        bool ok = value < bound;
        pass = pass && ok;
        note(label + "=" + fmt(value) + (ok ? " < " : " NOT < ") + fmt(bound));
    }

    void check_true(const std::string& label, bool ok) {
        pass = pass && ok;
        note(label + (ok ? " ok" : " FAILED"));
    }
};

// ---- criterion 1: phi_n Gamma_n -> 1 for the two discrete reference models ----

void criterion_phi_gamma(Checker& ck, int threads) {
    const std::vector<long> cps{100, 1000, 10000, 20000};
    for (const char* name : {"paper_example", "binary_critical"}) {
        auto schedule = discrete_reference(name);
        pgf::DiscreteCurveOptions opts;
        opts.phi_checkpoints = cps;
        opts.threads = threads;
        auto curves = pgf::discrete_curves(schedule, 20000, opts);
        double final_pg = curves.phi_gamma.back();
        ck.check_in(std::string(name) + " phiGamma(2e4)", final_pg, 0.90, 1.05);
        bool monotone = true;
        std::string seq;
        double prev = 1e300;
        for (size_t i = 0; i < curves.checkpoints.size(); ++i) {
            double gap = std::abs(curves.phi_gamma[i] - 1.0);
            monotone = monotone && gap < prev;
            prev = gap;
            seq += (i ? ">" : "") + fmt(gap);
        }
        ck.check_true(std::string(name) + " |phiGamma-1| decreasing (" + seq + ")", monotone);
    }
}

// ---- criterion 2: factorial moment ratios -> r! ----

void criterion_factorial_ratios(Checker& ck) {
    for (const char* name : {"paper_example", "binary_critical"}) {
        auto schedule = discrete_reference(name);
        auto fm = pgf::factorial_moment_curve(schedule, 10000, 3, {10000});
        ck.check_in(std::string(name) + " F2/(m^2 Gamma)", fm.limit_ratio(0, 2), 1.90, 2.10);
        ck.check_in(std::string(name) + " F3/(m^3 Gamma^2)", fm.limit_ratio(0, 3), 5.5, 6.5);
    }
}

// ---- criterion 3: Yaglom exponential limit via seeded Monte Carlo ----
//
// At n = 200 the scaled survivor law still carries a lattice bias of ~0.03
// (populations are even, spacing 2 phi ~ 0.02 after scaling), so the deep
// horizon n = 2000 is the one that meets the stated tolerances.

void criterion_exponential_limit(Checker& ck, std::uint64_t seed, int threads) {
    const long n = 2000;
    auto schedule = discrete_reference("binary_critical");
    pgf::DiscreteCurveOptions copts;
    copts.phi_checkpoints = {n};
    auto curves = pgf::discrete_curves(schedule, n, copts);
    double phi = curves.phi.back();
    double normalizer = curves.m(n) / phi;

    mc::SimConfig cfg;
    cfg.master_seed = seed;
    cfg.replicates = 6000000;
    cfg.checkpoints = {static_cast<double>(n)};
    cfg.threads = threads;
    auto batch = mc::simulate_discrete(schedule, cfg);
    batch.normalizers[0] = normalizer;

    long survivors = batch.survivor_count(0);
    ck.check_true("replicates=6000000 >= 1e5", cfg.replicates >= 100000);
    ck.check_true("survivors=" + std::to_string(survivors) + " >= 2000", survivors >= 2000);

    auto scaled = mc::conditioned_scaled_samples(batch, 0);
    auto ks = stats::ks_vs_exponential(scaled);
    ck.check_below("KS distance vs Exp(1)", ks.ks_distance, 0.03);
    ck.check_true("p=" + fmt(ks.p_value) + " > 0.01", ks.p_value > 0.01);
}

// ---- criterion 4: discrete oracle equivalence ----

void criterion_discrete_oracle(Checker& ck) {
    for (const auto& name : discrete_reference_names()) {
        auto schedule = discrete_reference(name);
        pgf::DiscreteCurveOptions copts;
        auto curves = pgf::discrete_curves(schedule, 12, copts);
        std::vector<long> all_n;
        for (long i = 1; i <= 12; ++i) all_n.push_back(i);
        auto fm = pgf::factorial_moment_curve(schedule, 12, 4, all_n);

        double worst_phi = 0.0, worst_moment = 0.0;
        for (long i = 1; i <= 12; ++i) {
            auto oracle = pgf::exact_distribution_oracle(schedule, i, 4096);
            worst_phi = std::max(worst_phi, std::abs(curves.phi[i] - oracle.survival()));
            for (int r = 1; r <= 4; ++r) {
                double jet_f = fm.value(static_cast<int>(i) - 1, r);
                double oracle_f = oracle.factorial_moment(r);
                double scale = std::max({std::abs(oracle_f), std::abs(jet_f), 1e-30});
                worst_moment = std::max(worst_moment, std::abs(jet_f - oracle_f) / scale);
            }
        }
        ck.check_below(name + " max|phi_pgf - phi_oracle|", worst_phi, 1e-10);
        ck.check_below(name + " max rel moment gap (r<=4)", worst_moment, 1e-9);
    }
}

// ---- criterion 5: continuous closed forms for the linear critical model ----

void criterion_continuous_closed_forms(Checker& ck, int threads) {
    auto rates = continuous_reference("linear_critical");
    auto grid = TimeGrid::uniform(50.0, 100);

    double worst_phi = 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) reduction(max : worst_phi) num_threads(effective_threads(threads))
#endif
    for (long i = 1; i < static_cast<long>(grid.size()); ++i) {
        double t = grid.knots[i];
        double phi = bd::survival_backward(rates, 0.0, t);
        double exact = 1.0 / (1.0 + t);
        double gap = std::abs(phi - exact);
        if (gap > worst_phi) worst_phi = gap;
    }
    ck.check_below("max |phi(0,t) - 1/(1+t)| on [0,50]", worst_phi, 1e-6);

    auto mc = bd::moment_curves(rates, grid, 3);
    double worst_m2 = 0.0, worst_m3 = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        double t = grid.knots[i];
        double m2 = 1.0 + 2.0 * t;
        double m3 = 1.0 + 6.0 * t + 6.0 * t * t;
        worst_m2 = std::max(worst_m2, std::abs(mc.values[i][1] - m2) / m2);
        worst_m3 = std::max(worst_m3, std::abs(mc.values[i][2] - m3) / m3);
    }
    ck.check_below("max rel |M2 - (1+2t)|", worst_m2, 1e-6);
    ck.check_below("max rel |M3 - (1+6t+6t^2)|", worst_m3, 1e-6);

    double worst_bracket = 0.0;
    for (double t : {5.0, 10.0, 25.0, 50.0}) {
        auto cm = bd::survival_bounds(rates, t);
        double exact = 1.0 / (1.0 + t);
        worst_bracket = std::max({worst_bracket, std::abs(cm.second_order_lower - exact), std::abs(cm.second_order_upper - exact)});
    }
    ck.check_below("max |second-order bound - phi| (coincident bounds)", worst_bracket, 1e-6);
}

// ---- criterion 6: continuous limit ratios and the second-order bracket ----

void criterion_continuous_limits(Checker& ck, int threads) {
    {
        auto rates = continuous_reference("linear_critical");
        auto grid = TimeGrid::uniform(100.0, 200);
        auto diag = bd::limit_diagnostics_continuous(rates, grid, 3, {}, threads);
        ck.check_in("linear_critical phiGamma(100)", diag.phi_gamma.back(), 0.985, 1.0);
        ck.check_in("linear_critical M2/(M^2 Gamma)", diag.ratios.back()[0], 1.97, 2.1);
        ck.check_in("linear_critical M3/(M^3 Gamma^2)", diag.ratios.back()[1], 5.8, 6.3);
    }
    {
        auto rates = continuous_reference("two_birth");
        auto grid = TimeGrid::uniform(100.0, 100);
        auto diag = bd::limit_diagnostics_continuous(rates, grid, 2, {}, threads);
        ck.check_in("two_birth phiGamma(100)", diag.phi_gamma.back(), 0.9, 1.1);

        double worst_excess = -1.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) reduction(max : worst_excess) num_threads(effective_threads(threads))
#endif
        for (long i = 0; i < static_cast<long>(grid.size()); ++i) {
            double t = grid.knots[i];
            if (t <= 1.0) continue;
            auto cm = bd::survival_bounds(rates, t);
            double excess = std::max(cm.second_order_lower - cm.exact_phi, cm.exact_phi - cm.second_order_upper);
            if (excess > worst_excess) worst_excess = excess;
        }
        ck.check_true("two_birth bracket contains phi past t=1 (worst excess " + fmt(worst_excess) + ")",
                      worst_excess <= 1e-9);
    }
}

// ---- criterion 7: exact identities ----

void criterion_exact_identities(Checker& ck) {
    for (const auto& name : continuous_reference_names()) {
        auto rates = continuous_reference(name);
        double worst_gamma_identity = 0.0, worst_formula = 0.0;
        for (double t : {1.0, 5.0, 10.0}) {
            worst_gamma_identity = std::max(worst_gamma_identity, bd::gamma_identity_residual(rates, t));
            worst_formula = std::max(worst_formula, bd::survival_bounds(rates, t).formula_residual);
        }
        ck.check_below(name + " gamma-identity residual", worst_gamma_identity, 1e-8);
        ck.check_below(name + " survival-formula residual", worst_formula, 1e-6);
    }
}

// ---- criterion 8: continuous oracle equivalence ----

void criterion_continuous_oracle(Checker& ck) {
    for (const auto& name : continuous_reference_names()) {
        auto rates = continuous_reference(name);
        auto oracle = bd::master_equation_oracle(rates, 10.0, 400);
        double phi_ode = bd::survival_backward(rates, 0.0, 10.0);
        ck.check_below(name + " |phi_ode - phi_master|", std::abs(phi_ode - oracle.survival()), 1e-4);

        // third moments of the growing-mean model carry real mass past 400,
        // so the moment comparison gets a state space that holds it
        auto moment_oracle = bd::master_equation_oracle(rates, 10.0, 1000);
        TimeGrid grid{{0.0, 10.0}};
        auto mcurves = bd::moment_curves(rates, grid, 3);
        double worst = 0.0;
        for (int r = 1; r <= 3; ++r) {
            double a = mcurves.values.back()[r - 1];
            double b = moment_oracle.moment(r);
            worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-30));
        }
        ck.check_below(name + " max rel moment gap (r<=3)", worst, 1e-3);
    }
}

// ---- criterion 9: Monte Carlo consistency against the exact engines ----

void criterion_mc_consistency(Checker& ck, std::uint64_t seed, int threads) {
    const long reps = 100000;
    // discrete models at generations 10 and 100
    for (const auto& name : discrete_reference_names()) {
        auto schedule = discrete_reference(name);
        std::vector<long> cps{10, 100};
        pgf::DiscreteCurveOptions copts;
        copts.phi_checkpoints = cps;
        copts.threads = threads;
        auto curves = pgf::discrete_curves(schedule, 100, copts);

        mc::SimConfig cfg;
        cfg.master_seed = seed + 17;
        cfg.replicates = reps;
        cfg.checkpoints = {10.0, 100.0};
        cfg.threads = threads;
        auto batch = mc::simulate_discrete(schedule, cfg);

        double worst_z = 0.0;
        for (size_t c = 0; c < cps.size(); ++c) {
            double phi = curves.phi[c];
            double sigma = std::sqrt(phi * (1.0 - phi) / static_cast<double>(batch.active_replicates()));
            double z = std::abs(batch.survivor_fraction(static_cast<int>(c)) - phi) / sigma;
            worst_z = std::max(worst_z, z);
        }
        ck.check_below(name + " worst survivor-fraction z", worst_z, 4.0);
    }
    // continuous models at t = 5 and 10, plus the conditioned-mean check
    for (const auto& name : continuous_reference_names()) {
        auto rates = continuous_reference(name);
        mc::SimConfig cfg;
        cfg.master_seed = seed + 29;
        cfg.replicates = reps;
        cfg.checkpoints = {5.0, 10.0};
        cfg.threads = threads;
        auto batch = mc::simulate_continuous(rates, cfg);

        TimeGrid grid{{0.0, 5.0, 10.0}};
        auto mg = bd::mean_and_gamma(rates, grid);

        double worst_z = 0.0, worst_mean_z = 0.0;
        for (int c = 0; c < 2; ++c) {
            double t = cfg.checkpoints[c];
            double phi = bd::survival_backward(rates, 0.0, t);
            double sigma = std::sqrt(phi * (1.0 - phi) / static_cast<double>(batch.active_replicates()));
            worst_z = std::max(worst_z, std::abs(batch.survivor_fraction(c) - phi) / sigma);

            double target_mean = mg.M[c + 1] / phi;
            batch.normalizers[c] = 1.0; // raw survivor populations
            auto survivors = mc::conditioned_scaled_samples(batch, c);
            double mean = 0.0;
            for (double x : survivors) mean += x;
            mean /= static_cast<double>(survivors.size());
            double var = 0.0;
            for (double x : survivors) var += (x - mean) * (x - mean);
            var /= static_cast<double>(survivors.size());
            double mean_sigma = std::sqrt(var / static_cast<double>(survivors.size()));
            worst_mean_z = std::max(worst_mean_z, std::abs(mean - target_mean) / mean_sigma);
        }
        ck.check_below(name + " worst survivor-fraction z", worst_z, 4.0);
        ck.check_below(name + " worst conditioned-mean z", worst_mean_z, 4.0);
    }
}

// ---- criterion 10: sufficient-condition checkers ----

void criterion_trend_checkers(Checker& ck, int threads) {
    {
        auto schedule = discrete_reference("paper_example");
        pgf::DiscreteCurveOptions copts;
        copts.compute_phi = false;
        auto curves = pgf::discrete_curves(schedule, 10000, copts);
        auto report = model::hypothesis_report(schedule, 10000, curves);
        ck.check_true("paper_example mean_to_one holds (tail " +
                          fmt(report.conditions[0].tail_estimate) + ")",
                      report.conditions[0].holds);
        ck.check_true("paper_example H6 diverging",
                      report.entry("H6").verdict == model::Verdict::SatisfiedOnHorizon);
    }
    {
        auto rates = continuous_reference("decaying_drift");
        auto grid = TimeGrid::uniform(100.0, 400);
        auto mg = bd::mean_and_gamma(rates, grid);
        auto report = model::hypothesis_report(rates, grid, mg);
        ck.check_true("decaying_drift mean_jump_to_zero holds (tail " +
                          fmt(report.conditions[0].tail_estimate) + ")",
                      report.conditions[0].holds);
        ck.check_true("decaying_drift H11 diverging",
                      report.entry("H11").verdict == model::Verdict::SatisfiedOnHorizon);
    }
    {
        auto schedule = discrete_reference("subcritical_binary");
        pgf::DiscreteCurveOptions copts;
        copts.compute_phi = false;
        auto curves = pgf::discrete_curves(schedule, 1000, copts);
        auto report = model::hypothesis_report(schedule, 1000, curves);
        ck.check_true("subcritical_binary H6 non-diverging",
                      report.entry("H6").verdict != model::Verdict::SatisfiedOnHorizon);
    }
    (void)threads;
}

struct CoreOutcome {
    std::vector<CriterionResult> results;
    std::string canonical;
};

CoreOutcome run_core(std::uint64_t seed, int threads) {
    CoreOutcome out;

    auto run_one = [&](int id, const std::string& name, double runtime_limit, auto&& fn) {
        Checker ck;
        auto start = Clock::now();
        try {
            fn(ck);
        } catch (const std::exception& e) {
            ck.pass = false;
            ck.note(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(Clock::now() - start).count();
        if (runtime_limit > 0.0 && secs > runtime_limit) {
            ck.pass = false;
            ck.note("runtime limit " + fmt(runtime_limit) + "s exceeded");
        }
        out.results.push_back({id, name, ck.pass, ck.detail.str(), secs});
    };

    run_one(1, "discrete phi*Gamma -> 1 at deep horizons", 30.0,
            [&](Checker& ck) { criterion_phi_gamma(ck, threads); });
    run_one(2, "factorial moment ratios -> r!", 0.0,
            [&](Checker& ck) { criterion_factorial_ratios(ck); });
    run_one(3, "conditioned scaled survivors -> Exp(1)", 60.0,
            [&](Checker& ck) { criterion_exponential_limit(ck, seed, threads); });
    run_one(4, "discrete engine vs enumeration oracle", 0.0,
            [&](Checker& ck) { criterion_discrete_oracle(ck); });
    run_one(5, "linear-critical closed forms", 0.0,
            [&](Checker& ck) { criterion_continuous_closed_forms(ck, threads); });
    run_one(6, "continuous limit ratios and survival bracket", 0.0,
            [&](Checker& ck) { criterion_continuous_limits(ck, threads); });
    run_one(7, "exact identities (gamma identity, survival formula)", 0.0,
            [&](Checker& ck) { criterion_exact_identities(ck); });
    run_one(8, "continuous engine vs master-equation oracle", 0.0,
            [&](Checker& ck) { criterion_continuous_oracle(ck); });
    run_one(9, "Monte Carlo consistency with exact engines", 0.0,
            [&](Checker& ck) { criterion_mc_consistency(ck, seed, threads); });
    run_one(10, "sufficient-condition trend checkers", 0.0,
            [&](Checker& ck) { criterion_trend_checkers(ck, threads); });

    std::ostringstream text;
    for (const auto& r : out.results)
        text << "criterion " << (r.id < 10 ? "0" : "") << r.id << " [" << (r.pass ? "PASS" : "FAIL") << "] "
             << r.name << ": " << r.detail << "\n";
    out.canonical = text.str();
    return out;
}

} // namespace

std::string AcceptanceReport::canonical_text() const {
    std::ostringstream text;
    for (const auto& r : results)
        text << "criterion " << (r.id < 10 ? "0" : "") << r.id << " [" << (r.pass ? "PASS" : "FAIL") << "] "
             << r.name << ": " << r.detail << "\n";
    text << (all_pass ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << "\n";
    return text.str();
}

AcceptanceReport run_acceptance(const AcceptanceOptions& opts) {
    AcceptanceReport report;
    auto first = run_core(opts.seed, opts.threads);
    report.results = first.results;

    CriterionResult det;
    det.id = 11;
    det.name = "determinism of the verify pipeline";
    auto start = Clock::now();
    if (opts.determinism_rerun) {
        auto second = run_core(opts.seed, opts.threads);
        det.pass = second.canonical == first.canonical;
        det.detail = det.pass ? "two seeded runs produced byte-identical reports"
                              : "reports differ between reruns";
    } else {
        det.pass = true;
        det.detail = "rerun skipped by option";
    }
    det.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    report.results.push_back(det);

    report.all_pass = true;
    for (const auto& r : report.results) report.all_pass = report.all_pass && r.pass;
    return report;
}

} // namespace crit::acceptance
