#include "crit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "crit/acceptance.hpp"
#include "crit/bd_engine.hpp"
#include "crit/config.hpp"
#include "crit/curve_table.hpp"
#include "crit/errors.hpp"
#include "crit/hypotheses.hpp"
#include "crit/montecarlo.hpp"
#include "crit/pgf_engine.hpp"
#include "crit/stats.hpp"

namespace crit::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir; // empty = config output path, else "."
    bool no_timestamp = false;
    int threads = 0;
};

std::string timestamp_line() {
    auto now = std::chrono::system_clock::now();
    auto tt = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    return std::string(buf);
}

void write_text(const fs::path& path, const std::string& body, bool with_timestamp) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::EngineError, "cannot write " + path.string());
    if (with_timestamp) out << "# generated " << timestamp_line() << "\n";
    out << body;
}

void write_csv(const fs::path& path, const CurveTable& table, bool with_timestamp) {
    std::ostringstream body;
    table.write_csv(body);
    write_text(path, body.str(), with_timestamp);
}

void write_json(const fs::path& path, json doc, bool with_timestamp) {
    if (with_timestamp) doc["generated_at"] = timestamp_line();
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::EngineError, "cannot write " + path.string());
    out << doc.dump(2) << "\n";
}

json table_to_json(const CurveTable& table) {
    json cols = json::object();
    cols[table.index_name] = table.index;
    for (size_t c = 0; c < table.names.size(); ++c) cols[table.names[c]] = table.cols[c];
    return {{"index", table.index_name}, {"columns", cols}, {"rows", table.rows()}};
}

/// Writes a curve table as CSV or JSON per the configured format.
void write_table(const fs::path& dir, const std::string& stem, const CurveTable& table,
                 const std::string& format, bool with_timestamp) {
    if (format == "json")
        write_json(dir / (stem + ".json"), table_to_json(table), with_timestamp);
    else
        write_csv(dir / (stem + ".csv"), table, with_timestamp);
}

TimeGrid grid_for(const ExperimentConfig& cfg) {
    long points = cfg.grid_points > 0 ? cfg.grid_points
                                      : std::max<long>(16, static_cast<long>(std::ceil(cfg.horizon * 4.0)));
    return TimeGrid::uniform(cfg.horizon, points);
}

json hypothesis_json(const model::HypothesisReport& report) {
    json entries = json::array();
    for (const auto& e : report.entries)
        entries.push_back({{"id", e.id},
                           {"statistic", e.statistic},
                           {"verdict", model::to_string(e.verdict)},
                           {"note", e.note}});
    json conditions = json::array();
    for (const auto& c : report.conditions)
        conditions.push_back({{"id", c.id}, {"holds", c.holds}, {"tail_estimate", c.tail_estimate}});
    return {{"hypotheses", entries}, {"sufficient_conditions", conditions}};
}

int cmd_classify(const ExperimentConfig& cfg, const CommonOpts& opts) {
    json doc;
    doc["model"] = cfg.model_name;
    doc["horizon"] = cfg.horizon;
    if (cfg.is_discrete()) {
        long N = static_cast<long>(cfg.horizon);
        pgf::DiscreteCurveOptions copts;
        copts.compute_phi = false;
        auto curves = pgf::discrete_curves(*cfg.offspring, N, copts);
        doc.update(hypothesis_json(model::hypothesis_report(*cfg.offspring, N, curves)));
    } else {
        TimeGrid grid = grid_for(cfg);
        auto mg = bd::mean_and_gamma(*cfg.rates, grid);
        doc.update(hypothesis_json(model::hypothesis_report(*cfg.rates, grid, mg)));
    }
    write_json(fs::path(opts.out_dir) / "classify.json", doc, !opts.no_timestamp);
    std::cout << "classify: wrote classify.json\n";
    return 0;
}

CurveTable discrete_exact_table(const ExperimentConfig& cfg, const CommonOpts& opts) {
    long N = static_cast<long>(cfg.horizon);
    int R = std::min(cfg.moment_order, 12);
    pgf::DiscreteCurveOptions copts;
    copts.with_agresti = true;
    copts.threads = opts.threads;
    auto curves = pgf::discrete_curves(*cfg.offspring, N, copts);
    auto fm = pgf::factorial_moment_curve(*cfg.offspring, N, R, curves.checkpoints);

    size_t rows = curves.checkpoints.size();
    CurveTable t;
    t.index_name = "n";
    for (long n : curves.checkpoints) t.index.push_back(static_cast<double>(n));

    std::vector<double> mu(rows), m(rows), log10_m(rows), gamma(rows), m_gamma(rows);
    for (size_t i = 0; i < rows; ++i) {
        long n = curves.checkpoints[i];
        mu[i] = curves.mu[n];
        m[i] = curves.m(n);
        log10_m[i] = curves.log_m[n] / std::numbers::ln10;
        gamma[i] = curves.gamma[n];
        m_gamma[i] = curves.m_gamma[n];
    }
    t.add_column("mu", mu);
    t.add_column("m", m);
    t.add_column("log10_m", log10_m);
    t.add_column("Gamma", gamma);
    t.add_column("mGamma", m_gamma);
    t.add_column("phi", curves.phi);
    t.add_column("phiGamma", curves.phi_gamma);
    t.add_column("agresti_lower", curves.agresti_lower);
    t.add_column("agresti_upper_sharp", curves.agresti_upper_sharp);
    t.add_column("agresti_zero_variant", curves.agresti_zero_variant);

    // factorial-moment columns share the same checkpoints (fm may stop early on overflow)
    for (int r = 1; r <= R; ++r) {
        std::vector<double> value(rows, std::numeric_limits<double>::quiet_NaN());
        std::vector<double> log10v(rows, std::numeric_limits<double>::quiet_NaN());
        for (size_t i = 0; i < fm.n.size(); ++i) {
            value[i] = fm.value(static_cast<int>(i), r);
            log10v[i] = fm.log10_value(static_cast<int>(i), r);
        }
        t.add_column("F" + std::to_string(r), value);
        t.add_column("log10_F" + std::to_string(r), log10v);
        if (r >= 2) {
            std::vector<double> ratio(rows, std::numeric_limits<double>::quiet_NaN());
            for (size_t i = 0; i < fm.n.size(); ++i) ratio[i] = fm.limit_ratio(static_cast<int>(i), r);
            t.add_column("F" + std::to_string(r) + "_ratio", ratio);
        }
    }
    return t;
}

CurveTable continuous_exact_table(const ExperimentConfig& cfg, const CommonOpts& opts) {
    TimeGrid grid = grid_for(cfg);
    int R = std::min(cfg.moment_order, 10);
    if (R < 2) R = 2;
    auto diag = bd::limit_diagnostics_continuous(*cfg.rates, grid, R, {}, opts.threads);

    size_t rows = grid.size();
    std::vector<double> bound_lower(rows), bound_upper(rows), formula_residual(rows);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (long i = 0; i < static_cast<long>(rows); ++i) {
        auto cm = bd::survival_bounds(*cfg.rates, grid.knots[i]);
        bound_lower[i] = cm.second_order_lower;
        bound_upper[i] = cm.second_order_upper;
        formula_residual[i] = cm.formula_residual;
    }

    CurveTable t;
    t.index_name = "t";
    t.index = grid.knots;
    t.add_column("M", diag.M);
    t.add_column("Gamma", diag.Gamma);
    for (int r = 2; r <= R; ++r) {
        std::vector<double> col(rows);
        for (size_t i = 0; i < rows; ++i) col[i] = diag.Mr[i][r - 1];
        t.add_column("M" + std::to_string(r), col);
    }
    t.add_column("phi", diag.phi);
    t.add_column("phiGamma", diag.phi_gamma);
    t.add_column("MGamma", diag.m_gamma);
    for (int r = 2; r <= R; ++r) {
        std::vector<double> col(rows);
        for (size_t i = 0; i < rows; ++i) col[i] = diag.ratios[i][r - 2];
        t.add_column("M" + std::to_string(r) + "_ratio", col);
    }
    t.add_column("EX", diag.ex);
    t.add_column("bound_lower", bound_lower);
    t.add_column("bound_upper", bound_upper);
    t.add_column("formula_residual", formula_residual);
    return t;
}

int cmd_exact(const ExperimentConfig& cfg, const CommonOpts& opts) {
    CurveTable table = cfg.is_discrete() ? discrete_exact_table(cfg, opts) : continuous_exact_table(cfg, opts);
    write_table(fs::path(opts.out_dir), "exact", table, cfg.output.format, !opts.no_timestamp);
    std::cout << "exact: wrote exact." << cfg.output.format << " (" << table.rows() << " rows)\n";
    return 0;
}

int cmd_simulate(const ExperimentConfig& cfg, const CommonOpts& opts) {
    mc::SimConfig sim;
    sim.master_seed = opts.seed.value_or(cfg.mc.seed);
    sim.replicates = cfg.mc.replicates;
    sim.checkpoints = cfg.mc.checkpoints;
    sim.threads = opts.threads;

    mc::SampleBatch batch;
    std::vector<double> exact_phi(sim.checkpoints.size()), exact_mean(sim.checkpoints.size());
    if (cfg.is_discrete()) {
        batch = mc::simulate_discrete(*cfg.offspring, sim);
        std::vector<long> cps;
        for (double c : sim.checkpoints) cps.push_back(static_cast<long>(c));
        pgf::DiscreteCurveOptions copts;
        copts.phi_checkpoints = cps;
        copts.threads = opts.threads;
        auto curves = pgf::discrete_curves(*cfg.offspring, std::max<long>(cps.back(), 1), copts);
        for (size_t i = 0; i < cps.size(); ++i) {
            size_t idx = std::find(curves.checkpoints.begin(), curves.checkpoints.end(), cps[i]) -
                         curves.checkpoints.begin();
            exact_phi[i] = curves.phi[idx];
            exact_mean[i] = curves.m(cps[i]);
            batch.normalizers[i] = exact_mean[i] / exact_phi[i];
        }
    } else {
        batch = mc::simulate_continuous(*cfg.rates, sim);
        TimeGrid grid;
        grid.knots.push_back(0.0);
        for (double c : sim.checkpoints)
            if (c > grid.knots.back()) grid.knots.push_back(c);
        auto mg = bd::mean_and_gamma(*cfg.rates, grid);
        for (size_t i = 0; i < sim.checkpoints.size(); ++i) {
            double t = sim.checkpoints[i];
            exact_phi[i] = t == 0.0 ? 1.0 : bd::survival_backward(*cfg.rates, 0.0, t);
            size_t knot = 0;
            for (size_t k = 0; k < grid.size(); ++k)
                if (grid.knots[k] == t) knot = k;
            exact_mean[i] = mg.M[knot];
            batch.normalizers[i] = exact_mean[i] / exact_phi[i];
        }
    }

    CurveTable summary;
    summary.index_name = "checkpoint";
    summary.index = sim.checkpoints;
    size_t rows = sim.checkpoints.size();
    std::vector<double> survivors(rows), fraction(rows), phi_col(rows), zscore(rows), normalizer(rows),
        ks_d(rows, std::numeric_limits<double>::quiet_NaN()),
        ks_p(rows, std::numeric_limits<double>::quiet_NaN()),
        mean1(rows, std::numeric_limits<double>::quiet_NaN()),
        mean2(rows, std::numeric_limits<double>::quiet_NaN());

    json stats_doc;
    stats_doc["model"] = cfg.model_name;
    stats_doc["replicates"] = sim.replicates;
    stats_doc["seed"] = sim.master_seed;
    stats_doc["excluded_replicates"] = batch.excluded_count;
    json per_cp = json::array();

    CurveTable samples_table;
    samples_table.index_name = "checkpoint";
    std::vector<double> sample_col;

    for (size_t i = 0; i < rows; ++i) {
        survivors[i] = static_cast<double>(batch.survivor_count(static_cast<int>(i)));
        fraction[i] = batch.survivor_fraction(static_cast<int>(i));
        phi_col[i] = exact_phi[i];
        double sigma = std::sqrt(exact_phi[i] * (1.0 - exact_phi[i]) /
                                 static_cast<double>(batch.active_replicates()));
        zscore[i] = sigma > 0.0 ? (fraction[i] - exact_phi[i]) / sigma : 0.0;
        normalizer[i] = batch.normalizers[i];

        json cp;
        cp["checkpoint"] = sim.checkpoints[i];
        cp["survivors"] = survivors[i];
        cp["survivor_fraction"] = fraction[i];
        cp["exact_phi"] = exact_phi[i];
        cp["fraction_zscore"] = zscore[i];
        cp["normalizer"] = normalizer[i];

        if (survivors[i] >= 30) {
            auto scaled = mc::conditioned_scaled_samples(batch, static_cast<int>(i));
            auto ks = stats::ks_vs_exponential(scaled);
            ks_d[i] = ks.ks_distance;
            ks_p[i] = ks.p_value;
            auto moments = stats::empirical_moments_ci(scaled, std::min(cfg.moment_order, 4));
            mean1[i] = moments[0].mean;
            if (moments.size() > 1) mean2[i] = moments[1].mean;
            cp["ks_distance"] = ks.ks_distance;
            cp["ks_p_value"] = ks.p_value;
            json mos = json::array();
            for (const auto& mo : moments)
                mos.push_back({{"r", mo.r}, {"mean", mo.mean}, {"half_width", mo.half_width}});
            cp["scaled_moments"] = mos;
            for (double x : scaled) {
                samples_table.index.push_back(sim.checkpoints[i]);
                sample_col.push_back(x);
            }
        }
        per_cp.push_back(cp);
    }
    stats_doc["checkpoints"] = per_cp;

    summary.add_column("survivors", survivors);
    summary.add_column("survivor_fraction", fraction);
    summary.add_column("exact_phi", phi_col);
    summary.add_column("fraction_zscore", zscore);
    summary.add_column("normalizer", normalizer);
    summary.add_column("ks_distance", ks_d);
    summary.add_column("ks_p_value", ks_p);
    summary.add_column("scaled_mean_r1", mean1);
    summary.add_column("scaled_mean_r2", mean2);

    samples_table.add_column("scaled_value", sample_col);

    fs::path out(opts.out_dir);
    write_table(out, "simulate_summary", summary, cfg.output.format, !opts.no_timestamp);
    write_csv(out / "simulate_samples.csv", samples_table, !opts.no_timestamp);
    write_json(out / "simulate_stats.json", stats_doc, !opts.no_timestamp);
    std::cout << "simulate: wrote simulate_summary." << cfg.output.format
              << ", simulate_samples.csv, simulate_stats.json\n";
    return 0;
}

int cmd_verify(const CommonOpts& opts) {
    acceptance::AcceptanceOptions aopts;
    if (opts.seed) aopts.seed = *opts.seed;
    aopts.threads = opts.threads;
    auto report = acceptance::run_acceptance(aopts);

    std::string text = report.canonical_text();
    write_text(fs::path(opts.out_dir) / "verify_report.txt", text, !opts.no_timestamp);
    std::cout << text;
    for (const auto& r : report.results)
        std::cerr << "criterion " << r.id << " took " << r.seconds << "s\n";
    return report.all_pass ? 0 : 3;
}

} // namespace

int run(std::vector<std::string> args) {
    CLI::App app{"numerical laboratory for time-varying branching and birth-death processes"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::uint64_t seed_value = 0;
    bool seed_set = false;
    std::string format_value;

    auto add_common = [&](CLI::App* cmd, bool config_required) {
        auto* c = cmd->add_option("--config", opts.config_path, "experiment config (JSON)");
        if (config_required) c->required();
        cmd->add_option("--seed", seed_value, "override the Monte Carlo master seed")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--out", opts.out_dir, "output directory (default .)");
        cmd->add_option("--format", format_value, "csv|json override")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_flag("--no-timestamp", opts.no_timestamp, "suppress timestamp header lines");
        cmd->add_option("--threads", opts.threads, "worker threads (0 = all)");
    };

    auto* classify = app.add_subcommand("classify", "hypothesis report for a model");
    add_common(classify, true);
    auto* exact = app.add_subcommand("exact", "exact curves, bounds and limit diagnostics");
    add_common(exact, true);
    auto* simulate = app.add_subcommand("simulate", "seeded Monte Carlo with conditioning and statistics");
    add_common(simulate, true);
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    add_common(verify, false);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (seed_set) opts.seed = seed_value;

        if (verify->parsed()) {
            if (opts.out_dir.empty()) opts.out_dir = ".";
            fs::create_directories(opts.out_dir);
            return cmd_verify(opts);
        }

        ExperimentConfig cfg = load_experiment_config(opts.config_path);
        if (!format_value.empty()) cfg.output.format = format_value;
        if (opts.out_dir.empty()) opts.out_dir = cfg.output.path.empty() ? "." : cfg.output.path;
        fs::create_directories(opts.out_dir);

        if (classify->parsed()) return cmd_classify(cfg, opts);
        if (exact->parsed()) return cmd_exact(cfg, opts);
        if (simulate->parsed()) return cmd_simulate(cfg, opts);
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::ConfigInvalid ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace crit::cli
