#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crit/cli.hpp"
#include "crit/curve_table.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string config_path(const std::string& name) {
    return std::string(TEST_CONFIG_DIR) + "/" + name;
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "crit_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// minimal CSV reader for the checks below
struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

Csv read_csv(const fs::path& p) {
    Csv out;
    std::ifstream in(p);
    REQUIRE(in.good());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (out.header.empty()) {
            out.header = cells;
        } else {
            std::vector<double> row;
            for (const auto& c : cells) row.push_back(c == "nan" || c == "-nan" ? NAN : std::stod(c));
            out.rows.push_back(row);
        }
    }
    return out;
}

size_t column_index(const Csv& csv, const std::string& name) {
    for (size_t i = 0; i < csv.header.size(); ++i)
        if (csv.header[i] == name) return i;
    REQUIRE_MESSAGE(false, "no column " << name);
    return 0;
}

} // namespace

TEST_CASE("classify on the bundled paper example") {
    auto out = fresh_dir("classify");
    int rc = crit::cli::run({"classify", "--config", config_path("paper_example.json"), "--out",
                             out.string(), "--no-timestamp"});
    CHECK(rc == 0);
    auto doc = json::parse(slurp(out / "classify.json"));
    CHECK(doc["model"] == "paper_example");
    int satisfied = 0;
    for (const auto& h : doc["hypotheses"])
        if (h["verdict"] == "satisfied-on-horizon") ++satisfied;
    CHECK(satisfied == 7); // H1, H2, H3, H4a, H4b, H5, H6
    CHECK(doc["sufficient_conditions"][0]["id"] == "mean_to_one");
    CHECK(doc["sufficient_conditions"][0]["holds"] == true);
}

TEST_CASE("exact on the bundled linear-critical model hits the closed form") {
    auto out = fresh_dir("exact");
    int rc = crit::cli::run({"exact", "--config", config_path("linear_critical.json"), "--out",
                             out.string(), "--no-timestamp"});
    CHECK(rc == 0);
    auto csv = read_csv(out / "exact.csv");
    auto& last = csv.rows.back();
    CHECK(last[column_index(csv, "t")] == doctest::Approx(10.0));
    CHECK(last[column_index(csv, "phi")] == doctest::Approx(0.090909).epsilon(1e-4));
    CHECK(last[column_index(csv, "Gamma")] == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(last[column_index(csv, "phiGamma")] == doctest::Approx(0.90909).epsilon(1e-4));
    CHECK(last[column_index(csv, "bound_lower")] == doctest::Approx(1.0 / 11.0).epsilon(1e-6));
}

TEST_CASE("missing model block exits with code 2") {
    auto out = fresh_dir("badconfig");
    fs::path cfg = out / "bad.json";
    std::ofstream(cfg) << R"({"horizon": 10})";
    int rc = crit::cli::run({"classify", "--config", cfg.string(), "--out", out.string()});
    CHECK(rc == 2);
}

TEST_CASE("simulate produces deterministic artifacts") {
    auto cfg_dir = fresh_dir("simcfg");
    fs::path cfg = cfg_dir / "sim.json";
    std::ofstream(cfg) << R"({
        "model": {"kind": "discrete", "family": "table", "pmf": [0.5, 0, 0.5], "name": "binary_critical"},
        "horizon": 20,
        "moment_order": 3,
        "mc": {"replicates": 20000, "seed": 7, "checkpoints": [5, 20]}
    })";

    auto out1 = fresh_dir("sim1");
    auto out2 = fresh_dir("sim2");
    CHECK(crit::cli::run({"simulate", "--config", cfg.string(), "--out", out1.string(), "--no-timestamp"}) == 0);
    CHECK(crit::cli::run({"simulate", "--config", cfg.string(), "--out", out2.string(), "--no-timestamp"}) == 0);

    for (const char* name : {"simulate_summary.csv", "simulate_samples.csv", "simulate_stats.json"})
        CHECK(slurp(out1 / name) == slurp(out2 / name));

    // a different seed changes the samples
    auto out3 = fresh_dir("sim3");
    CHECK(crit::cli::run({"simulate", "--config", cfg.string(), "--out", out3.string(), "--no-timestamp",
                          "--seed", "8"}) == 0);
    CHECK(slurp(out1 / "simulate_samples.csv") != slurp(out3 / "simulate_samples.csv"));

    auto csv = read_csv(out1 / "simulate_summary.csv");
    auto zcol = column_index(csv, "fraction_zscore");
    for (const auto& row : csv.rows) CHECK(std::abs(row[zcol]) < 4.0);
    auto kcol = column_index(csv, "ks_distance");
    CHECK(csv.rows.back()[kcol] < 0.2); // n = 20 is far from the limit but not absurdly so
}

TEST_CASE("simulate on a continuous model") {
    auto out = fresh_dir("simcont");
    int rc = crit::cli::run({"simulate", "--config", config_path("linear_critical.json"), "--out",
                             out.string(), "--no-timestamp", "--seed", "11"});
    CHECK(rc == 0);
    auto doc = json::parse(slurp(out / "simulate_stats.json"));
    CHECK(doc["checkpoints"].size() == 2);
    for (const auto& cp : doc["checkpoints"]) {
        CHECK(std::abs(cp["fraction_zscore"].get<double>()) < 4.0);
        double t = cp["checkpoint"].get<double>();
        CHECK(cp["exact_phi"].get<double>() == doctest::Approx(1.0 / (1.0 + t)).epsilon(1e-6));
        CHECK(cp["normalizer"].get<double>() == doctest::Approx(1.0 + t).epsilon(1e-6));
    }
}

TEST_CASE("timestamp header appears unless suppressed") {
    auto out = fresh_dir("stamp");
    CHECK(crit::cli::run({"exact", "--config", config_path("linear_critical.json"), "--out",
                          out.string()}) == 0);
    auto body = slurp(out / "exact.csv");
    CHECK(body.rfind("# generated ", 0) == 0);

    auto out2 = fresh_dir("stamp2");
    CHECK(crit::cli::run({"exact", "--config", config_path("linear_critical.json"), "--out", out2.string(),
                          "--no-timestamp"}) == 0);
    auto body2 = slurp(out2 / "exact.csv");
    CHECK(body2.rfind("t,", 0) == 0);
}
