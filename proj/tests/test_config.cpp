#include <doctest.h>

#include "crit/config.hpp"
#include "crit/errors.hpp"

using namespace crit;

namespace {

void expect_config_error(const std::string& text, const std::string& pointer_fragment) {
    try {
        parse_experiment_config(text);
        CHECK_MESSAGE(false, "expected ConfigInvalid for: " << text);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigInvalid);
        CHECK_MESSAGE(std::string(e.what()).find(pointer_fragment) != std::string::npos,
                      "missing pointer " << pointer_fragment << " in: " << e.what());
    }
}

} // namespace

TEST_CASE("a full discrete config parses") {
    auto cfg = parse_experiment_config(R"({
        "model": {"kind": "discrete", "family": "paper_example"},
        "horizon": 1000,
        "moment_order": 3,
        "mc": {"replicates": 5000, "seed": 42, "checkpoints": [10, 100]},
        "output": {"format": "csv", "path": "out"}
    })");
    CHECK(cfg.is_discrete());
    CHECK(cfg.horizon == 1000.0);
    CHECK(cfg.mc.replicates == 5000);
    CHECK(cfg.mc.seed == 42);
    CHECK(cfg.mc.checkpoints.size() == 2);
    CHECK(cfg.output.path == "out");
    CHECK(cfg.model_name == "paper_example");
}

TEST_CASE("a continuous config with expression rates parses") {
    auto cfg = parse_experiment_config(R"({
        "model": {"kind": "continuous", "max_jump": 2,
                  "rates": {"-1": "1", "1": "0.6", "2": "0.2"}, "name": "two_birth"},
        "horizon": 10
    })");
    CHECK_FALSE(cfg.is_discrete());
    CHECK(cfg.rates->max_jump() == 2);
    CHECK(cfg.model_name == "two_birth");
    CHECK(cfg.mc.checkpoints == std::vector<double>{10.0}); // defaulted to the horizon
}

TEST_CASE("validation failures carry JSON pointers") {
    expect_config_error(R"({"horizon": 10})", "/model");
    expect_config_error(R"({"model": {"kind": "discrete"}, "horizon": 10})", "/model/family");
    expect_config_error(R"({"model": {"kind": "nope"}, "horizon": 10})", "/model/kind");
    expect_config_error(R"({"model": {"kind": "discrete", "family": "paper_example"}})", "/horizon");
    expect_config_error(
        R"({"model": {"kind": "discrete", "family": "paper_example"}, "horizon": 10.5})", "/horizon");
    expect_config_error(
        R"({"model": {"kind": "discrete", "family": "table", "pmf": [0.3, 0.4, 0.4]}, "horizon": 10})",
        "/model");
    expect_config_error(
        R"({"model": {"kind": "continuous", "rates": {"0": "1"}}, "horizon": 10})", "/model/rates/0");
    expect_config_error(
        R"({"model": {"kind": "continuous", "rates": {"1": "2 ** t"}}, "horizon": 10})", "/model/rates/1");
    expect_config_error(R"({"model": {"kind": "discrete", "family": "paper_example"}, "horizon": 100,
                            "mc": {"checkpoints": [10, 5]}})",
                        "/mc/checkpoints");
    expect_config_error("not json at all", "not valid JSON");
}

TEST_CASE("expression model pmf round-trips through the config") {
    auto cfg = parse_experiment_config(R"json({
        "model": {"kind": "discrete", "family": "expression",
                  "exprs": {"0": "1 - 0.5*(n+1)/max(n,1)", "2": "0.5*(n+1)/max(n,1)"}},
        "horizon": 50
    })json");
    CHECK(cfg.offspring->pmf_at(4).p(2) == doctest::Approx(0.625));
}
