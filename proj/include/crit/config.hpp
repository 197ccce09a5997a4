#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crit/schedule.hpp"

namespace crit {

struct McConfig {
    long replicates = 10000;
    std::uint64_t seed = 1;
    std::vector<double> checkpoints;
};

struct OutputConfig {
    std::string format = "csv"; // csv | json
    std::string path;           // directory; empty = current directory
};

/// Parsed, schema-validated experiment description.  Exactly one of the model
/// variants is set.  Validation failures throw Error(ConfigInvalid) carrying
/// the JSON pointer of the offending field.
struct ExperimentConfig {
    std::optional<OffspringSchedule> offspring;
    std::optional<RateSchedule> rates;
    double horizon = 0.0;
    int moment_order = 3;
    long grid_points = 0; // continuous output knots; 0 = derived from horizon
    McConfig mc;
    OutputConfig output;
    std::string model_name;

    bool is_discrete() const { return offspring.has_value(); }
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

} // namespace crit
