#include "crit/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "crit/errors.hpp"
#include "crit/reference_models.hpp"

namespace crit {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& pointer, const std::string& what) {
    fail(ErrorCode::ConfigInvalid, pointer + ": " + what);
}

const json& need(const json& obj, const std::string& pointer, const char* key) {
    if (!obj.is_object()) bad(pointer, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) bad(pointer + "/" + key, "missing required field");
    return *it;
}

double need_number(const json& obj, const std::string& pointer, const char* key) {
    const json& v = need(obj, pointer, key);
    if (!v.is_number()) bad(pointer + "/" + key, "expected a number");
    return v.get<double>();
}

std::string need_string(const json& obj, const std::string& pointer, const char* key) {
    const json& v = need(obj, pointer, key);
    if (!v.is_string()) bad(pointer + "/" + key, "expected a string");
    return v.get<std::string>();
}

OffspringSchedule parse_discrete_model(const json& model) {
    std::string family = need_string(model, "/model", "family");
    int max_support = kDefaultMaxSupport;
    if (model.contains("max_support")) {
        if (!model["max_support"].is_number_integer()) bad("/model/max_support", "expected an integer");
        max_support = model["max_support"].get<int>();
    }
    try {
        if (family == "paper_example") return OffspringSchedule::paper_example();
        if (family == "table") {
            const json& pmf = need(model, "/model", "pmf");
            if (!pmf.is_array() || pmf.empty()) bad("/model/pmf", "expected a non-empty array");
            std::vector<double> probs;
            for (const auto& x : pmf) {
                if (!x.is_number()) bad("/model/pmf", "expected numbers");
                probs.push_back(x.get<double>());
            }
            return OffspringSchedule::table(std::move(probs), max_support);
        }
        if (family == "constant") {
            double v = need_number(model, "/model", "value");
            return OffspringSchedule::constant(static_cast<int>(v));
        }
        if (family == "polynomial_mean") {
            double alpha = need_number(model, "/model", "alpha");
            return OffspringSchedule::polynomial_mean(alpha);
        }
        if (family == "expression") {
            const json& exprs = need(model, "/model", "exprs");
            if (!exprs.is_object() || exprs.empty()) bad("/model/exprs", "expected a non-empty object");
            std::vector<std::pair<int, Expression>> entries;
            for (auto it = exprs.begin(); it != exprs.end(); ++it) {
                int k = 0;
                try {
                    k = std::stoi(it.key());
                } catch (...) {
                    bad("/model/exprs", "keys must be offspring counts, got '" + it.key() + "'");
                }
                if (!it.value().is_string()) bad("/model/exprs/" + it.key(), "expected an expression string");
                entries.emplace_back(k, Expression::parse(it.value().get<std::string>()));
            }
            return OffspringSchedule::expression(std::move(entries), max_support);
        }
        if (family == "reference") {
            return discrete_reference(need_string(model, "/model", "name"));
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigInvalid) throw;
        bad("/model", e.what());
    }
    bad("/model/family", "unknown family '" + family + "'");
}

RateSchedule parse_continuous_model(const json& model) {
    if (model.contains("name") && !model.contains("rates")) {
        return continuous_reference(need_string(model, "/model", "name"));
    }
    const json& rates = need(model, "/model", "rates");
    if (!rates.is_object() || rates.empty()) bad("/model/rates", "expected a non-empty object");
    int max_jump = 1;
    if (model.contains("max_jump")) {
        if (!model["max_jump"].is_number_integer()) bad("/model/max_jump", "expected an integer");
        max_jump = model["max_jump"].get<int>();
    } else {
        for (auto it = rates.begin(); it != rates.end(); ++it) {
            try {
                max_jump = std::max(max_jump, std::stoi(it.key()));
            } catch (...) {
            }
        }
    }
    std::map<int, Expression> exprs;
    for (auto it = rates.begin(); it != rates.end(); ++it) {
        int k = 0;
        try {
            k = std::stoi(it.key());
        } catch (...) {
            bad("/model/rates", "keys must be jump sizes, got '" + it.key() + "'");
        }
        if (k == 0 || k < -1 || k > max_jump)
            bad("/model/rates/" + it.key(), "jump size outside {-1, 1.." + std::to_string(max_jump) + "}");
        if (!it.value().is_string()) bad("/model/rates/" + it.key(), "expected an expression string");
        try {
            exprs.emplace(k, Expression::parse(it.value().get<std::string>()));
        } catch (const Error& e) {
            bad("/model/rates/" + it.key(), e.what());
        }
    }
    try {
        return RateSchedule(max_jump, std::move(exprs));
    } catch (const Error& e) {
        bad("/model", e.what());
    }
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::ConfigInvalid, std::string("/: not valid JSON (") + e.what() + ")");
    }
    if (!doc.is_object()) bad("/", "expected a JSON object");

    ExperimentConfig cfg;
    const json& model = need(doc, "", "model");
    std::string kind = need_string(model, "/model", "kind");
    if (kind == "discrete") {
        cfg.offspring = parse_discrete_model(model);
        cfg.model_name = cfg.offspring->name();
    } else if (kind == "continuous") {
        cfg.rates = parse_continuous_model(model);
        cfg.model_name = cfg.rates->name();
    } else {
        bad("/model/kind", "expected 'discrete' or 'continuous'");
    }
    if (model.contains("name") && model["name"].is_string()) cfg.model_name = model["name"].get<std::string>();

    cfg.horizon = need_number(doc, "", "horizon");
    if (!(cfg.horizon > 0)) bad("/horizon", "must be > 0");
    if (cfg.is_discrete() && cfg.horizon != std::floor(cfg.horizon))
        bad("/horizon", "discrete horizon must be an integer");

    if (doc.contains("moment_order")) {
        if (!doc["moment_order"].is_number_integer()) bad("/moment_order", "expected an integer");
        cfg.moment_order = doc["moment_order"].get<int>();
        if (cfg.moment_order < 1 || cfg.moment_order > 10) bad("/moment_order", "must lie in [1, 10]");
    }
    if (doc.contains("grid_points")) {
        if (!doc["grid_points"].is_number_integer()) bad("/grid_points", "expected an integer");
        cfg.grid_points = doc["grid_points"].get<long>();
        if (cfg.grid_points < 2) bad("/grid_points", "must be >= 2");
    }

    if (doc.contains("mc")) {
        const json& mc = doc["mc"];
        if (!mc.is_object()) bad("/mc", "expected an object");
        if (mc.contains("replicates")) {
            if (!mc["replicates"].is_number_integer()) bad("/mc/replicates", "expected an integer");
            cfg.mc.replicates = mc["replicates"].get<long>();
            if (cfg.mc.replicates < 1) bad("/mc/replicates", "must be >= 1");
        }
        if (mc.contains("seed")) {
            if (!mc["seed"].is_number_unsigned() && !mc["seed"].is_number_integer())
                bad("/mc/seed", "expected an unsigned integer");
            cfg.mc.seed = mc["seed"].get<std::uint64_t>();
        }
        if (mc.contains("checkpoints")) {
            if (!mc["checkpoints"].is_array()) bad("/mc/checkpoints", "expected an array");
            for (const auto& x : mc["checkpoints"]) {
                if (!x.is_number()) bad("/mc/checkpoints", "expected numbers");
                cfg.mc.checkpoints.push_back(x.get<double>());
            }
            for (size_t i = 1; i < cfg.mc.checkpoints.size(); ++i)
                if (cfg.mc.checkpoints[i] < cfg.mc.checkpoints[i - 1])
                    bad("/mc/checkpoints", "must be sorted ascending");
        }
    }
    if (cfg.mc.checkpoints.empty()) cfg.mc.checkpoints.push_back(cfg.horizon);

    if (doc.contains("output")) {
        const json& output = doc["output"];
        if (!output.is_object()) bad("/output", "expected an object");
        if (output.contains("format")) {
            if (!output["format"].is_string()) bad("/output/format", "expected a string");
            cfg.output.format = output["format"].get<std::string>();
            if (cfg.output.format != "csv" && cfg.output.format != "json")
                bad("/output/format", "expected 'csv' or 'json'");
        }
        if (output.contains("path")) {
            if (!output["path"].is_string()) bad("/output/path", "expected a string");
            cfg.output.path = output["path"].get<std::string>();
        }
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ConfigInvalid, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str());
}

} // namespace crit
