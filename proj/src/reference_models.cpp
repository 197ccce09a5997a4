#include "crit/reference_models.hpp"

#include <map>

#include "crit/errors.hpp"

namespace crit {

OffspringSchedule discrete_reference(const std::string& name) {
    OffspringSchedule s = [&] {
        if (name == "paper_example") return OffspringSchedule::paper_example();
        if (name == "binary_critical") return OffspringSchedule::table({0.5, 0.0, 0.5});
        if (name == "subcritical_binary") return OffspringSchedule::table({0.6, 0.0, 0.4});
        if (name == "polynomial_mean_decay") return OffspringSchedule::polynomial_mean(-1.0);
        if (name == "polynomial_mean_sqrt") return OffspringSchedule::polynomial_mean(0.5);
        if (name == "polynomial_mean_linear") return OffspringSchedule::polynomial_mean(1.0);
        fail(ErrorCode::ConfigInvalid, "unknown discrete reference model '" + name + "'");
    }();
    s.set_name(name);
    return s;
}

RateSchedule continuous_reference(const std::string& name) {
    auto build = [&]() -> RateSchedule {
        if (name == "linear_critical") return RateSchedule::constant({{-1, 1.0}, {1, 1.0}});
        if (name == "decaying_drift") {
            std::map<int, Expression> exprs;
            exprs.emplace(-1, Expression::constant(1.0));
            exprs.emplace(1, Expression::parse("1 + 1/(1+t)"));
            return RateSchedule(1, std::move(exprs));
        }
        if (name == "two_birth") return RateSchedule::constant({{-1, 1.0}, {1, 0.6}, {2, 0.2}});
        fail(ErrorCode::ConfigInvalid, "unknown continuous reference model '" + name + "'");
    };
    RateSchedule s = build();
    s.set_name(name);
    return s;
}

const std::vector<std::string>& discrete_reference_names() {
    static const std::vector<std::string> names{"paper_example",         "binary_critical",
                                                "subcritical_binary",    "polynomial_mean_decay",
                                                "polynomial_mean_sqrt",  "polynomial_mean_linear"};
    return names;
}

const std::vector<std::string>& continuous_reference_names() {
    static const std::vector<std::string> names{"linear_critical", "decaying_drift", "two_birth"};
    return names;
}

} // namespace crit
