#include "crit/curve_table.hpp"

#include <charconv>
#include <ostream>

#include "crit/errors.hpp"

namespace crit {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void CurveTable::add_column(std::string name, std::vector<double> values) {
    if (values.size() != index.size())
        fail(ErrorCode::EngineError, "column '" + name + "' has " + std::to_string(values.size()) +
                                         " rows, index has " + std::to_string(index.size()));
    names.push_back(std::move(name));
    cols.push_back(std::move(values));
}

const std::vector<double>& CurveTable::column(std::string_view name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return cols[i];
    fail(ErrorCode::EngineError, "no column named '" + std::string(name) + "'");
}

bool CurveTable::has_column(std::string_view name) const {
    for (const auto& n : names)
        if (n == name) return true;
    return false;
}

void CurveTable::write_csv(std::ostream& os) const {
    os << index_name;
    for (const auto& n : names) os << ',' << n;
    os << '\n';
    for (size_t r = 0; r < index.size(); ++r) {
        os << format_double(index[r]);
        for (const auto& c : cols) os << ',' << format_double(c[r]);
        os << '\n';
    }
}

} // namespace crit
