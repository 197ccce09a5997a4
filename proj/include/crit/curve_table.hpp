#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace crit {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// Indexed numeric series: one index column plus named value columns.
struct CurveTable {
    std::string index_name;
    std::vector<double> index;
    std::vector<std::string> names;
    std::vector<std::vector<double>> cols;

    void add_column(std::string name, std::vector<double> values);
    const std::vector<double>& column(std::string_view name) const;
    bool has_column(std::string_view name) const;
    size_t rows() const { return index.size(); }

    /// Comma separated, '.' decimal point, LF line endings, header row first.
    void write_csv(std::ostream& os) const;
};

} // namespace crit
