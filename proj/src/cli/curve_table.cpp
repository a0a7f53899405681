#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "fbfade/cli.hpp"

namespace fbfade::cli {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CurveTable::add_column(std::string name, std::vector<double> values) {
    columns.emplace_back(std::move(name), std::move(values));
}

std::size_t CurveTable::rows() const {
    if (columns.empty()) return 0;
    const std::size_t n = columns.front().second.size();
    for (const auto& [name, values] : columns)
        if (values.size() != n) throw std::logic_error("column '" + name + "' has a different length");
    return n;
}

void CurveTable::write_csv(std::ostream& os) const {
    const std::size_t n = rows();
    os << "# meta: " << meta.dump() << '\n';
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c].first;
    os << '\n';
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << format_double(columns[c].second[r]);
        os << '\n';
    }
}

void CurveTable::write_json(std::ostream& os) const {
    rows();
    // Values are written by hand so that they keep %.17g and non-finite values stay representable.
    os << "{\"meta\": " << meta.dump() << ", \"columns\": {";
    for (std::size_t c = 0; c < columns.size(); ++c) {
        os << (c ? ", " : "") << nlohmann::json(columns[c].first).dump() << ": [";
        const auto& values = columns[c].second;
        for (std::size_t r = 0; r < values.size(); ++r) {
            const double v = values[r];
            os << (r ? ", " : "") << (std::isfinite(v) ? format_double(v) : "\"" + format_double(v) + "\"");
        }
        os << "]";
    }
    os << "}}\n";
}

}  // namespace fbfade::cli
