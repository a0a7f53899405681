#pragma once

#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

namespace fbfade::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Column-oriented result table. `meta` echoes everything needed to rerun the command.
struct CurveTable {
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    std::vector<std::pair<std::string, std::vector<double>>> columns;

    void add_column(std::string name, std::vector<double> values);
    /// Throws std::logic_error if the columns differ in length.
    std::size_t rows() const;

    /// "# meta: {...}" line, header row, then rows with %.17g values; LF line endings.
    void write_csv(std::ostream& os) const;
    /// {"meta": {...}, "columns": {name: [...]}}
    void write_json(std::ostream& os) const;
};

/// %.17g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double v);

/// Runs the oracle suites ("all", "mgf", "first-order", "second-order", "sep", "monte-carlo").
/// Returns the report; report["pass"] is false if any check failed.
nlohmann::ordered_json run_validation(const std::string& suite, std::uint64_t seed);

/// Entry point. Exit codes: 0 success, 1 validation failure, 2 argument/domain error,
/// 3 numerical or convergence failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fbfade::cli
