#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace psam {

// Plot-ready numeric table with a metadata block that echoes everything
// needed to reproduce it.
struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::json metadata = nlohmann::json::object();

    void add_row(std::vector<double> row);
};

// Header row, comma separator, LF line endings, 12 significant digits.
void write_csv(const SweepTable& table, std::ostream& os);

// Single object {metadata, columns, rows}; row values round-trip exactly.
void write_json(const SweepTable& table, std::ostream& os);

// Serializes in the requested format to `path` (write-temp-then-rename), or
// to stdout when the path is empty. Throws IoError on failure.
void emit(const SweepTable& table, const std::string& path, bool as_json);

}  // namespace psam
