#include "psam/sweep_table.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "psam/errors.hpp"

namespace psam {

void SweepTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) {
        throw std::invalid_argument("SweepTable: row has " + std::to_string(row.size()) +
                                    " values, table declares " + std::to_string(columns.size()) +
                                    " columns");
    }
    rows.push_back(std::move(row));
}

void write_csv(const SweepTable& table, std::ostream& os) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        os << (c ? "," : "") << table.columns[c];
    }
    os << '\n';
    char buf[40];
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.12g", row[c]);
            os << (c ? "," : "") << buf;
        }
        os << '\n';
    }
}

void write_json(const SweepTable& table, std::ostream& os) {
    nlohmann::json doc;
    doc["metadata"] = table.metadata;
    doc["columns"] = table.columns;
    doc["rows"] = table.rows;
    os << doc.dump(2) << '\n';
}

void emit(const SweepTable& table, const std::string& path, bool as_json) {
    const auto serialize = [&](std::ostream& os) {
        as_json ? write_json(table, os) : write_csv(table, os);
    };
    if (path.empty()) {
        serialize(std::cout);
        if (!std::cout) throw IoError("emit: failed writing to stdout");
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("emit: cannot open '" + tmp + "' for writing");
        serialize(os);
        if (!os) throw IoError("emit: failed writing '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("emit: cannot move output into place at '" + path + "'");
    }
}

}  // namespace psam
