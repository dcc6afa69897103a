#include "aqtsp/io/report.hpp"

#include "aqtsp/common.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace aqtsp::io {

nlohmann::ordered_json json_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<double> row) {
    if (row.size() != columns_.size()) {
        throw ValidationError("Table: row has " + std::to_string(row.size()) + " cells, expected " +
                              std::to_string(columns_.size()));
    }
    rows_.push_back(std::move(row));
}

std::string Table::to_tsv(const std::vector<std::string>& comments) const {
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "\t" : "") + columns_[i];
    out += "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "\t" : "") + format_double(row[i]);
        out += "\n";
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    out << text;
    if (!out) throw ValidationError("failed writing " + path);
}

} // namespace aqtsp::io
