#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace aqtsp::io {

/// Finite doubles stay numbers; +-inf and nan become the strings "inf",
/// "-inf" and "nan" so documents remain valid JSON.
nlohmann::ordered_json json_number(double v);

/// Shortest round-trip decimal text for a double (locale independent).
std::string format_double(double v);

/// Tab-separated table with a header line. Every row must have one cell
/// per column.
class Table {
public:
    explicit Table(std::vector<std::string> columns);

    void add_row(std::vector<double> row);
    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string>& columns() const { return columns_; }

    /// Leading '# ' comment lines followed by the header and rows.
    std::string to_tsv(const std::vector<std::string>& comments = {}) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

/// Writes `text` to `path`, creating parent directories. Throws
/// ValidationError when the file cannot be written.
void write_text(const std::string& path, const std::string& text);

} // namespace aqtsp::io
