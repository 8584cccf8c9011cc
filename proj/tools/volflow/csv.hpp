#pragma once

#include <string>
#include <variant>
#include <vector>

namespace volflow::cli {

/// Column-typed CSV table: numbers print with 17 significant digits, rows
/// keep insertion order, lines end in '\n'.
class CsvTable {
public:
    using Cell = std::variant<double, long long, std::string>;

    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    /// Throws std::invalid_argument when the width does not match the header.
    void add_row(std::vector<Cell> row);
    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string>& header() const { return header_; }

    /// comment goes on the first line after "# ".
    std::string render(const std::string& comment) const;
    /// Throws std::runtime_error when the file cannot be written.
    void write(const std::string& path, const std::string& comment) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<Cell>> rows_;
};

}  // namespace volflow::cli
