#include "volflow/csv.hpp"

#include <fstream>
#include <stdexcept>

#include "volflow/config.hpp"

namespace volflow::cli {

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const CsvTable::Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return quote(std::get<std::string>(c));
}

}  // namespace

void CsvTable::add_row(std::vector<Cell> row) {
    if (row.size() != header_.size()) throw std::invalid_argument("csv row width does not match the header");
    rows_.push_back(std::move(row));
}

std::string CsvTable::render(const std::string& comment) const {
    std::string out = "# ";
    for (char c : comment) out += c == '\n' ? ' ' : c;
    out += '\n';
    for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + quote(header_[i]);
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
        out += '\n';
    }
    return out;
}

void CsvTable::write(const std::string& path, const std::string& comment) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << render(comment);
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace volflow::cli
