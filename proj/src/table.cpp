#include "fdrkit/table.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fdrkit::table {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(field);
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

std::string trimmed(const std::string& s)
{
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

} // namespace

Table::Table(std::vector<std::string> columns, char delimiter)
    : columns_(std::move(columns))
    , rows_(columns_.size())
    , delimiter_(delimiter)
{
}

Table Table::read(std::istream& in, const std::string& source_name)
{
    std::string header;
    if (!std::getline(in, header)) {
        throw ParseError(source_name + ": empty input");
    }
    if (!header.empty() && header.back() == '\r') header.pop_back();
    const char delim = header.find('\t') != std::string::npos ? '\t' : ',';

    Table t;
    t.delimiter_ = delim;
    t.source_ = source_name;
    for (auto& name : split_line(header, delim)) {
        t.columns_.push_back(trimmed(name));
    }
    if (t.columns_.empty()) {
        throw ParseError(source_name + ": header has no columns");
    }
    t.rows_.resize(t.columns_.size());

    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        auto fields = split_line(line, delim);
        if (fields.size() != t.columns_.size()) {
            throw ParseError(source_name + ": row " + std::to_string(row) + " has "
                             + std::to_string(fields.size()) + " fields, expected "
                             + std::to_string(t.columns_.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            t.rows_[c].push_back(trimmed(fields[c]));
        }
    }
    if (row == 0) {
        throw ParseError(source_name + ": no data rows");
    }
    return t;
}

Table Table::read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path + ": cannot open file");
    }
    return read(in, path);
}

bool Table::has_column(const std::string& name) const
{
    return column_index(name).has_value();
}

std::optional<std::size_t> Table::column_index(const std::string& name) const
{
    const auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - columns_.begin());
}

std::vector<double> Table::numeric_column(const std::string& name) const
{
    const auto idx = column_index(name);
    if (!idx) {
        throw ParseError(source_ + ": missing column '" + name + "'");
    }
    const auto& cells = rows_[*idx];
    std::vector<double> out(cells.size());
    for (std::size_t r = 0; r < cells.size(); ++r) {
        const std::string& s = cells[r];
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw ParseError(source_ + ": row " + std::to_string(r + 1) + ", column '" + name
                             + "': not a number: '" + s + "'");
        }
        out[r] = value;
    }
    return out;
}

void Table::add_column(const std::string& name, std::vector<std::string> cells)
{
    if (cells.size() != row_count() && !columns_.empty()) {
        throw std::logic_error("Table::add_column: length mismatch");
    }
    columns_.push_back(name);
    rows_.push_back(std::move(cells));
}

void Table::add_numeric_column(const std::string& name, const std::vector<double>& values,
                               int precision)
{
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v, precision));
    add_column(name, std::move(cells));
}

void Table::add_flag_column(const std::string& name, const std::vector<char>& flags)
{
    std::vector<std::string> cells;
    cells.reserve(flags.size());
    for (char f : flags) cells.emplace_back(f ? "1" : "0");
    add_column(name, std::move(cells));
}

void Table::write(std::ostream& out) const
{
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (c) out << delimiter_;
        out << columns_[c];
    }
    out << '\n';
    for (std::size_t r = 0; r < row_count(); ++r) {
        for (std::size_t c = 0; c < columns_.size(); ++c) {
            if (c) out << delimiter_;
            out << rows_[c][r];
        }
        out << '\n';
    }
}

void Table::write_file(const std::string& path) const
{
    std::ofstream out(path);
    if (!out) {
        throw ParseError(path + ": cannot open file for writing");
    }
    write(out);
}

std::string format_number(double value, int precision)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "+inf" : "-inf";
    std::ostringstream ss;
    ss.precision(precision);
    ss << value;
    return ss.str();
}

} // namespace fdrkit::table
