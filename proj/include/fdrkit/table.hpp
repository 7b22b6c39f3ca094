#ifndef FDRKIT_TABLE_HPP
#define FDRKIT_TABLE_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdrkit::table {

/// Error raised on malformed input; message names the offending row and
/// column so the user can fix their file.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Column-oriented delimited table. All cells are kept as strings;
/// numeric access parses on demand. Row order is preserved end to end.
class Table {
public:
    Table() = default;
    Table(std::vector<std::string> columns, char delimiter);

    /// Reads comma- or tab-separated text; the delimiter is auto-detected
    /// from the header line (tab wins when both appear).
    static Table read(std::istream& in, const std::string& source_name = "<input>");
    static Table read_file(const std::string& path);

    const std::vector<std::string>& columns() const { return columns_; }
    char delimiter() const { return delimiter_; }
    std::size_t row_count() const { return rows_.empty() ? 0 : rows_.front().size(); }

    bool has_column(const std::string& name) const;
    std::optional<std::size_t> column_index(const std::string& name) const;

    const std::string& cell(std::size_t row, std::size_t col) const { return rows_[col][row]; }

    /// Parses one column as doubles; a bad cell raises ParseError naming
    /// the 1-based data row.
    std::vector<double> numeric_column(const std::string& name) const;

    /// Appends a column; length must match the current row count.
    void add_column(const std::string& name, std::vector<std::string> cells);
    void add_numeric_column(const std::string& name, const std::vector<double>& values,
                            int precision = 6);
    void add_flag_column(const std::string& name, const std::vector<char>& flags);

    void write(std::ostream& out) const;
    void write_file(const std::string& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;  // per-column cell storage
    char delimiter_ = ',';
    std::string source_ = "<input>";
};

/// Formats a double with the given significant digits; infinities render
/// as "+inf" / "-inf", NaN as "nan".
std::string format_number(double value, int precision = 6);

} // namespace fdrkit::table

#endif
