#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace oatune {

// Minimal comma-separated reader: no quoting, cells trimmed, blank lines and a
// leading UTF-8 BOM skipped.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    bool next(std::vector<std::string>& fields);

    // 1-based physical line number of the last record returned by next().
    std::size_t line() const noexcept { return line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

std::vector<std::string> split_csv_line(std::string_view line);

// Strict: the whole (trimmed) cell must be a finite or infinite decimal number.
bool parse_double(std::string_view text, double& out);

// Shortest representation that round-trips.
std::string format_double(double value);

}  // namespace oatune
