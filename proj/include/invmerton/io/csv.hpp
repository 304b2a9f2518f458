#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace invmerton {

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double v);

/// Splits one RFC-4180 record (quoted fields, doubled quotes inside quotes).
std::vector<std::string> split_csv_line(std::string_view line);

/// Writes a header row, then numeric rows. CRLF line endings per RFC 4180.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);

    void row(std::initializer_list<double> values);
    void row(std::span<const double> values);

private:
    std::ofstream out_;
    std::size_t columns_;
};

}  // namespace invmerton
