#pragma once
// Minimal delimited-text parsing and writing, RFC 4180 style quoting.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "clusterdiag/errors.hpp"

namespace clusterdiag {

struct CsvTable {
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // each row has header.size() fields

    std::size_t column_index(std::string_view name) const;  // npos if absent
};

/// Parses text with a required header row. Every data row must have the same
/// field count as the header; fully empty lines are skipped.
CsvTable parse_csv(std::string_view text, char delimiter = ',');

/// Reads the whole file and parses it. Throws FileNotFound.
CsvTable read_csv(const std::filesystem::path& path, char delimiter = ',');

std::string read_file_bytes(const std::filesystem::path& path);

/// Quotes a field only when it contains the delimiter, a quote or a newline.
std::string csv_escape(std::string_view field, char delimiter);

/// Shortest decimal form that parses back to the identical double, always
/// with a decimal point or exponent so the field reads as a real number.
std::string format_double(double value);

}  // namespace clusterdiag
