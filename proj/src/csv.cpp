#include "clusterdiag/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace clusterdiag {

namespace {

// One pass over the text; records end at unquoted newlines.
std::vector<std::vector<std::string>> split_records(std::string_view text, char delimiter) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool any_field_content = false;

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        // A lone newline (single empty unquoted field) is a blank line.
        if (fields.size() > 1 || any_field_content || field_was_quoted) {
            records.push_back(std::move(fields));
        }
        fields.clear();
        any_field_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && field.empty() && !field_was_quoted) {
            in_quotes = true;
            field_was_quoted = true;
            any_field_content = true;
        } else if (c == delimiter) {
            end_field();
        } else if (c == '\n') {
            end_record();
        } else if (c == '\r') {
            // swallowed; CRLF and stray CR both terminate via the '\n' case
            if (i + 1 >= text.size() || text[i + 1] != '\n') {
                end_record();
            }
        } else {
            field.push_back(c);
            any_field_content = true;
        }
    }
    if (in_quotes) {
        throw Error(ErrorCode::ParseError, "unterminated quoted field at end of file");
    }
    if (any_field_content || !field.empty() || !fields.empty()) {
        end_record();
    }
    return records;
}

}  // namespace

std::size_t CsvTable::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    return npos;
}

CsvTable parse_csv(std::string_view text, char delimiter) {
    std::vector<std::vector<std::string>> records = split_records(text, delimiter);
    if (records.empty()) {
        throw Error(ErrorCode::ParseError, "missing header row");
    }

    CsvTable table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            throw Error(ErrorCode::ParseError,
                        fmt::format("row {}: expected {} fields, got {}", r,
                                    table.header.size(), records[r].size()));
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::FileNotFound, path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

CsvTable read_csv(const std::filesystem::path& path, char delimiter) {
    return parse_csv(read_file_bytes(path), delimiter);
}

std::string csv_escape(std::string_view field, char delimiter) {
    const bool needs_quotes = field.find_first_of("\"\r\n") != std::string_view::npos ||
                              field.find(delimiter) != std::string_view::npos;
    if (!needs_quotes) {
        return std::string(field);
    }
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_double(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    std::string out(buf, result.ptr);
    if (out.find_first_of(".eEn") == std::string::npos) {
        out += ".0";
    }
    return out;
}

}  // namespace clusterdiag
