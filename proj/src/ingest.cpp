#include "clusterdiag/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include "clusterdiag/digest.hpp"

namespace clusterdiag {

namespace {

std::optional<double> parse_double(std::string_view text) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto result = std::from_chars(text.data(), end, value);
    if (result.ec != std::errc() || result.ptr != end) {
        return std::nullopt;
    }
    return value;
}

std::optional<Label> parse_label(std::string_view text) {
    if (text == "0" || text == "false" || text == "FALSE" || text == "False") return Label{0};
    if (text == "1" || text == "true" || text == "TRUE" || text == "True") return Label{1};
    return std::nullopt;
}

std::size_t require_column(const CsvTable& table, const std::string& name, const char* role) {
    const std::size_t idx = table.column_index(name);
    if (idx == CsvTable::npos) {
        throw Error(ErrorCode::ParseError,
                    fmt::format("{} column '{}' not found in header", role, name));
    }
    return idx;
}

// A column qualifies as a feature when every non-empty cell parses to a
// finite number and at least one cell is non-empty.
bool is_numeric_column(const CsvTable& table, std::size_t col) {
    bool any = false;
    for (const auto& row : table.rows) {
        const std::string& cell = row[col];
        if (cell.empty()) {
            continue;
        }
        const std::optional<double> v = parse_double(cell);
        if (!v || !std::isfinite(*v)) {
            return false;
        }
        any = true;
    }
    return any;
}

}  // namespace

IngestResult ingest(const IngestSpec& spec) {
    const std::string raw = read_file_bytes(spec.path);
    const CsvTable table = parse_csv(raw, spec.delimiter);

    const std::size_t score_col = require_column(table, spec.score_column, "score");
    const std::size_t label_col = require_column(table, spec.label_column, "label");
    const std::size_t cluster_col = spec.cluster_column.empty()
                                        ? CsvTable::npos
                                        : require_column(table, spec.cluster_column, "cluster");
    const std::size_t prob_col = spec.probability_column.empty()
                                     ? CsvTable::npos
                                     : require_column(table, spec.probability_column, "probability");

    // Resolve feature columns: explicit list, or every remaining numeric column.
    std::vector<std::size_t> feature_idx;
    std::vector<std::string> feature_names;
    if (!spec.feature_columns.empty()) {
        for (const std::string& name : spec.feature_columns) {
            feature_idx.push_back(require_column(table, name, "feature"));
            feature_names.push_back(name);
        }
    } else {
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            if (c == score_col || c == label_col || c == cluster_col || c == prob_col) {
                continue;
            }
            if (is_numeric_column(table, c)) {
                feature_idx.push_back(c);
                feature_names.push_back(table.header[c]);
            }
        }
    }

    std::vector<double> scores;
    std::vector<Label> labels;
    std::vector<std::string> cluster_ids;
    std::vector<double> probs;
    std::vector<std::vector<double>> feature_cols(feature_idx.size());

    IngestResult result;
    result.rows_total = table.rows.size();
    result.input_digest = sha256_hex(raw);
    result.feature_columns = feature_names;

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::size_t row_no = r + 1;  // data rows, 1-based
        const auto& row = table.rows[r];

        if (row[score_col].empty()) {
            result.rejected.push_back({row_no, "missing score"});
            continue;
        }
        if (row[label_col].empty()) {
            result.rejected.push_back({row_no, "missing label"});
            continue;
        }
        if (cluster_col != CsvTable::npos && row[cluster_col].empty()) {
            result.rejected.push_back({row_no, "missing cluster id"});
            continue;
        }
        if (prob_col != CsvTable::npos && row[prob_col].empty()) {
            result.rejected.push_back({row_no, "missing probability"});
            continue;
        }

        const std::optional<double> score = parse_double(row[score_col]);
        if (!score) {
            throw Error(ErrorCode::ParseError,
                        fmt::format("row {}: score '{}' is not a number", row_no, row[score_col]));
        }
        if (!std::isfinite(*score)) {
            throw Error(ErrorCode::NonFiniteScore,
                        fmt::format("row {}: score '{}' is not finite", row_no, row[score_col]));
        }
        const std::optional<Label> label = parse_label(row[label_col]);
        if (!label) {
            throw Error(ErrorCode::LabelOutOfDomain,
                        fmt::format("row {}: label '{}' is not 0/1/true/false", row_no,
                                    row[label_col]));
        }
        double prob = 0.0;
        if (prob_col != CsvTable::npos) {
            const std::optional<double> p = parse_double(row[prob_col]);
            if (!p) {
                throw Error(ErrorCode::ParseError,
                            fmt::format("row {}: probability '{}' is not a number", row_no,
                                        row[prob_col]));
            }
            if (!(*p >= 0.0 && *p <= 1.0)) {
                throw Error(ErrorCode::ProbabilityOutOfRange,
                            fmt::format("row {}: probability {} outside [0,1]", row_no, *p));
            }
            prob = *p;
        }

        scores.push_back(*score);
        labels.push_back(*label);
        if (cluster_col != CsvTable::npos) {
            cluster_ids.push_back(row[cluster_col]);
        }
        if (prob_col != CsvTable::npos) {
            probs.push_back(prob);
        }
        for (std::size_t f = 0; f < feature_idx.size(); ++f) {
            const std::string& cell = row[feature_idx[f]];
            if (cell.empty()) {
                feature_cols[f].push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            const std::optional<double> v = parse_double(cell);
            if (!v || !std::isfinite(*v)) {
                throw Error(ErrorCode::ParseError,
                            fmt::format("row {}: feature '{}' value '{}' is not a finite number",
                                        row_no, feature_names[f], cell));
            }
            feature_cols[f].push_back(*v);
        }
    }

    if (scores.empty()) {
        throw Error(ErrorCode::EmptyAfterFiltering, "no usable rows after validation");
    }

    if (prob_col == CsvTable::npos) {
        const bool scores_are_probs = std::all_of(scores.begin(), scores.end(), [](double s) {
            return s >= 0.0 && s <= 1.0;
        });
        if (scores_are_probs) {
            probs = scores;
            result.probabilities_from_scores = true;
        }
    }

    result.dataset = ClusteredDataset::build(scores, labels, cluster_ids, probs,
                                             std::move(feature_names), feature_cols);
    return result;
}

}  // namespace clusterdiag
