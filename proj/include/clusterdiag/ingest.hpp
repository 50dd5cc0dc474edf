#pragma once
// CSV ingestion into a validated ClusteredDataset.

#include <filesystem>
#include <string>
#include <vector>

#include "clusterdiag/csv.hpp"
#include "clusterdiag/dataset.hpp"

namespace clusterdiag {

struct IngestSpec {
    std::filesystem::path path;
    char delimiter = ',';
    std::string score_column;
    std::string label_column;
    std::string cluster_column;                // empty: single cluster "all"
    std::string probability_column;            // empty: scores reused when they are in [0,1]
    std::vector<std::string> feature_columns;  // empty: every remaining numeric column
};

struct RejectedRow {
    std::size_t row = 0;  // 1-based data row, header excluded
    std::string reason;
};

struct IngestResult {
    ClusteredDataset dataset;
    std::size_t rows_total = 0;  // data rows in the file
    std::vector<RejectedRow> rejected;
    std::vector<std::string> feature_columns;  // resolved
    bool probabilities_from_scores = false;
    std::string input_digest;  // SHA-256 of the raw file bytes

    std::size_t rows_accepted() const { return rows_total - rejected.size(); }
};

/// Parses and validates the file. Rows with a missing score, label or cluster
/// field are rejected and recorded by row number; rows with malformed values
/// abort with a row-annotated error. Missing feature values become NaN (the
/// row is kept for metrics, skipped per-feature in drift histograms).
IngestResult ingest(const IngestSpec& spec);

}  // namespace clusterdiag
