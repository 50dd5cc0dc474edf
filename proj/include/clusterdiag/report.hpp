#pragma once
// Aggregated diagnostics document and its JSON / CSV serializations.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clusterdiag/decomposition.hpp"
#include "clusterdiag/drift.hpp"
#include "clusterdiag/ingest.hpp"

namespace clusterdiag {

inline constexpr const char* kVersion = "0.1.0";

struct DiagnosticsReport {
    // dataset summary
    std::size_t n = 0;
    std::size_t positives = 0;
    std::size_t negatives = 0;
    std::vector<ClusterValue> cluster_sizes;  // id, n, weight; value unused
    std::size_t rows_total = 0;
    std::vector<RejectedRow> rejected;

    AucDecomposition auc;
    std::optional<NonAdditivityCheck> non_additivity;
    std::optional<AdditiveDecomposition> brier;
    std::optional<AdditiveDecomposition> log_loss;

    std::optional<std::string> worst_auc_cluster;
    std::optional<std::string> worst_brier_cluster;
    std::optional<std::string> worst_log_loss_cluster;

    std::optional<DriftReport> drift;

    nlohmann::ordered_json config;  // every effective setting, defaults included
    std::string input_digest;
};

/// Undefined AUC cells serialize as null; doubles round-trip bit-exactly.
nlohmann::ordered_json report_to_json(const DiagnosticsReport& report);

nlohmann::ordered_json drift_to_json(const DriftReport& report);

/// First row and column carry cluster ids; an undefined cell is empty.
std::string weights_csv(const AucDecomposition& decomp);
std::string auc_matrix_csv(const AucDecomposition& decomp);

/// Binary write so output bytes are identical across platforms and runs.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace clusterdiag
