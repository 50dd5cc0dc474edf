#include "clusterdiag/report.hpp"

#include <fstream>

#include <fmt/format.h>

#include "clusterdiag/csv.hpp"

namespace clusterdiag {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json matrix_json(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : m) {
        rows.push_back(row);
    }
    return rows;
}

ordered_json optional_matrix_json(const OptionalMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : m) {
        ordered_json cells = ordered_json::array();
        for (const auto& cell : row) {
            if (cell) {
                cells.push_back(*cell);
            } else {
                cells.push_back(nullptr);
            }
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

ordered_json additive_json(const AdditiveDecomposition& d) {
    ordered_json per = ordered_json::array();
    for (const ClusterValue& c : d.per_cluster) {
        per.push_back({{"id", c.id}, {"n", c.n}, {"weight", c.weight}, {"value", c.value}});
    }
    ordered_json out{{"global", d.global_value}, {"per_cluster", std::move(per)}};
    if (d.metric == AdditiveMetric::LogLoss) {
        out["clamped_values"] = d.clamped_values;
    }
    return out;
}

std::string matrix_csv(const std::vector<std::string>& clusters, const OptionalMatrix* cells,
                       const Matrix* values) {
    std::string out;
    for (const std::string& id : clusters) {
        out += ',';
        out += csv_escape(id, ',');
    }
    out += '\n';
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        out += csv_escape(clusters[i], ',');
        for (std::size_t j = 0; j < clusters.size(); ++j) {
            out += ',';
            if (values) {
                out += format_double((*values)[i][j]);
            } else if ((*cells)[i][j]) {
                out += format_double(*(*cells)[i][j]);
            }
            // undefined: leave the cell empty
        }
        out += '\n';
    }
    return out;
}

}  // namespace

ordered_json drift_to_json(const DriftReport& report) {
    ordered_json features = ordered_json::array();
    for (const FeatureDrift& f : report.per_feature) {
        features.push_back({{"feature", f.feature}, {"psi", f.psi}, {"js_divergence", f.js}});
    }
    return ordered_json{
        {"focus_cluster", report.focus_cluster},
        {"per_feature", std::move(features)},
        {"label_rate_focus", report.label_rate_focus},
        {"label_rate_rest", report.label_rate_rest},
        {"label_rate_difference", report.label_rate_difference},
        {"skipped_features", report.skipped_features},
    };
}

ordered_json report_to_json(const DiagnosticsReport& report) {
    ordered_json per_cluster = ordered_json::array();
    for (std::size_t k = 0; k < report.auc.cluster_count(); ++k) {
        per_cluster.push_back({{"id", report.auc.clusters[k]},
                               {"positives", report.auc.pos_counts[k]},
                               {"negatives", report.auc.neg_counts[k]},
                               {"n", report.auc.pos_counts[k] + report.auc.neg_counts[k]}});
    }
    ordered_json rejected = ordered_json::array();
    for (const RejectedRow& r : report.rejected) {
        rejected.push_back({{"row", r.row}, {"reason", r.reason}});
    }

    ordered_json doc;
    doc["dataset"] = {
        {"n", report.n},
        {"positives", report.positives},
        {"negatives", report.negatives},
        {"clusters", report.auc.cluster_count()},
        {"per_cluster", std::move(per_cluster)},
        {"rows_total", report.rows_total},
        {"rows_accepted", report.rows_total - report.rejected.size()},
        {"rows_rejected", std::move(rejected)},
    };

    ordered_json auc{
        {"clusters", report.auc.clusters},
        {"weights", matrix_json(report.auc.weights)},
        {"matrix", optional_matrix_json(report.auc.matrix)},
        {"global", report.auc.global_auc},
        {"intra_total", report.auc.intra_total},
        {"inter_total", report.auc.inter_total},
        {"residual", report.auc.residual},
        {"tie_policy", tie_policy_name(report.auc.tie_policy)},
    };
    if (report.non_additivity) {
        auc["naive_within_cluster_avg"] = report.non_additivity->naive_weighted_avg;
        auc["non_additivity_gap"] = report.non_additivity->gap;
    } else {
        auc["naive_within_cluster_avg"] = nullptr;
        auc["non_additivity_gap"] = nullptr;
    }
    doc["auc_decomposition"] = std::move(auc);

    doc["brier"] = report.brier ? additive_json(*report.brier) : ordered_json(nullptr);
    doc["log_loss"] = report.log_loss ? additive_json(*report.log_loss) : ordered_json(nullptr);

    ordered_json worst;
    worst["min_diagonal_auc"] =
        report.worst_auc_cluster ? ordered_json(*report.worst_auc_cluster) : ordered_json(nullptr);
    worst["max_brier"] = report.worst_brier_cluster ? ordered_json(*report.worst_brier_cluster)
                                                    : ordered_json(nullptr);
    worst["max_log_loss"] = report.worst_log_loss_cluster
                                ? ordered_json(*report.worst_log_loss_cluster)
                                : ordered_json(nullptr);
    doc["worst_clusters"] = std::move(worst);

    if (report.drift) {
        doc["drift"] = drift_to_json(*report.drift);
    }

    doc["config"] = report.config;
    doc["input_digest"] = report.input_digest;
    doc["version"] = kVersion;
    return doc;
}

std::string weights_csv(const AucDecomposition& decomp) {
    return matrix_csv(decomp.clusters, nullptr, &decomp.weights);
}

std::string auc_matrix_csv(const AucDecomposition& decomp) {
    return matrix_csv(decomp.clusters, &decomp.matrix, nullptr);
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, fmt::format("cannot open '{}' for writing", path.string()));
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
        throw Error(ErrorCode::IoError, fmt::format("short write to '{}'", path.string()));
    }
}

}  // namespace clusterdiag
