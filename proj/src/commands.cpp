#include "clusterdiag/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <utility>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "clusterdiag/csv.hpp"
#include "clusterdiag/decomposition.hpp"
#include "clusterdiag/digest.hpp"
#include "clusterdiag/drift.hpp"
#include "clusterdiag/ingest.hpp"
#include "clusterdiag/kmeans.hpp"
#include "clusterdiag/report.hpp"
#include "clusterdiag/svg.hpp"

namespace fs = std::filesystem;

namespace clusterdiag {

namespace {

TiePolicy parse_tie_policy(const std::string& name) {
    if (name == "half") return TiePolicy::HalfCredit;
    if (name == "strict") return TiePolicy::Strict;
    throw Error(ErrorCode::ParseError, fmt::format("unknown tie policy '{}'", name));
}

BinStrategy parse_bin_strategy(const std::string& name) {
    if (name == "quantile") return BinStrategy::Quantile;
    if (name == "uniform") return BinStrategy::Uniform;
    throw Error(ErrorCode::ParseError, fmt::format("unknown bin strategy '{}'", name));
}

char parse_delimiter(const std::string& text) {
    if (text.size() != 1) {
        throw Error(ErrorCode::ParseError,
                    fmt::format("delimiter must be a single character, got '{}'", text));
    }
    return text[0];
}

IngestSpec make_ingest_spec(const RunConfig& cfg) {
    IngestSpec spec;
    spec.path = cfg.input;
    spec.delimiter = parse_delimiter(cfg.delimiter);
    spec.score_column = cfg.score_col;
    spec.label_column = cfg.label_col;
    spec.cluster_column = cfg.cluster_col;
    spec.probability_column = cfg.prob_col;
    spec.feature_columns = cfg.features;
    return spec;
}

// Files are written into a staging directory and moved into place only after
// every write succeeded, so a failed run leaves no partial output directory.
class StagedOutput {
public:
    explicit StagedOutput(fs::path target) : target_(std::move(target)) {
        staging_ = target_;
        staging_ += ".staging";
        fs::remove_all(staging_);
        fs::create_directories(staging_);
    }

    ~StagedOutput() {
        if (!committed_) {
            std::error_code ec;
            fs::remove_all(staging_, ec);
        }
    }

    void add(const std::string& name, std::string_view contents) {
        write_file(staging_ / name, contents);
        names_.push_back(name);
    }

    void commit() {
        if (!fs::exists(target_)) {
            fs::create_directories(target_.parent_path().empty() ? "." : target_.parent_path());
            fs::rename(staging_, target_);
        } else {
            for (const std::string& name : names_) {
                fs::rename(staging_ / name, target_ / name);
            }
            fs::remove_all(staging_);
        }
        committed_ = true;
    }

    const std::vector<std::string>& names() const { return names_; }

private:
    fs::path target_;
    fs::path staging_;
    std::vector<std::string> names_;
    bool committed_ = false;
};

nlohmann::ordered_json base_config(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["input"] = cfg.input;
    j["delimiter"] = cfg.delimiter;
    j["score_col"] = cfg.score_col;
    j["label_col"] = cfg.label_col;
    j["cluster_col"] = cfg.cluster_col.empty() ? nlohmann::ordered_json(nullptr)
                                               : nlohmann::ordered_json(cfg.cluster_col);
    j["prob_col"] = cfg.prob_col.empty() ? nlohmann::ordered_json(nullptr)
                                         : nlohmann::ordered_json(cfg.prob_col);
    j["tie_policy"] = cfg.tie_policy;
    j["bins"] = cfg.bins;
    j["bin_strategy"] = cfg.bin_strategy;
    j["clamp_eps"] = cfg.clamp_eps;
    j["smoothing_eps"] = cfg.smoothing_eps;
    j["seed"] = nullptr;  // only the cluster subcommand draws random numbers
    return j;
}

std::vector<BarItem> diagonal_bars(const AucDecomposition& d) {
    std::vector<BarItem> items;
    for (std::size_t k = 0; k < d.cluster_count(); ++k) {
        items.push_back({d.clusters[k], d.diagonal(k)});
    }
    return items;
}

std::vector<BarItem> additive_bars(const AdditiveDecomposition& d) {
    std::vector<BarItem> items;
    for (const ClusterValue& c : d.per_cluster) {
        items.push_back({c.id, c.value});
    }
    return items;
}

int fail(std::ostream& err, const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 1;
}

// Picks the drift focus cluster per the requested criterion.
std::string resolve_focus(const RunConfig& cfg, const ClusteredDataset& ds, TiePolicy policy) {
    if (!cfg.focus_cluster.empty()) {
        ds.index_of(cfg.focus_cluster);  // validate early
        return cfg.focus_cluster;
    }
    if (cfg.criterion == "auc") {
        return worst_cluster_by_auc(decompose_auc(ds, policy));
    }
    const AdditiveMetric metric =
        cfg.criterion == "brier" ? AdditiveMetric::Brier : AdditiveMetric::LogLoss;
    return worst_cluster_by_metric(decompose_additive(ds, metric, cfg.clamp_eps));
}

}  // namespace

int run_decompose(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const TiePolicy policy = parse_tie_policy(cfg.tie_policy);
        IngestResult ing = ingest(make_ingest_spec(cfg));
        const ClusteredDataset& ds = ing.dataset;

        DiagnosticsReport report;
        report.n = ds.size();
        report.positives = ds.total_pos();
        report.negatives = ds.total_neg();
        report.rows_total = ing.rows_total;
        report.rejected = ing.rejected;
        report.input_digest = ing.input_digest;

        report.auc = decompose_auc(ds, policy);

        bool any_mixed = false;
        for (const ClusterSlice& c : ds.clusters()) {
            any_mixed = any_mixed || (c.pos_count > 0 && c.neg_count > 0);
        }
        if (any_mixed) {
            report.non_additivity = demonstrate_non_additivity(ds, policy);
            report.worst_auc_cluster = worst_cluster_by_auc(report.auc);
        }
        if (ds.has_probs()) {
            report.brier = decompose_additive(ds, AdditiveMetric::Brier, cfg.clamp_eps);
            report.log_loss = decompose_additive(ds, AdditiveMetric::LogLoss, cfg.clamp_eps);
            report.worst_brier_cluster = worst_cluster_by_metric(*report.brier);
            report.worst_log_loss_cluster = worst_cluster_by_metric(*report.log_loss);
        }

        auto config = base_config(cfg);
        config["features"] = ing.feature_columns;
        config["probabilities_from_scores"] = ing.probabilities_from_scores;
        report.config = std::move(config);

        StagedOutput staged{fs::path(cfg.output_dir)};
        staged.add("report.json", report_to_json(report).dump(2) + "\n");
        staged.add("weights.csv", weights_csv(report.auc));
        staged.add("auc_matrix.csv", auc_matrix_csv(report.auc));
        staged.add("heatmap.svg",
                   render_heatmap(report.auc.matrix, report.auc.weights, report.auc.clusters));
        staged.add("cluster_auc.svg",
                   render_cluster_bars(diagonal_bars(report.auc), "AUC", report.auc.global_auc));
        if (report.brier) {
            staged.add("cluster_brier.svg",
                       render_cluster_bars(additive_bars(*report.brier), "Brier score",
                                           report.brier->global_value));
        }
        staged.commit();

        fmt::print(out, "input {}\n", cfg.input);
        fmt::print(out, "rows {} accepted {} rejected {}\n", ing.rows_total, ing.rows_accepted(),
                   ing.rejected.size());
        fmt::print(out, "samples {} positives {} negatives {} clusters {}\n", ds.size(),
                   ds.total_pos(), ds.total_neg(), ds.cluster_count());
        fmt::print(out, "tie_policy {}\n", tie_policy_name(policy));
        fmt::print(out, "global_auc {:.6f}\n", report.auc.global_auc);
        fmt::print(out, "intra_auc {:.6f}\n", report.auc.intra_total);
        fmt::print(out, "inter_auc {:.6f}\n", report.auc.inter_total);
        fmt::print(out, "residual {:.6e}\n", report.auc.residual);
        if (report.non_additivity) {
            fmt::print(out, "naive_within_avg {:.6f}\n", report.non_additivity->naive_weighted_avg);
            fmt::print(out, "non_additivity_gap {:.6f}\n", report.non_additivity->gap);
        }
        if (report.brier) {
            fmt::print(out, "global_brier {:.6f}\n", report.brier->global_value);
            fmt::print(out, "global_log_loss {:.6f}\n", report.log_loss->global_value);
        } else {
            fmt::print(out, "global_brier n/a (scores are not probabilities)\n");
            fmt::print(out, "global_log_loss n/a (scores are not probabilities)\n");
        }
        if (report.worst_auc_cluster) {
            fmt::print(out, "worst_auc_cluster {}\n", *report.worst_auc_cluster);
        }
        if (report.worst_brier_cluster) {
            fmt::print(out, "worst_brier_cluster {}\n", *report.worst_brier_cluster);
            fmt::print(out, "worst_log_loss_cluster {}\n", *report.worst_log_loss_cluster);
        }
        for (const std::string& name : staged.names()) {
            fmt::print(out, "wrote {}/{}\n", cfg.output_dir, name);
        }
        return 0;
    } catch (const Error& e) {
        return fail(err, e);
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(err, e);
    }
}

int run_drift(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const TiePolicy policy = parse_tie_policy(cfg.tie_policy);
        const BinStrategy strategy = parse_bin_strategy(cfg.bin_strategy);
        IngestResult ing = ingest(make_ingest_spec(cfg));
        const ClusteredDataset& ds = ing.dataset;

        if (ds.cluster_count() < 2) {
            throw Error(ErrorCode::EmptyComplement,
                        "drift needs at least 2 clusters, the complement is empty");
        }
        const std::string focus = resolve_focus(cfg, ds, policy);
        DriftReport drift = drift_report(ds, focus, cfg.bins, strategy, cfg.smoothing_eps,
                                         cfg.categorical_max_card);
        std::stable_sort(drift.per_feature.begin(), drift.per_feature.end(),
                         [](const FeatureDrift& a, const FeatureDrift& b) { return a.psi > b.psi; });

        nlohmann::ordered_json doc = drift_to_json(drift);
        doc["criterion"] = cfg.focus_cluster.empty() ? cfg.criterion : "explicit";
        doc["config"] = base_config(cfg);
        doc["config"]["features"] = ing.feature_columns;
        doc["config"]["categorical_max_card"] = cfg.categorical_max_card;
        doc["input_digest"] = ing.input_digest;
        doc["version"] = kVersion;

        StagedOutput staged{fs::path(cfg.output_dir)};
        staged.add("drift.json", doc.dump(2) + "\n");
        staged.add("psi_bars.svg", render_psi_bars(drift.per_feature));
        staged.commit();

        fmt::print(out, "input {}\n", cfg.input);
        fmt::print(out, "focus_cluster {}\n", drift.focus_cluster);
        fmt::print(out, "label_rate_focus {:.6f}\n", drift.label_rate_focus);
        fmt::print(out, "label_rate_rest {:.6f}\n", drift.label_rate_rest);
        fmt::print(out, "label_rate_difference {:.6f}\n", drift.label_rate_difference);
        for (const FeatureDrift& f : drift.per_feature) {
            fmt::print(out, "feature {} psi {:.6f} js {:.6f}\n", f.feature, f.psi, f.js);
        }
        for (const std::string& skipped : drift.skipped_features) {
            fmt::print(out, "feature {} skipped (no usable values on one side)\n", skipped);
        }
        for (const std::string& name : staged.names()) {
            fmt::print(out, "wrote {}/{}\n", cfg.output_dir, name);
        }
        return 0;
    } catch (const Error& e) {
        return fail(err, e);
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(err, e);
    }
}

int run_cluster(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const char delim = parse_delimiter(cfg.delimiter);
        const std::string raw = read_file_bytes(cfg.input);
        const CsvTable table = parse_csv(raw, delim);
        if (table.rows.empty()) {
            throw Error(ErrorCode::EmptyAfterFiltering, "no data rows");
        }

        // Resolve feature columns the same way ingest does.
        std::vector<std::size_t> feature_idx;
        std::vector<std::string> feature_names;
        if (!cfg.features.empty()) {
            for (const std::string& name : cfg.features) {
                const std::size_t idx = table.column_index(name);
                if (idx == CsvTable::npos) {
                    throw Error(ErrorCode::ParseError,
                                fmt::format("feature column '{}' not found in header", name));
                }
                feature_idx.push_back(idx);
                feature_names.push_back(name);
            }
        } else {
            for (std::size_t c = 0; c < table.header.size(); ++c) {
                bool numeric = !table.rows.empty();
                for (const auto& row : table.rows) {
                    double v = 0.0;
                    const char* end = row[c].data() + row[c].size();
                    const auto res = std::from_chars(row[c].data(), end, v);
                    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
                        numeric = false;
                        break;
                    }
                }
                if (numeric) {
                    feature_idx.push_back(c);
                    feature_names.push_back(table.header[c]);
                }
            }
        }
        if (feature_idx.empty()) {
            throw Error(ErrorCode::NoFeatures, "no numeric feature columns found");
        }

        std::vector<std::vector<double>> rows(table.rows.size(),
                                              std::vector<double>(feature_idx.size()));
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            for (std::size_t f = 0; f < feature_idx.size(); ++f) {
                const std::string& cell = table.rows[r][feature_idx[f]];
                double v = 0.0;
                const char* end = cell.data() + cell.size();
                const auto res = std::from_chars(cell.data(), end, v);
                if (res.ec != std::errc() || res.ptr != end) {
                    throw Error(ErrorCode::ParseError,
                                fmt::format("row {}: feature '{}' value '{}' is not a number",
                                            r + 1, feature_names[f], cell));
                }
                rows[r][f] = v;
            }
        }

        const KMeansModel model = kmeans_fit(rows, feature_names, cfg.k, cfg.max_iter, cfg.seed);
        const std::vector<int> assignment = kmeans_assign(model, rows);

        const std::string cluster_col = cfg.cluster_col.empty() ? "cluster" : cfg.cluster_col;
        std::string csv_out;
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            if (c > 0) csv_out += delim;
            csv_out += csv_escape(table.header[c], delim);
        }
        csv_out += delim;
        csv_out += csv_escape(cluster_col, delim);
        csv_out += '\n';
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
                if (c > 0) csv_out += delim;
                csv_out += csv_escape(table.rows[r][c], delim);
            }
            csv_out += delim;
            csv_out += fmt::format("{}", assignment[r]);
            csv_out += '\n';
        }

        nlohmann::ordered_json mj;
        mj["k"] = cfg.k;
        mj["seed"] = cfg.seed;
        mj["feature_names"] = model.feature_names;
        mj["dropped_features"] = model.dropped_features;
        mj["standardization"] = {{"means", model.means}, {"stddevs", model.stddevs}};
        mj["centroids"] = model.centroids;
        mj["iterations_run"] = model.iterations_run;
        mj["inertia"] = model.inertia;
        mj["cluster_column"] = cluster_col;
        mj["input_digest"] = sha256_hex(raw);
        mj["version"] = kVersion;

        StagedOutput staged{fs::path(cfg.output_dir)};
        staged.add("clustered.csv", csv_out);
        staged.add("model.json", mj.dump(2) + "\n");
        staged.commit();

        for (const std::string& name : model.dropped_features) {
            fmt::print(err, "warning: feature '{}' is constant and was dropped\n", name);
        }
        fmt::print(out, "input {}\n", cfg.input);
        fmt::print(out, "rows {} features {} k {} seed {}\n", rows.size(),
                   model.feature_names.size(), cfg.k, cfg.seed);
        fmt::print(out, "iterations {}\n", model.iterations_run);
        fmt::print(out, "inertia {:.6f}\n", model.inertia);
        for (const std::string& name : staged.names()) {
            fmt::print(out, "wrote {}/{}\n", cfg.output_dir, name);
        }
        return 0;
    } catch (const Error& e) {
        return fail(err, e);
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(err, e);
    }
}

}  // namespace clusterdiag
