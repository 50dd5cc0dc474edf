#include "clusterdiag/dataset.hpp"

#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

namespace clusterdiag {

ClusteredDataset ClusteredDataset::build(std::span<const double> scores,
                                         std::span<const Label> labels,
                                         std::span<const std::string> cluster_ids,
                                         std::span<const double> probs,
                                         std::vector<std::string> feature_names,
                                         const std::vector<std::vector<double>>& feature_cols) {
    const std::size_t n = scores.size();
    if (n == 0) {
        throw Error(ErrorCode::EmptyInput, "dataset has no samples");
    }
    if (labels.size() != n) {
        throw Error(ErrorCode::LengthMismatch,
                    fmt::format("{} scores vs {} labels", n, labels.size()));
    }
    if (!cluster_ids.empty() && cluster_ids.size() != n) {
        throw Error(ErrorCode::LengthMismatch,
                    fmt::format("{} scores vs {} cluster ids", n, cluster_ids.size()));
    }
    if (!probs.empty() && probs.size() != n) {
        throw Error(ErrorCode::LengthMismatch,
                    fmt::format("{} scores vs {} probabilities", n, probs.size()));
    }
    if (feature_cols.size() != feature_names.size()) {
        throw Error(ErrorCode::LengthMismatch,
                    fmt::format("{} feature names vs {} feature columns", feature_names.size(),
                                feature_cols.size()));
    }
    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
        if (feature_cols[f].size() != n) {
            throw Error(ErrorCode::LengthMismatch,
                        fmt::format("feature '{}' has {} values for {} samples",
                                    feature_names[f], feature_cols[f].size(), n));
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(scores[i])) {
            throw Error(ErrorCode::NonFiniteScore,
                        fmt::format("score at index {} is not finite", i));
        }
        if (labels[i] > 1) {
            throw Error(ErrorCode::LabelOutOfDomain,
                        fmt::format("label at index {} is {}, expected 0 or 1", i, labels[i]));
        }
        if (!probs.empty() && !(probs[i] >= 0.0 && probs[i] <= 1.0)) {
            throw Error(ErrorCode::ProbabilityOutOfRange,
                        fmt::format("probability at index {} is {}, expected [0,1]", i, probs[i]));
        }
    }

    ClusteredDataset ds;
    ds.size_ = n;
    ds.has_probs_ = !probs.empty();
    ds.feature_names_ = std::move(feature_names);

    std::unordered_map<std::string_view, std::size_t> index;
    static const std::string kSingleCluster = "all";
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& id = cluster_ids.empty() ? kSingleCluster : cluster_ids[i];
        auto [it, inserted] = index.try_emplace(id, ds.clusters_.size());
        if (inserted) {
            ClusterSlice slice;
            slice.id = id;
            slice.feature_cols.resize(ds.feature_names_.size());
            ds.clusters_.push_back(std::move(slice));
        }
        ClusterSlice& slice = ds.clusters_[it->second];
        slice.scores.push_back(scores[i]);
        slice.labels.push_back(labels[i]);
        if (ds.has_probs_) {
            slice.probs.push_back(probs[i]);
        }
        for (std::size_t f = 0; f < feature_cols.size(); ++f) {
            slice.feature_cols[f].push_back(feature_cols[f][i]);
        }
        if (labels[i]) {
            ++slice.pos_count;
            ++ds.total_pos_;
        } else {
            ++slice.neg_count;
            ++ds.total_neg_;
        }
    }
    return ds;
}

std::size_t ClusteredDataset::index_of(std::string_view cluster_id) const {
    for (std::size_t k = 0; k < clusters_.size(); ++k) {
        if (clusters_[k].id == cluster_id) {
            return k;
        }
    }
    throw Error(ErrorCode::UnknownCluster, fmt::format("cluster '{}' not in dataset", cluster_id));
}

std::vector<double> ClusteredDataset::pooled_scores() const {
    std::vector<double> out;
    out.reserve(size_);
    for (const ClusterSlice& c : clusters_) {
        out.insert(out.end(), c.scores.begin(), c.scores.end());
    }
    return out;
}

std::vector<Label> ClusteredDataset::pooled_labels() const {
    std::vector<Label> out;
    out.reserve(size_);
    for (const ClusterSlice& c : clusters_) {
        out.insert(out.end(), c.labels.begin(), c.labels.end());
    }
    return out;
}

std::vector<double> ClusteredDataset::pooled_probs() const {
    std::vector<double> out;
    out.reserve(size_);
    for (const ClusterSlice& c : clusters_) {
        out.insert(out.end(), c.probs.begin(), c.probs.end());
    }
    return out;
}

}  // namespace clusterdiag
