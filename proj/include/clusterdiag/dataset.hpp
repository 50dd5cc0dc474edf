#pragma once
// Column-oriented view of scored samples partitioned by cluster.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clusterdiag/metrics.hpp"

namespace clusterdiag {

struct ClusterSlice {
    std::string id;
    std::vector<double> scores;
    std::vector<Label> labels;
    std::vector<double> probs;                      // empty when unavailable
    std::vector<std::vector<double>> feature_cols;  // [feature][sample], NaN = missing
    std::size_t pos_count = 0;
    std::size_t neg_count = 0;

    std::size_t size() const { return scores.size(); }
};

/// Disjoint clusters covering all samples, kept in first-appearance order.
/// Every cluster is nonempty by construction.
class ClusteredDataset {
public:
    ClusteredDataset() = default;

    /// Validates and partitions flat sample columns. An empty cluster_ids span
    /// assigns everything to a single cluster named "all"; an empty probs span
    /// means no probabilities are available.
    static ClusteredDataset build(std::span<const double> scores,
                                  std::span<const Label> labels,
                                  std::span<const std::string> cluster_ids,
                                  std::span<const double> probs = {},
                                  std::vector<std::string> feature_names = {},
                                  const std::vector<std::vector<double>>& feature_cols = {});

    const std::vector<ClusterSlice>& clusters() const { return clusters_; }
    const ClusterSlice& cluster(std::size_t k) const { return clusters_[k]; }
    std::size_t cluster_count() const { return clusters_.size(); }

    /// Index of a cluster id in dataset order; throws UnknownCluster.
    std::size_t index_of(std::string_view cluster_id) const;

    const std::vector<std::string>& feature_names() const { return feature_names_; }
    bool has_probs() const { return has_probs_; }
    std::size_t size() const { return size_; }
    std::size_t total_pos() const { return total_pos_; }
    std::size_t total_neg() const { return total_neg_; }

    // Concatenations over clusters in dataset order.
    std::vector<double> pooled_scores() const;
    std::vector<Label> pooled_labels() const;
    std::vector<double> pooled_probs() const;

private:
    std::vector<ClusterSlice> clusters_;
    std::vector<std::string> feature_names_;
    bool has_probs_ = false;
    std::size_t size_ = 0;
    std::size_t total_pos_ = 0;
    std::size_t total_neg_ = 0;
};

}  // namespace clusterdiag
