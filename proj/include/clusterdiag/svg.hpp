#pragma once
// Self-contained SVG renderings: cluster-pair heatmap, per-cluster bar
// charts with a global reference line, and per-feature drift bars.

#include <optional>
#include <string>
#include <vector>

#include "clusterdiag/decomposition.hpp"
#include "clusterdiag/drift.hpp"

namespace clusterdiag {

/// K x K heatmap on a diverging color scale anchored at 0.5 (below 0.5 reads
/// as misranking, above as correct ranking). Rows are the clusters positives
/// come from, columns the clusters negatives come from. Undefined cells are
/// hatched gray with no numeric annotation; defined cells show 3 decimals.
std::string render_heatmap(const OptionalMatrix& matrix, const Matrix& weights,
                           const std::vector<std::string>& labels);

struct BarItem {
    std::string label;
    std::optional<double> value;  // nullopt renders as an empty slot marker
};

/// Vertical bars sorted by label, with a dashed horizontal reference line at
/// the global value.
std::string render_cluster_bars(std::vector<BarItem> items, const std::string& metric_name,
                                double global_value);

/// Horizontal bars, one per feature, rendered in the given order.
std::string render_psi_bars(const std::vector<FeatureDrift>& features);

}  // namespace clusterdiag
