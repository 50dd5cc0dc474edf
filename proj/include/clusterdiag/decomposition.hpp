#pragma once
// Exact cluster-pair decomposition of ranking performance, plus additive
// per-cluster decompositions of probability error metrics.
//
// The pooled AUC equals the sum over all cluster pairs (i, j) of
//     w[i][j] * auc[i][j]
// where w[i][j] is the fraction of positive-negative pairs with the positive
// drawn from cluster i and the negative from cluster j. Diagonal cells measure
// within-cluster ranking, off-diagonal cells cross-cluster score consistency.

#include <optional>
#include <string>
#include <vector>

#include "clusterdiag/dataset.hpp"
#include "clusterdiag/metrics.hpp"

namespace clusterdiag {

using Matrix = std::vector<std::vector<double>>;
using OptionalMatrix = std::vector<std::vector<std::optional<double>>>;

/// w[i][j] = |P_i|*|N_j| / (|P|*|N|). Entries are nonnegative and sum to 1;
/// a cell whose conditional AUC is undefined has weight exactly 0.
Matrix weight_matrix(const ClusteredDataset& dataset);

/// Cell (i, j): AUC of cluster i's positives against cluster j's negatives.
/// nullopt when either side is empty; never NaN, never imputed.
OptionalMatrix auc_matrix(const ClusteredDataset& dataset, TiePolicy policy);

struct AucDecomposition {
    std::vector<std::string> clusters;
    std::vector<std::size_t> pos_counts;
    std::vector<std::size_t> neg_counts;
    Matrix weights;
    OptionalMatrix matrix;
    double global_auc = 0.0;   // computed on the pooled data, not from the matrix
    double intra_total = 0.0;  // sum of w[k][k] * auc[k][k] over defined diagonal cells
    double inter_total = 0.0;  // same over defined off-diagonal cells
    double residual = 0.0;     // global_auc - intra_total - inter_total
    TiePolicy tie_policy = TiePolicy::HalfCredit;

    std::size_t cluster_count() const { return clusters.size(); }
    const std::optional<double>& diagonal(std::size_t k) const { return matrix[k][k]; }
};

/// Builds the full decomposition. The residual is asserted below 1e-12; a
/// violation indicates an internal defect, not bad input.
AucDecomposition decompose_auc(const ClusteredDataset& dataset, TiePolicy policy);

/// Within-cluster weighted average that ignores cross-cluster pairs. Its
/// weights do not sum to 1 in general, so the gap to the pooled AUC can be
/// large even when every cluster ranks perfectly.
struct NonAdditivityCheck {
    double naive_weighted_avg = 0.0;
    double global_auc = 0.0;
    double gap = 0.0;  // global_auc - naive_weighted_avg
};

NonAdditivityCheck demonstrate_non_additivity(const ClusteredDataset& dataset, TiePolicy policy);

enum class AdditiveMetric { Brier, LogLoss };

const char* additive_metric_name(AdditiveMetric metric);

struct ClusterValue {
    std::string id;
    std::size_t n = 0;
    double weight = 0.0;  // n_k / n
    double value = 0.0;
};

struct AdditiveDecomposition {
    AdditiveMetric metric = AdditiveMetric::Brier;
    std::vector<ClusterValue> per_cluster;
    double global_value = 0.0;       // computed on the pooled samples
    std::size_t clamped_values = 0;  // log loss only
};

/// Per-cluster Brier score or log loss with n_k/n weights. The weighted sum
/// reproduces the pooled global value; that identity is definitional for a
/// mean over a partition and is verified by the test suites.
AdditiveDecomposition decompose_additive(const ClusteredDataset& dataset, AdditiveMetric metric,
                                         double clamp_eps = 1e-15);

/// Cluster with the smallest defined diagonal AUC; ties go to dataset order.
/// Throws NoDefinedValue when every diagonal cell is undefined.
std::string worst_cluster_by_auc(const AucDecomposition& decomp);

/// Cluster with the largest per-cluster metric value; ties go to dataset order.
std::string worst_cluster_by_metric(const AdditiveDecomposition& decomp);

}  // namespace clusterdiag
