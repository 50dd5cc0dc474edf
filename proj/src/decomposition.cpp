#include "clusterdiag/decomposition.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace clusterdiag {

namespace {

void check_both_classes(const ClusteredDataset& ds) {
    if (ds.total_pos() == 0) {
        throw Error(ErrorCode::NoPositives, "dataset has no positive samples, AUC undefined");
    }
    if (ds.total_neg() == 0) {
        throw Error(ErrorCode::NoNegatives, "dataset has no negative samples, AUC undefined");
    }
}

struct ClassScores {
    std::vector<std::vector<double>> pos;  // per cluster, ascending
    std::vector<std::vector<double>> neg;
};

ClassScores sorted_class_scores(const ClusteredDataset& ds) {
    ClassScores out;
    out.pos.resize(ds.cluster_count());
    out.neg.resize(ds.cluster_count());
    for (std::size_t k = 0; k < ds.cluster_count(); ++k) {
        const ClusterSlice& c = ds.cluster(k);
        out.pos[k].reserve(c.pos_count);
        out.neg[k].reserve(c.neg_count);
        for (std::size_t i = 0; i < c.size(); ++i) {
            (c.labels[i] ? out.pos[k] : out.neg[k]).push_back(c.scores[i]);
        }
        std::sort(out.pos[k].begin(), out.pos[k].end());
        std::sort(out.neg[k].begin(), out.neg[k].end());
    }
    return out;
}

// Win/tie counts between two ascending score lists, by merging tie groups.
PairCounts merge_pair_counts(const std::vector<double>& pos, const std::vector<double>& neg) {
    PairCounts c;
    c.pairs = static_cast<std::uint64_t>(pos.size()) * neg.size();
    std::size_t i = 0;
    std::size_t j = 0;
    std::uint64_t negs_below = 0;
    while (i < pos.size() || j < neg.size()) {
        double v;
        if (i < pos.size() && (j >= neg.size() || pos[i] <= neg[j])) {
            v = pos[i];
        } else {
            v = neg[j];
        }
        std::size_t pi = i;
        std::size_t nj = j;
        while (pi < pos.size() && pos[pi] == v) ++pi;
        while (nj < neg.size() && neg[nj] == v) ++nj;
        const std::uint64_t group_pos = pi - i;
        const std::uint64_t group_neg = nj - j;
        c.wins += group_pos * negs_below;
        c.ties += group_pos * group_neg;
        negs_below += group_neg;
        i = pi;
        j = nj;
    }
    return c;
}

double credit(const PairCounts& c, TiePolicy policy) {
    const double denom = static_cast<double>(c.pairs);
    if (policy == TiePolicy::HalfCredit) {
        return (static_cast<double>(c.wins) + 0.5 * static_cast<double>(c.ties)) / denom;
    }
    return static_cast<double>(c.wins) / denom;
}

}  // namespace

Matrix weight_matrix(const ClusteredDataset& ds) {
    check_both_classes(ds);
    const double denom =
        static_cast<double>(ds.total_pos()) * static_cast<double>(ds.total_neg());
    const std::size_t k = ds.cluster_count();
    Matrix w(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            w[i][j] = static_cast<double>(ds.cluster(i).pos_count) *
                      static_cast<double>(ds.cluster(j).neg_count) / denom;
        }
    }
    return w;
}

OptionalMatrix auc_matrix(const ClusteredDataset& ds, TiePolicy policy) {
    check_both_classes(ds);
    const ClassScores scores = sorted_class_scores(ds);
    const std::size_t k = ds.cluster_count();
    OptionalMatrix m(k, std::vector<std::optional<double>>(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (scores.pos[i].empty() || scores.neg[j].empty()) {
                continue;  // no pairs to rank, cell stays undefined
            }
            m[i][j] = credit(merge_pair_counts(scores.pos[i], scores.neg[j]), policy);
        }
    }
    return m;
}

AucDecomposition decompose_auc(const ClusteredDataset& ds, TiePolicy policy) {
    check_both_classes(ds);

    AucDecomposition d;
    d.tie_policy = policy;
    for (const ClusterSlice& c : ds.clusters()) {
        d.clusters.push_back(c.id);
        d.pos_counts.push_back(c.pos_count);
        d.neg_counts.push_back(c.neg_count);
    }
    d.weights = weight_matrix(ds);
    d.matrix = auc_matrix(ds, policy);

    // Pooled route is independent of the matrix so the residual is a genuine
    // cross-check, not a tautology.
    d.global_auc = auc(ds.pooled_scores(), ds.pooled_labels(), policy).value();

    const std::size_t k = ds.cluster_count();
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (!d.matrix[i][j]) {
                continue;
            }
            const double term = d.weights[i][j] * *d.matrix[i][j];
            (i == j ? d.intra_total : d.inter_total) += term;
        }
    }
    d.residual = d.global_auc - d.intra_total - d.inter_total;
    if (!(std::abs(d.residual) < 1e-12)) {
        throw Error(ErrorCode::InternalCheckFailed,
                    fmt::format("decomposition residual {:.6e} exceeds 1e-12", d.residual));
    }
    return d;
}

NonAdditivityCheck demonstrate_non_additivity(const ClusteredDataset& ds, TiePolicy policy) {
    check_both_classes(ds);

    bool any_mixed = false;
    for (const ClusterSlice& c : ds.clusters()) {
        if (c.pos_count > 0 && c.neg_count > 0) {
            any_mixed = true;
            break;
        }
    }
    if (!any_mixed) {
        throw Error(ErrorCode::NoDefinedValue, "no cluster contains both classes");
    }

    const Matrix w = weight_matrix(ds);
    const OptionalMatrix m = auc_matrix(ds, policy);

    NonAdditivityCheck out;
    for (std::size_t k = 0; k < ds.cluster_count(); ++k) {
        if (m[k][k]) {
            out.naive_weighted_avg += w[k][k] * *m[k][k];
        }
    }
    out.global_auc = auc(ds.pooled_scores(), ds.pooled_labels(), policy).value();
    out.gap = out.global_auc - out.naive_weighted_avg;
    return out;
}

const char* additive_metric_name(AdditiveMetric metric) {
    return metric == AdditiveMetric::Brier ? "brier" : "log_loss";
}

AdditiveDecomposition decompose_additive(const ClusteredDataset& ds, AdditiveMetric metric,
                                         double clamp_eps) {
    if (!ds.has_probs()) {
        throw Error(ErrorCode::MissingProbabilities,
                    "probability metrics need a probability column, or scores within [0,1]");
    }

    AdditiveDecomposition out;
    out.metric = metric;
    const double n = static_cast<double>(ds.size());
    for (const ClusterSlice& c : ds.clusters()) {
        ClusterValue v;
        v.id = c.id;
        v.n = c.size();
        v.weight = static_cast<double>(c.size()) / n;
        v.value = metric == AdditiveMetric::Brier ? brier_score(c.probs, c.labels)
                                                  : log_loss(c.probs, c.labels, clamp_eps);
        out.per_cluster.push_back(std::move(v));
    }
    if (metric == AdditiveMetric::Brier) {
        out.global_value = brier_score(ds.pooled_probs(), ds.pooled_labels());
    } else {
        const LogLossResult pooled = log_loss_stats(ds.pooled_probs(), ds.pooled_labels(), clamp_eps);
        out.global_value = pooled.value;
        out.clamped_values = pooled.clamped;
    }
    return out;
}

std::string worst_cluster_by_auc(const AucDecomposition& decomp) {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < decomp.cluster_count(); ++k) {
        const std::optional<double>& v = decomp.diagonal(k);
        if (!v) {
            continue;
        }
        if (!best || *v < *decomp.diagonal(*best)) {
            best = k;
        }
    }
    if (!best) {
        throw Error(ErrorCode::NoDefinedValue, "every diagonal AUC is undefined");
    }
    return decomp.clusters[*best];
}

std::string worst_cluster_by_metric(const AdditiveDecomposition& decomp) {
    if (decomp.per_cluster.empty()) {
        throw Error(ErrorCode::NoDefinedValue, "no per-cluster values");
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < decomp.per_cluster.size(); ++k) {
        if (decomp.per_cluster[k].value > decomp.per_cluster[best].value) {
            best = k;
        }
    }
    return decomp.per_cluster[best].id;
}

}  // namespace clusterdiag
