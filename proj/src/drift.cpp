#include "clusterdiag/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace clusterdiag {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> finite_only(std::span<const double> values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) {
        if (std::isfinite(v)) {
            out.push_back(v);
        }
    }
    return out;
}

// Nearest-rank empirical quantile over a sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = std::ceil(q * static_cast<double>(sorted.size())) - 1.0;
    const auto idx = static_cast<std::size_t>(std::clamp(pos, 0.0, double(sorted.size() - 1)));
    return sorted[idx];
}

std::vector<double> shared_edges(const std::vector<double>& pooled_sorted, int num_bins,
                                 BinStrategy strategy) {
    std::vector<double> interior;
    const double lo = pooled_sorted.front();
    const double hi = pooled_sorted.back();
    if (lo != hi) {
        interior.reserve(static_cast<std::size_t>(num_bins) - 1);
        for (int b = 1; b < num_bins; ++b) {
            const double frac = static_cast<double>(b) / num_bins;
            interior.push_back(strategy == BinStrategy::Quantile
                                   ? quantile_sorted(pooled_sorted, frac)
                                   : lo + frac * (hi - lo));
        }
        std::sort(interior.begin(), interior.end());
        interior.erase(std::unique(interior.begin(), interior.end()), interior.end());
    }
    // lo == hi: constant feature, collapse to a single bin.

    std::vector<double> edges;
    edges.reserve(interior.size() + 2);
    edges.push_back(-kInf);
    edges.insert(edges.end(), interior.begin(), interior.end());
    edges.push_back(kInf);
    return edges;
}

std::vector<std::int64_t> count_into_bins(std::span<const double> values,
                                          const std::vector<double>& edges) {
    std::vector<std::int64_t> counts(edges.size() - 1, 0);
    for (double v : values) {
        // upper_bound puts a value equal to an interior edge in the higher bin
        const auto it = std::upper_bound(edges.begin(), edges.end(), v);
        auto idx = static_cast<std::size_t>(it - edges.begin()) - 1;
        idx = std::min(idx, counts.size() - 1);
        counts[idx]++;
    }
    return counts;
}

void check_same_edges(const BinnedHistogram& a, const BinnedHistogram& b) {
    if (a.edges != b.edges) {
        throw Error(ErrorCode::EdgeMismatch, "histograms were binned over different edges");
    }
}

// KL terms are nonnegative in exact arithmetic; tiny negative rounding noise
// on near-identical inputs is squashed to zero.
double non_negative(double v) {
    return (v < 0.0 && v > -1e-12) ? 0.0 : v;
}

}  // namespace

const char* bin_strategy_name(BinStrategy strategy) {
    return strategy == BinStrategy::Quantile ? "quantile" : "uniform";
}

std::int64_t BinnedHistogram::total_count() const {
    std::int64_t total = 0;
    for (std::int64_t c : counts) total += c;
    return total;
}

BinnedHistogram histogram_from_counts(std::vector<double> edges, std::vector<std::int64_t> counts,
                                      double smoothing_eps) {
    if (edges.size() < 2 || counts.size() != edges.size() - 1) {
        throw Error(ErrorCode::LengthMismatch,
                    fmt::format("{} edges for {} bins", edges.size(), counts.size()));
    }
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i - 1] < edges[i])) {
            throw Error(ErrorCode::ParseError,
                        fmt::format("edges not strictly ascending at position {}", i));
        }
    }
    for (std::int64_t c : counts) {
        if (c < 0) {
            throw Error(ErrorCode::ParseError, "negative bin count");
        }
    }
    if (!(smoothing_eps > 0.0)) {
        throw Error(ErrorCode::InvalidEpsilon,
                    fmt::format("smoothing epsilon {} must be positive", smoothing_eps));
    }

    BinnedHistogram h;
    h.edges = std::move(edges);
    h.counts = std::move(counts);

    const double total = static_cast<double>(h.total_count());
    h.smoothed_probs.resize(h.counts.size());
    double mass = 0.0;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        const double raw = total > 0.0 ? static_cast<double>(h.counts[b]) / total : 0.0;
        h.smoothed_probs[b] = raw + smoothing_eps;
        mass += h.smoothed_probs[b];
    }
    for (double& p : h.smoothed_probs) {
        p /= mass;
    }
    return h;
}

std::pair<BinnedHistogram, BinnedHistogram> bin_feature(std::span<const double> values_a,
                                                        std::span<const double> values_b,
                                                        int num_bins, BinStrategy strategy,
                                                        double smoothing_eps) {
    if (values_a.empty() || values_b.empty()) {
        throw Error(ErrorCode::EmptyInput, "both samples must be nonempty");
    }
    if (num_bins < 2) {
        throw Error(ErrorCode::TooFewBins, fmt::format("{} bins requested, need at least 2", num_bins));
    }

    std::vector<double> pooled;
    pooled.reserve(values_a.size() + values_b.size());
    pooled.insert(pooled.end(), values_a.begin(), values_a.end());
    pooled.insert(pooled.end(), values_b.begin(), values_b.end());
    for (double v : pooled) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFiniteFeature, "feature value is not finite");
        }
    }
    std::sort(pooled.begin(), pooled.end());

    const std::vector<double> edges = shared_edges(pooled, num_bins, strategy);
    BinnedHistogram ha = histogram_from_counts(edges, count_into_bins(values_a, edges), smoothing_eps);
    BinnedHistogram hb = histogram_from_counts(edges, count_into_bins(values_b, edges), smoothing_eps);
    return {std::move(ha), std::move(hb)};
}

std::pair<BinnedHistogram, BinnedHistogram> bin_feature_categorical(
    std::span<const double> values_a, std::span<const double> values_b, double smoothing_eps) {
    if (values_a.empty() || values_b.empty()) {
        throw Error(ErrorCode::EmptyInput, "both samples must be nonempty");
    }
    std::vector<double> distinct;
    distinct.reserve(values_a.size() + values_b.size());
    distinct.insert(distinct.end(), values_a.begin(), values_a.end());
    distinct.insert(distinct.end(), values_b.begin(), values_b.end());
    for (double v : distinct) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFiniteFeature, "feature value is not finite");
        }
    }
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<double> edges;
    edges.reserve(distinct.size() + 1);
    edges.push_back(-kInf);
    for (std::size_t i = 1; i < distinct.size(); ++i) {
        edges.push_back(0.5 * (distinct[i - 1] + distinct[i]));
    }
    edges.push_back(kInf);

    BinnedHistogram ha = histogram_from_counts(edges, count_into_bins(values_a, edges), smoothing_eps);
    BinnedHistogram hb = histogram_from_counts(edges, count_into_bins(values_b, edges), smoothing_eps);
    return {std::move(ha), std::move(hb)};
}

bool qualifies_categorical(std::span<const double> values_a, std::span<const double> values_b,
                           int max_cardinality) {
    if (max_cardinality < 1) {
        return false;
    }
    std::vector<double> distinct;
    distinct.reserve(values_a.size() + values_b.size());
    for (std::span<const double> side : {values_a, values_b}) {
        for (double v : side) {
            if (!std::isfinite(v) || v != std::floor(v)) {
                return false;
            }
            distinct.push_back(v);
        }
    }
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    return !distinct.empty() && distinct.size() <= static_cast<std::size_t>(max_cardinality);
}

double psi(const BinnedHistogram& a, const BinnedHistogram& b) {
    check_same_edges(a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.smoothed_probs.size(); ++i) {
        const double p = a.smoothed_probs[i];
        const double q = b.smoothed_probs[i];
        sum += (p - q) * std::log(p / q);
    }
    return non_negative(sum);
}

double js_divergence(const BinnedHistogram& a, const BinnedHistogram& b) {
    check_same_edges(a, b);
    double kl_pm = 0.0;
    double kl_qm = 0.0;
    for (std::size_t i = 0; i < a.smoothed_probs.size(); ++i) {
        const double p = a.smoothed_probs[i];
        const double q = b.smoothed_probs[i];
        const double m = 0.5 * (p + q);
        kl_pm += p * std::log(p / m);
        kl_qm += q * std::log(q / m);
    }
    return non_negative(0.5 * kl_pm + 0.5 * kl_qm);
}

DriftReport drift_report(const ClusteredDataset& ds, std::string_view focus_cluster, int num_bins,
                         BinStrategy strategy, double smoothing_eps, int categorical_max_card) {
    const std::size_t focus = ds.index_of(focus_cluster);
    if (ds.cluster_count() < 2) {
        throw Error(ErrorCode::EmptyComplement,
                    "dataset has a single cluster, nothing to compare against");
    }
    if (ds.feature_names().empty()) {
        throw Error(ErrorCode::NoFeatures, "dataset has no feature columns");
    }

    DriftReport report;
    report.focus_cluster = std::string(focus_cluster);

    const ClusterSlice& fc = ds.cluster(focus);
    std::size_t rest_n = 0;
    std::size_t rest_pos = 0;
    for (std::size_t k = 0; k < ds.cluster_count(); ++k) {
        if (k == focus) continue;
        rest_n += ds.cluster(k).size();
        rest_pos += ds.cluster(k).pos_count;
    }
    report.label_rate_focus = static_cast<double>(fc.pos_count) / static_cast<double>(fc.size());
    report.label_rate_rest = static_cast<double>(rest_pos) / static_cast<double>(rest_n);
    report.label_rate_difference = report.label_rate_focus - report.label_rate_rest;

    for (std::size_t f = 0; f < ds.feature_names().size(); ++f) {
        const std::vector<double> focus_vals = finite_only(fc.feature_cols[f]);
        std::vector<double> rest_vals;
        for (std::size_t k = 0; k < ds.cluster_count(); ++k) {
            if (k == focus) continue;
            const std::vector<double> part = finite_only(ds.cluster(k).feature_cols[f]);
            rest_vals.insert(rest_vals.end(), part.begin(), part.end());
        }
        if (focus_vals.empty() || rest_vals.empty()) {
            report.skipped_features.push_back(ds.feature_names()[f]);
            continue;
        }
        const auto [hf, hr] =
            qualifies_categorical(focus_vals, rest_vals, categorical_max_card)
                ? bin_feature_categorical(focus_vals, rest_vals, smoothing_eps)
                : bin_feature(focus_vals, rest_vals, num_bins, strategy, smoothing_eps);
        report.per_feature.push_back(
            {ds.feature_names()[f], psi(hf, hr), js_divergence(hf, hr)});
    }
    return report;
}

}  // namespace clusterdiag
