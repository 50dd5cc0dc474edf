#pragma once
// Distribution-shift statistics contrasting one cluster against the rest.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clusterdiag/dataset.hpp"

namespace clusterdiag {

enum class BinStrategy { Quantile, Uniform };

const char* bin_strategy_name(BinStrategy strategy);

inline constexpr int kDefaultNumBins = 10;
inline constexpr double kDefaultSmoothingEps = 1e-6;

/// Histogram over shared edges. Bin b covers [edges[b], edges[b+1]); the first
/// edge is -inf and the last +inf, so every finite value lands in a bin.
struct BinnedHistogram {
    std::vector<double> edges;           // B+1, strictly ascending
    std::vector<std::int64_t> counts;    // B
    std::vector<double> smoothed_probs;  // B, strictly positive, sums to 1

    std::size_t bin_count() const { return counts.size(); }
    std::int64_t total_count() const;
};

/// Validates edges/counts and applies additive smoothing: eps probability mass
/// is added to every bin before renormalizing, so no bin is ever empty.
BinnedHistogram histogram_from_counts(std::vector<double> edges, std::vector<std::int64_t> counts,
                                      double smoothing_eps = kDefaultSmoothingEps);

/// Shared-edge histograms of two samples of one feature. Edges come from the
/// pooled values (quantiles or a uniform grid); duplicate quantile edges are
/// collapsed, so the effective bin count can drop below num_bins. A constant
/// feature degenerates to single-bin histograms, giving PSI = JS = 0.
/// A value equal to an interior edge falls in the higher bin.
std::pair<BinnedHistogram, BinnedHistogram> bin_feature(std::span<const double> values_a,
                                                        std::span<const double> values_b,
                                                        int num_bins = kDefaultNumBins,
                                                        BinStrategy strategy = BinStrategy::Quantile,
                                                        double smoothing_eps = kDefaultSmoothingEps);

/// One bin per distinct pooled value, split at the midpoints between
/// neighboring values. Meant for low-cardinality integer columns.
std::pair<BinnedHistogram, BinnedHistogram> bin_feature_categorical(
    std::span<const double> values_a, std::span<const double> values_b,
    double smoothing_eps = kDefaultSmoothingEps);

/// True when every value is integral and the distinct count is at most
/// max_cardinality (with max_cardinality >= 1).
bool qualifies_categorical(std::span<const double> values_a, std::span<const double> values_b,
                           int max_cardinality);

/// Population stability index: sum over bins of (p - q) * ln(p / q), on the
/// smoothed masses. Symmetric, nonnegative, 0 for identical inputs.
double psi(const BinnedHistogram& a, const BinnedHistogram& b);

/// Jensen-Shannon divergence against the midpoint mixture, natural log.
/// Bounded by ln 2.
double js_divergence(const BinnedHistogram& a, const BinnedHistogram& b);

struct FeatureDrift {
    std::string feature;
    double psi = 0.0;
    double js = 0.0;
};

struct DriftReport {
    std::string focus_cluster;
    std::vector<FeatureDrift> per_feature;  // dataset feature order
    double label_rate_focus = 0.0;
    double label_rate_rest = 0.0;
    double label_rate_difference = 0.0;
    std::vector<std::string> skipped_features;  // no usable values on one side
};

/// Compares the focus cluster's feature distributions and label rate against
/// the complement of the dataset. Rows with a missing value for a feature are
/// excluded from that feature's histograms only. When categorical_max_card is
/// positive, integer columns with at most that many distinct values get one
/// bin per category instead of quantile/uniform edges.
DriftReport drift_report(const ClusteredDataset& dataset, std::string_view focus_cluster,
                         int num_bins = kDefaultNumBins,
                         BinStrategy strategy = BinStrategy::Quantile,
                         double smoothing_eps = kDefaultSmoothingEps,
                         int categorical_max_card = 0);

}  // namespace clusterdiag
