#pragma once
// Test-side oracles and dataset generators. The oracles enumerate pairs or
// pool samples directly and stay independent of the library's rank-sum and
// merge-count implementations they are used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "clusterdiag/dataset.hpp"
#include "clusterdiag/metrics.hpp"

namespace testsupport {

using clusterdiag::ClusteredDataset;
using clusterdiag::Label;
using clusterdiag::TiePolicy;

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
    return std::min(static_cast<std::size_t>(uniform01(rng) * double(n)), n - 1);
}

// O(|P|*|N|) oracle: literal enumeration of positive-negative pairs.
inline std::optional<double> brute_force_auc(std::span<const double> scores,
                                             std::span<const Label> labels, TiePolicy policy) {
    const double tie_credit = policy == TiePolicy::HalfCredit ? 0.5 : 0.0;
    double sum = 0.0;
    std::uint64_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            ++pairs;
            if (scores[i] > scores[j]) {
                sum += 1.0;
            } else if (scores[i] == scores[j]) {
                sum += tie_credit;
            }
        }
    }
    if (pairs == 0) return std::nullopt;
    return sum / static_cast<double>(pairs);
}

// Sum restricted to positives of one sample set against negatives of another.
inline std::optional<double> brute_force_cell_auc(std::span<const double> pos_scores,
                                                  std::span<const double> neg_scores,
                                                  TiePolicy policy) {
    if (pos_scores.empty() || neg_scores.empty()) return std::nullopt;
    const double tie_credit = policy == TiePolicy::HalfCredit ? 0.5 : 0.0;
    double sum = 0.0;
    for (double p : pos_scores) {
        for (double q : neg_scores) {
            if (p > q) {
                sum += 1.0;
            } else if (p == q) {
                sum += tie_credit;
            }
        }
    }
    return sum / (static_cast<double>(pos_scores.size()) * static_cast<double>(neg_scores.size()));
}

struct FlatSamples {
    std::vector<double> scores;
    std::vector<Label> labels;
    std::vector<std::string> cluster_ids;

    ClusteredDataset dataset(bool with_probs = true) const {
        return ClusteredDataset::build(scores, labels, cluster_ids,
                                       with_probs ? std::span<const double>(scores)
                                                  : std::span<const double>());
    }
};

// Two-cluster fixture: cluster c1 holds scores {0.9, 0.8, 0.4} with labels
// {1, 1, 0}; cluster c2 holds {0.6, 0.7, 0.3} with labels {1, 0, 0}. Pooled
// AUC is 8/9; the cell AUCs are {{1, 1}, {1, 0.5}} with weights
// {{2/9, 4/9}, {1/9, 2/9}}.
inline FlatSamples toy_two_cluster() {
    FlatSamples s;
    s.scores = {0.9, 0.8, 0.4, 0.6, 0.7, 0.3};
    s.labels = {1, 1, 0, 1, 0, 0};
    s.cluster_ids = {"C1", "C1", "C1", "C2", "C2", "C2"};
    return s;
}

struct RandomDatasetOptions {
    std::size_t max_n = 500;
    std::size_t max_k = 12;
    double tie_prob = 0.3;          // chance a score comes from a small grid
    bool force_single_sample_cluster = false;
    bool force_single_class_cluster = false;
};

// Random clustered sample with controllable tie mass and degenerate clusters.
// Scores stay in [0, 1] so they double as probabilities. Always has at least
// one positive and one negative overall.
inline FlatSamples random_clustered(std::mt19937_64& rng, const RandomDatasetOptions& opt) {
    FlatSamples s;
    const std::size_t k = 1 + pick(rng, opt.max_k);
    const std::size_t n = std::max<std::size_t>(2, 1 + pick(rng, opt.max_n));

    // Per-cluster positive rates, with some clusters forced single-class.
    std::vector<double> pos_rate(k);
    for (std::size_t c = 0; c < k; ++c) {
        const double roll = uniform01(rng);
        if (roll < 0.12) {
            pos_rate[c] = 0.0;
        } else if (roll < 0.2) {
            pos_rate[c] = 1.0;
        } else {
            pos_rate[c] = 0.05 + 0.9 * uniform01(rng);
        }
    }
    if (opt.force_single_class_cluster) {
        pos_rate[0] = 0.0;
    }

    static constexpr double kGrid[] = {0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = pick(rng, k);
        s.cluster_ids.push_back("c" + std::to_string(c));
        s.labels.push_back(uniform01(rng) < pos_rate[c] ? 1 : 0);
        if (uniform01(rng) < opt.tie_prob) {
            s.scores.push_back(kGrid[pick(rng, std::size(kGrid))]);
        } else {
            s.scores.push_back(uniform01(rng));
        }
    }
    if (opt.force_single_sample_cluster) {
        s.cluster_ids.push_back("solo");
        s.labels.push_back(uniform01(rng) < 0.5 ? 1 : 0);
        s.scores.push_back(uniform01(rng));
    }

    // Guarantee both classes exist globally.
    bool any_pos = false;
    bool any_neg = false;
    for (Label l : s.labels) {
        (l ? any_pos : any_neg) = true;
    }
    if (!any_pos) s.labels[pick(rng, s.labels.size())] = 1;
    if (!any_neg) {
        for (std::size_t i = 0; i < s.labels.size(); ++i) {
            if (s.labels[i]) {
                s.labels[i] = 0;
                break;
            }
        }
    }
    return s;
}

struct SyntheticOptions {
    std::size_t n = 20000;
    std::size_t clusters = 8;
    double positive_rate = 0.02;  // heavily imbalanced
    std::uint64_t seed = 20240815;
};

// Imbalanced multi-cluster sample shaped like a transaction-risk score feed:
// most clusters separate the classes well, one cluster barely separates them,
// and two feature columns shift inside the weak cluster. Pooled ranking looks
// strong while the weak cluster's diagonal AUC sits near chance.
struct SyntheticDataset {
    FlatSamples samples;
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> feature_cols;  // [feature][sample]
    std::string weak_cluster;

    ClusteredDataset dataset() const {
        return ClusteredDataset::build(samples.scores, samples.labels, samples.cluster_ids,
                                       samples.scores, feature_names, feature_cols);
    }
};

inline SyntheticDataset make_synthetic_imbalanced(const SyntheticOptions& opt = {}) {
    std::mt19937_64 rng(opt.seed);
    auto gauss = [&rng](double mean, double sd) {
        // Box-Muller on the stable uniform source.
        const double u1 = std::max(uniform01(rng), 1e-12);
        const double u2 = uniform01(rng);
        return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    };
    auto sigmoid = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };

    SyntheticDataset out;
    out.feature_names = {"velocity", "merchant_risk", "amount"};
    out.feature_cols.resize(out.feature_names.size());
    const std::size_t weak = opt.clusters - 1;
    out.weak_cluster = "c" + std::to_string(weak);

    for (std::size_t i = 0; i < opt.n; ++i) {
        const std::size_t c = pick(rng, opt.clusters);
        const bool positive = uniform01(rng) < opt.positive_rate;
        // Strong clusters: positives score ~2.2 sigma above negatives.
        // Weak cluster: nearly overlapping classes.
        const double lift = c == weak ? 0.15 : 2.2;
        const double z = gauss(positive ? lift : 0.0, 1.0) + 0.2 * double(c % 3);
        out.samples.scores.push_back(sigmoid(z));
        out.samples.labels.push_back(positive ? 1 : 0);
        out.samples.cluster_ids.push_back("c" + std::to_string(c));
        // Feature drift: the weak cluster lives in a shifted regime.
        out.feature_cols[0].push_back(gauss(c == weak ? 6.0 : 0.0, 1.0));
        out.feature_cols[1].push_back(gauss(c == weak ? 1.5 : 0.2, 0.4));
        out.feature_cols[2].push_back(gauss(3.0, 1.0));
    }
    return out;
}

}  // namespace testsupport
