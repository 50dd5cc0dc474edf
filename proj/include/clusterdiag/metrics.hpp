#pragma once
// Scalar performance metrics over scored binary samples.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "clusterdiag/errors.hpp"

namespace clusterdiag {

using Label = std::uint8_t;  // 0 = negative, 1 = positive

/// Credit rule for a positive-negative pair with equal scores.
enum class TiePolicy {
    HalfCredit,  // tied pair counts 1/2 (midrank convention)
    Strict,      // tied pair counts 0
};

const char* tie_policy_name(TiePolicy policy);

/// Exact integer counts over all positive-negative score pairs.
struct PairCounts {
    std::uint64_t wins = 0;   // positive scored strictly above the negative
    std::uint64_t ties = 0;   // equal scores
    std::uint64_t pairs = 0;  // |P| * |N|
};

/// Counts wins and ties in O(n log n): one sort, then a walk over tie groups.
PairCounts count_score_pairs(std::span<const double> scores, std::span<const Label> labels);

/// Probability that a random positive outranks a random negative.
/// Accepts any finite real scores; only their order matters.
/// Returns nullopt when either class is absent.
std::optional<double> auc(std::span<const double> scores, std::span<const Label> labels,
                          TiePolicy policy = TiePolicy::HalfCredit);

/// Mean squared error of predicted probabilities against binary outcomes.
double brier_score(std::span<const double> probs, std::span<const Label> labels);

struct LogLossResult {
    double value = 0.0;
    std::size_t clamped = 0;  // probabilities pulled inside [eps, 1-eps]
};

/// Negative mean log-likelihood, natural log. Probabilities are clamped to
/// [clamp_eps, 1-clamp_eps] so endpoint predictions stay finite.
LogLossResult log_loss_stats(std::span<const double> probs, std::span<const Label> labels,
                             double clamp_eps = 1e-15);

double log_loss(std::span<const double> probs, std::span<const Label> labels,
                double clamp_eps = 1e-15);

}  // namespace clusterdiag
