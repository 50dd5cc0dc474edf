#include "clusterdiag/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <fmt/format.h>

namespace clusterdiag {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
    if (a != b) {
        throw Error(ErrorCode::LengthMismatch, fmt::format("{} values vs {} labels", a, b));
    }
    if (a == 0) {
        throw Error(ErrorCode::EmptyInput, "no samples");
    }
}

void check_labels(std::span<const Label> labels) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] > 1) {
            throw Error(ErrorCode::LabelOutOfDomain,
                        fmt::format("label at index {} is {}, expected 0 or 1", i, labels[i]));
        }
    }
}

void check_probs(std::span<const double> probs) {
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (!(probs[i] >= 0.0 && probs[i] <= 1.0)) {
            throw Error(ErrorCode::ProbabilityOutOfRange,
                        fmt::format("probability at index {} is {}, expected [0,1]", i, probs[i]));
        }
    }
}

// Compensated accumulation keeps the partition identities tight at 1e-12.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

const char* tie_policy_name(TiePolicy policy) {
    return policy == TiePolicy::HalfCredit ? "half" : "strict";
}

PairCounts count_score_pairs(std::span<const double> scores, std::span<const Label> labels) {
    check_lengths(scores.size(), labels.size());
    check_labels(labels);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) {
            throw Error(ErrorCode::NonFiniteScore,
                        fmt::format("score at index {} is not finite", i));
        }
    }

    const std::size_t n = scores.size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return scores[a] < scores[b]; });

    std::uint64_t n_pos = 0;
    for (Label l : labels) n_pos += l;
    const std::uint64_t n_neg = n - n_pos;

    PairCounts out;
    out.pairs = n_pos * n_neg;

    // Ascending walk over tie groups: every positive in a group strictly beats
    // all negatives from earlier groups and ties the negatives in its own.
    std::uint64_t negs_below = 0;
    std::size_t i = 0;
    while (i < n) {
        const double v = scores[order[i]];
        std::uint64_t group_pos = 0;
        std::uint64_t group_neg = 0;
        std::size_t j = i;
        while (j < n && scores[order[j]] == v) {
            if (labels[order[j]]) {
                ++group_pos;
            } else {
                ++group_neg;
            }
            ++j;
        }
        out.wins += group_pos * negs_below;
        out.ties += group_pos * group_neg;
        negs_below += group_neg;
        i = j;
    }
    return out;
}

std::optional<double> auc(std::span<const double> scores, std::span<const Label> labels,
                          TiePolicy policy) {
    const PairCounts c = count_score_pairs(scores, labels);
    if (c.pairs == 0) {
        return std::nullopt;
    }
    const double denom = static_cast<double>(c.pairs);
    if (policy == TiePolicy::HalfCredit) {
        return (static_cast<double>(c.wins) + 0.5 * static_cast<double>(c.ties)) / denom;
    }
    return static_cast<double>(c.wins) / denom;
}

double brier_score(std::span<const double> probs, std::span<const Label> labels) {
    check_lengths(probs.size(), labels.size());
    check_labels(labels);
    check_probs(probs);

    KahanSum acc;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double d = probs[i] - static_cast<double>(labels[i]);
        acc.add(d * d);
    }
    return acc.sum / static_cast<double>(probs.size());
}

LogLossResult log_loss_stats(std::span<const double> probs, std::span<const Label> labels,
                             double clamp_eps) {
    if (!(clamp_eps > 0.0 && clamp_eps < 0.5)) {
        throw Error(ErrorCode::InvalidEpsilon,
                    fmt::format("clamp epsilon {} outside (0, 0.5)", clamp_eps));
    }
    check_lengths(probs.size(), labels.size());
    check_labels(labels);
    check_probs(probs);

    const double lo = clamp_eps;
    const double hi = 1.0 - clamp_eps;
    LogLossResult out;
    KahanSum acc;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        double p = probs[i];
        if (p < lo) {
            p = lo;
            ++out.clamped;
        } else if (p > hi) {
            p = hi;
            ++out.clamped;
        }
        acc.add(labels[i] ? -std::log(p) : -std::log1p(-p));
    }
    out.value = acc.sum / static_cast<double>(probs.size());
    return out;
}

double log_loss(std::span<const double> probs, std::span<const Label> labels, double clamp_eps) {
    return log_loss_stats(probs, labels, clamp_eps).value;
}

}  // namespace clusterdiag
