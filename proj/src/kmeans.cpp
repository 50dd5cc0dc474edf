#include "clusterdiag/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

namespace clusterdiag {

namespace {

constexpr double kConvergenceTol = 1e-6;

// Platform-stable uniform draw in [0, 1); avoids distribution objects whose
// output sequences differ between standard library implementations.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

std::size_t nearest_centroid(const std::vector<double>& point,
                             const std::vector<std::vector<double>>& centroids) {
    std::size_t best = 0;
    double best_d = sq_dist(point, centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
        const double d = sq_dist(point, centroids[c]);
        if (d < best_d) {  // strict: ties stay with the lowest index
            best_d = d;
            best = c;
        }
    }
    return best;
}

void check_matrix(const std::vector<std::vector<double>>& rows, std::size_t dim) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != dim) {
            throw Error(ErrorCode::DimensionMismatch,
                        fmt::format("row {} has {} features, expected {}", i, rows[i].size(), dim));
        }
        for (double v : rows[i]) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::NonFiniteFeature,
                            fmt::format("row {} has a non-finite feature value", i));
            }
        }
    }
}

std::vector<std::vector<double>> standardize(const KMeansModel& model,
                                             const std::vector<std::vector<double>>& rows) {
    std::vector<std::vector<double>> out(rows.size(),
                                         std::vector<double>(model.kept_columns.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t d = 0; d < model.kept_columns.size(); ++d) {
            out[i][d] = (rows[i][model.kept_columns[d]] - model.means[d]) / model.stddevs[d];
        }
    }
    return out;
}

// Distance-weighted seeding: each new centroid is drawn with probability
// proportional to the squared distance to the nearest one chosen so far.
std::vector<std::vector<double>> seed_centroids(const std::vector<std::vector<double>>& points,
                                                int k, std::mt19937_64& rng) {
    const std::size_t n = points.size();
    std::vector<std::vector<double>> centroids;
    centroids.reserve(static_cast<std::size_t>(k));

    std::size_t first = std::min(static_cast<std::size_t>(uniform01(rng) * double(n)), n - 1);
    centroids.push_back(points[first]);

    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        d2[i] = sq_dist(points[i], centroids[0]);
    }

    while (centroids.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (double d : d2) total += d;
        std::size_t pick = 0;
        if (total > 0.0) {
            const double r = uniform01(rng) * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= r) {
                    pick = i;
                    break;
                }
            }
        } else {
            // All remaining points coincide with a centroid; any choice works.
            pick = centroids.size() % n;
        }
        centroids.push_back(points[pick]);
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], sq_dist(points[i], centroids.back()));
        }
    }
    return centroids;
}

}  // namespace

KMeansModel kmeans_fit(const std::vector<std::vector<double>>& rows,
                       std::vector<std::string> feature_names, int k, int max_iter,
                       std::uint64_t seed) {
    const std::size_t n = rows.size();
    const std::size_t dim = feature_names.size();
    if (k < 1) {
        throw Error(ErrorCode::TooFewSamples, fmt::format("k = {} must be at least 1", k));
    }
    if (n < static_cast<std::size_t>(k)) {
        throw Error(ErrorCode::TooFewSamples,
                    fmt::format("{} samples cannot form {} clusters", n, k));
    }
    if (max_iter < 1) {
        throw Error(ErrorCode::TooFewSamples, fmt::format("max_iter = {} must be at least 1", max_iter));
    }
    if (dim == 0) {
        throw Error(ErrorCode::NoFeatures, "no feature columns");
    }
    check_matrix(rows, dim);

    KMeansModel model;
    model.input_dimension = dim;
    model.seed = seed;

    for (std::size_t d = 0; d < dim; ++d) {
        double mean = 0.0;
        for (const auto& r : rows) mean += r[d];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (const auto& r : rows) {
            const double diff = r[d] - mean;
            var += diff * diff;
        }
        const double sd = std::sqrt(var / static_cast<double>(n));
        if (sd > 0.0) {
            model.kept_columns.push_back(d);
            model.feature_names.push_back(feature_names[d]);
            model.means.push_back(mean);
            model.stddevs.push_back(sd);
        } else {
            model.dropped_features.push_back(feature_names[d]);
        }
    }
    if (model.kept_columns.empty()) {
        throw Error(ErrorCode::DegenerateFeatures, "every feature column is constant");
    }

    const std::vector<std::vector<double>> points = standardize(model, rows);
    std::mt19937_64 rng(seed);
    model.centroids = seed_centroids(points, k, rng);

    std::vector<std::size_t> assignment(n);
    std::vector<std::size_t> counts(static_cast<std::size_t>(k));
    for (int iter = 0; iter < max_iter; ++iter) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            assignment[i] = nearest_centroid(points[i], model.centroids);
            ++counts[assignment[i]];
        }

        // Re-seed empty clusters with the point farthest from its centroid.
        for (std::size_t c = 0; c < counts.size(); ++c) {
            if (counts[c] > 0) continue;
            std::size_t worst = 0;
            double worst_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[assignment[i]] <= 1) continue;  // do not empty another cluster
                const double d = sq_dist(points[i], model.centroids[assignment[i]]);
                if (d > worst_d) {
                    worst_d = d;
                    worst = i;
                }
            }
            --counts[assignment[worst]];
            assignment[worst] = c;
            ++counts[c];
            model.centroids[c] = points[worst];
        }

        std::vector<std::vector<double>> updated(static_cast<std::size_t>(k),
                                                 std::vector<double>(model.kept_columns.size(), 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < updated[assignment[i]].size(); ++d) {
                updated[assignment[i]][d] += points[i][d];
            }
        }
        double movement = 0.0;
        for (std::size_t c = 0; c < updated.size(); ++c) {
            for (double& v : updated[c]) {
                v /= static_cast<double>(counts[c]);
            }
            movement = std::max(movement, std::sqrt(sq_dist(updated[c], model.centroids[c])));
            model.centroids[c] = std::move(updated[c]);
        }

        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            inertia += sq_dist(points[i], model.centroids[assignment[i]]);
        }
        model.inertia_history.push_back(inertia);
        model.iterations_run = iter + 1;
        if (movement < kConvergenceTol) {
            break;
        }
    }

    // Final pass so the reported inertia matches nearest-centroid assignment
    // against the final centroids, exactly what kmeans_assign reproduces.
    double final_inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        final_inertia += sq_dist(points[i], model.centroids[nearest_centroid(points[i], model.centroids)]);
    }
    model.inertia = final_inertia;
    return model;
}

std::vector<int> kmeans_assign(const KMeansModel& model,
                               const std::vector<std::vector<double>>& rows) {
    check_matrix(rows, model.input_dimension);
    const std::vector<std::vector<double>> points = standardize(model, rows);
    std::vector<int> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out[i] = static_cast<int>(nearest_centroid(points[i], model.centroids));
    }
    return out;
}

}  // namespace clusterdiag
