#pragma once
// Seeded k-means for datasets that arrive without cluster assignments.
// Externally supplied cluster columns always take precedence over this.

#include <cstdint>
#include <string>
#include <vector>

#include "clusterdiag/errors.hpp"

namespace clusterdiag {

struct KMeansModel {
    std::vector<std::vector<double>> centroids;  // K x D', standardized space
    std::vector<std::string> feature_names;      // kept columns, input order
    std::vector<std::size_t> kept_columns;       // indices into the input matrix
    std::vector<std::string> dropped_features;   // constant columns removed before fitting
    std::vector<double> means;                   // per kept column
    std::vector<double> stddevs;                 // per kept column, all > 0
    std::size_t input_dimension = 0;
    int iterations_run = 0;
    double inertia = 0.0;                 // within-cluster sum of squared distances
    std::vector<double> inertia_history;  // one entry per Lloyd iteration, non-increasing
    std::uint64_t seed = 0;
};

/// Standardizes features, seeds centroids with distance-weighted sampling and
/// runs Lloyd iterations until centroids move less than 1e-6 or max_iter is
/// reached. Deterministic for a fixed seed. Constant columns are dropped;
/// clusters that empty out are re-seeded with the worst-fit point.
KMeansModel kmeans_fit(const std::vector<std::vector<double>>& rows,
                       std::vector<std::string> feature_names, int k, int max_iter = 100,
                       std::uint64_t seed = 0);

/// Nearest-centroid assignment in the model's standardized space, Euclidean
/// distance, ties to the lowest centroid index.
std::vector<int> kmeans_assign(const KMeansModel& model,
                               const std::vector<std::vector<double>>& rows);

}  // namespace clusterdiag
