#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "clusterdiag/decomposition.hpp"
#include "support.hpp"

using namespace clusterdiag;
using testsupport::toy_two_cluster;

TEST_CASE("toy fixture: weights, cell AUCs, totals and residual") {
    const ClusteredDataset ds = toy_two_cluster().dataset();
    const AucDecomposition d = decompose_auc(ds, TiePolicy::HalfCredit);

    REQUIRE(d.cluster_count() == 2);
    CHECK(d.clusters[0] == "C1");
    CHECK(d.clusters[1] == "C2");

    CHECK(std::abs(d.weights[0][0] - 2.0 / 9.0) < 1e-12);
    CHECK(std::abs(d.weights[0][1] - 4.0 / 9.0) < 1e-12);
    CHECK(std::abs(d.weights[1][0] - 1.0 / 9.0) < 1e-12);
    CHECK(std::abs(d.weights[1][1] - 2.0 / 9.0) < 1e-12);

    CHECK(*d.matrix[0][0] == 1.0);
    CHECK(*d.matrix[0][1] == 1.0);
    CHECK(*d.matrix[1][0] == 1.0);
    CHECK(*d.matrix[1][1] == 0.5);

    CHECK(std::abs(d.global_auc - 8.0 / 9.0) < 1e-12);
    CHECK(std::abs(d.intra_total - 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(d.inter_total - 5.0 / 9.0) < 1e-12);
    CHECK(std::abs(d.residual) < 1e-12);
}

TEST_CASE("weight matrix sums to 1 and a classless side zeroes its line") {
    // cluster "b" has no positives: row b of the weights must be all zero
    const std::vector<double> scores{0.9, 0.1, 0.8, 0.2};
    const std::vector<Label> labels{1, 0, 0, 0};
    const std::vector<std::string> ids{"a", "a", "b", "b"};
    const ClusteredDataset ds = ClusteredDataset::build(scores, labels, ids);

    const Matrix w = weight_matrix(ds);
    CHECK(w[1][0] == 0.0);
    CHECK(w[1][1] == 0.0);
    double total = 0.0;
    for (const auto& row : w) {
        for (double v : row) total += v;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);

    const OptionalMatrix m = auc_matrix(ds, TiePolicy::HalfCredit);
    CHECK_FALSE(m[1][0].has_value());
    CHECK_FALSE(m[1][1].has_value());
    CHECK(m[0][0].has_value());
}

TEST_CASE("single-cluster dataset: weight 1, intra equals global") {
    const std::vector<double> scores{0.9, 0.1, 0.7, 0.4};
    const std::vector<Label> labels{1, 0, 1, 0};
    const ClusteredDataset ds = ClusteredDataset::build(scores, labels, {});

    CHECK(weight_matrix(ds) == Matrix{{1.0}});
    const AucDecomposition d = decompose_auc(ds, TiePolicy::HalfCredit);
    CHECK(d.intra_total == d.global_auc);
    CHECK(d.inter_total == 0.0);
}

TEST_CASE("matrix cells match pair enumeration restricted to (P_i, N_j)") {
    std::mt19937_64 rng(101);
    testsupport::RandomDatasetOptions opt;
    opt.max_n = 60;
    opt.max_k = 3;
    opt.tie_prob = 0.5;
    for (int trial = 0; trial < 50; ++trial) {
        const testsupport::FlatSamples flat = testsupport::random_clustered(rng, opt);
        const ClusteredDataset ds = flat.dataset();
        if (ds.total_pos() == 0 || ds.total_neg() == 0) continue;

        for (TiePolicy policy : {TiePolicy::HalfCredit, TiePolicy::Strict}) {
            const OptionalMatrix m = auc_matrix(ds, policy);
            for (std::size_t i = 0; i < ds.cluster_count(); ++i) {
                for (std::size_t j = 0; j < ds.cluster_count(); ++j) {
                    std::vector<double> pos;
                    std::vector<double> neg;
                    for (std::size_t a = 0; a < ds.cluster(i).size(); ++a) {
                        if (ds.cluster(i).labels[a]) pos.push_back(ds.cluster(i).scores[a]);
                    }
                    for (std::size_t b = 0; b < ds.cluster(j).size(); ++b) {
                        if (!ds.cluster(j).labels[b]) neg.push_back(ds.cluster(j).scores[b]);
                    }
                    const auto oracle = testsupport::brute_force_cell_auc(pos, neg, policy);
                    REQUIRE(m[i][j].has_value() == oracle.has_value());
                    if (oracle) {
                        CHECK(std::abs(*m[i][j] - *oracle) < 1e-12);
                    }
                }
            }
        }
    }
}

TEST_CASE("decomposition identity holds on random clustered data") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        testsupport::RandomDatasetOptions opt;
        opt.tie_prob = (trial % 3 == 0) ? 0.0 : (trial % 3 == 1 ? 0.3 : 0.9);
        opt.force_single_sample_cluster = trial % 2 == 0;
        opt.force_single_class_cluster = trial % 4 == 0;
        const ClusteredDataset ds = testsupport::random_clustered(rng, opt).dataset();
        if (ds.total_pos() == 0 || ds.total_neg() == 0) continue;

        for (TiePolicy policy : {TiePolicy::HalfCredit, TiePolicy::Strict}) {
            const AucDecomposition d = decompose_auc(ds, policy);
            CHECK(std::abs(d.residual) < 1e-12);
            double wsum = 0.0;
            for (const auto& row : d.weights) {
                for (double v : row) wsum += v;
            }
            CHECK(std::abs(wsum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("cluster relabeling permutes the matrices and keeps the totals") {
    std::mt19937_64 rng(55);
    testsupport::RandomDatasetOptions opt;
    opt.max_n = 120;
    opt.max_k = 5;
    const testsupport::FlatSamples flat = testsupport::random_clustered(rng, opt);

    // Reverse the sample order: cluster first-appearance order changes, the
    // underlying partition does not.
    testsupport::FlatSamples reversed = flat;
    std::reverse(reversed.scores.begin(), reversed.scores.end());
    std::reverse(reversed.labels.begin(), reversed.labels.end());
    std::reverse(reversed.cluster_ids.begin(), reversed.cluster_ids.end());

    const ClusteredDataset a = flat.dataset();
    const ClusteredDataset b = reversed.dataset();
    const AucDecomposition da = decompose_auc(a, TiePolicy::HalfCredit);
    const AucDecomposition db = decompose_auc(b, TiePolicy::HalfCredit);

    CHECK(std::abs(da.global_auc - db.global_auc) < 1e-12);
    CHECK(std::abs(da.intra_total - db.intra_total) < 1e-12);
    CHECK(std::abs(da.inter_total - db.inter_total) < 1e-12);

    for (std::size_t i = 0; i < da.cluster_count(); ++i) {
        const std::size_t pi = b.index_of(da.clusters[i]);
        for (std::size_t j = 0; j < da.cluster_count(); ++j) {
            const std::size_t pj = b.index_of(da.clusters[j]);
            CHECK(std::abs(da.weights[i][j] - db.weights[pi][pj]) < 1e-12);
            REQUIRE(da.matrix[i][j].has_value() == db.matrix[pi][pj].has_value());
            if (da.matrix[i][j]) {
                CHECK(std::abs(*da.matrix[i][j] - *db.matrix[pi][pj]) < 1e-12);
            }
        }
    }
}

TEST_CASE("merging every cluster into one leaves only the intra total") {
    std::mt19937_64 rng(77);
    testsupport::RandomDatasetOptions opt;
    opt.max_n = 200;
    testsupport::FlatSamples flat = testsupport::random_clustered(rng, opt);
    const ClusteredDataset split = flat.dataset();

    std::fill(flat.cluster_ids.begin(), flat.cluster_ids.end(), "all");
    const ClusteredDataset merged = flat.dataset();

    const AucDecomposition dm = decompose_auc(merged, TiePolicy::HalfCredit);
    const AucDecomposition dsplit = decompose_auc(split, TiePolicy::HalfCredit);
    CHECK(dm.intra_total == dm.global_auc);
    CHECK(dm.inter_total == 0.0);
    CHECK(std::abs(dm.global_auc - dsplit.global_auc) < 1e-12);
}

TEST_CASE("naive within-cluster average misses the pooled AUC on the toy data") {
    const ClusteredDataset ds = toy_two_cluster().dataset();
    const NonAdditivityCheck check = demonstrate_non_additivity(ds, TiePolicy::HalfCredit);
    CHECK(std::abs(check.naive_weighted_avg - 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(check.global_auc - 8.0 / 9.0) < 1e-12);
    CHECK(std::abs(check.gap - 5.0 / 9.0) < 1e-12);
}

TEST_CASE("naive average equals global for a single cluster") {
    const std::vector<double> scores{0.9, 0.1, 0.7, 0.4};
    const std::vector<Label> labels{1, 0, 1, 0};
    const ClusteredDataset ds = ClusteredDataset::build(scores, labels, {});
    const NonAdditivityCheck check = demonstrate_non_additivity(ds, TiePolicy::HalfCredit);
    CHECK(check.gap == 0.0);
}

TEST_CASE("a cross-cluster score shift opens a gap while the identity holds") {
    // Perfect ranking inside both clusters, but cluster "hi" sits wholly above
    // cluster "lo", which the within-cluster average cannot see.
    std::vector<double> scores;
    std::vector<Label> labels;
    std::vector<std::string> ids;
    for (int i = 0; i < 10; ++i) {
        scores.push_back(10.0 + 0.01 * i);
        labels.push_back(1);
        ids.push_back("hi");
    }
    scores.push_back(9.5);
    labels.push_back(0);
    ids.push_back("hi");
    scores.push_back(1.0);
    labels.push_back(1);
    ids.push_back("lo");
    for (int i = 0; i < 10; ++i) {
        scores.push_back(0.05 * i);
        labels.push_back(0);
        ids.push_back("lo");
    }
    const ClusteredDataset ds = ClusteredDataset::build(scores, labels, ids);
    const NonAdditivityCheck check = demonstrate_non_additivity(ds, TiePolicy::HalfCredit);
    CHECK(check.gap > 0.1);
    const AucDecomposition d = decompose_auc(ds, TiePolicy::HalfCredit);
    CHECK(std::abs(d.residual) < 1e-12);
}

TEST_CASE("a random two-cluster dataset with a score shift opens a nonzero gap") {
    std::mt19937_64 rng(909);
    std::vector<double> scores;
    std::vector<Label> labels;
    std::vector<std::string> ids;
    for (int i = 0; i < 40; ++i) {  // cluster "up" sits two units above "down"
        const bool up = i % 2 == 0;
        scores.push_back(testsupport::uniform01(rng) + (up ? 2.0 : 0.0));
        labels.push_back(testsupport::uniform01(rng) < 0.5 ? 1 : 0);
        ids.push_back(up ? "up" : "down");
    }
    const ClusteredDataset ds = ClusteredDataset::build(scores, labels, ids);
    const NonAdditivityCheck check = demonstrate_non_additivity(ds, TiePolicy::HalfCredit);
    CHECK(check.gap != 0.0);
    // pooled value cross-checked against the pair-enumeration oracle
    const auto oracle = testsupport::brute_force_auc(scores, labels, TiePolicy::HalfCredit);
    CHECK(std::abs(check.global_auc - *oracle) < 1e-12);
}

TEST_CASE("additive decomposition: perfect probabilities give zero everywhere") {
    const std::vector<double> scores{1.0, 0.0, 1.0, 0.0, 0.0};
    const std::vector<Label> labels{1, 0, 1, 0, 0};
    const std::vector<std::string> ids{"a", "a", "b", "b", "b"};
    const ClusteredDataset ds = ClusteredDataset::build(scores, labels, ids, scores);

    const AdditiveDecomposition d = decompose_additive(ds, AdditiveMetric::Brier);
    CHECK(d.global_value == 0.0);
    for (const ClusterValue& c : d.per_cluster) {
        CHECK(c.value == 0.0);
    }
}

TEST_CASE("additive decomposition weights by cluster size exactly") {
    // clusters of size 2 and 4: global = (2/6) b1 + (4/6) b2
    const std::vector<double> probs{0.5, 0.5, 0.9, 0.9, 0.9, 0.9};
    const std::vector<Label> labels{1, 0, 1, 1, 0, 1};
    const std::vector<std::string> ids{"a", "a", "b", "b", "b", "b"};
    const ClusteredDataset ds = ClusteredDataset::build(probs, labels, ids, probs);

    const AdditiveDecomposition d = decompose_additive(ds, AdditiveMetric::Brier);
    REQUIRE(d.per_cluster.size() == 2);
    const double recombined = (2.0 / 6.0) * d.per_cluster[0].value +
                              (4.0 / 6.0) * d.per_cluster[1].value;
    CHECK(std::abs(recombined - d.global_value) < 1e-12);
    CHECK(d.per_cluster[0].weight == doctest::Approx(2.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("additive identity on random clustered data, both metrics") {
    std::mt19937_64 rng(303);
    for (int trial = 0; trial < 40; ++trial) {
        testsupport::RandomDatasetOptions opt;
        opt.max_n = 90;
        const ClusteredDataset ds = testsupport::random_clustered(rng, opt).dataset();
        for (AdditiveMetric metric : {AdditiveMetric::Brier, AdditiveMetric::LogLoss}) {
            const AdditiveDecomposition d = decompose_additive(ds, metric);
            double weighted = 0.0;
            double wsum = 0.0;
            for (const ClusterValue& c : d.per_cluster) {
                weighted += c.weight * c.value;
                wsum += c.weight;
            }
            CHECK(std::abs(weighted - d.global_value) < 1e-12);
            CHECK(std::abs(wsum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("additive decomposition requires probabilities") {
    const std::vector<double> scores{5.0, -2.0};  // not probabilities
    const std::vector<Label> labels{1, 0};
    const ClusteredDataset ds = ClusteredDataset::build(scores, labels, {});
    try {
        decompose_additive(ds, AdditiveMetric::Brier);
        FAIL("expected MissingProbabilities");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingProbabilities);
    }
}

TEST_CASE("worst cluster by diagonal AUC") {
    const AucDecomposition toy = decompose_auc(toy_two_cluster().dataset(), TiePolicy::HalfCredit);
    CHECK(worst_cluster_by_auc(toy) == "C2");

    AucDecomposition three;
    three.clusters = {"young", "mid", "senior"};
    three.matrix = OptionalMatrix(3, std::vector<std::optional<double>>(3));
    three.matrix[0][0] = 0.62;
    three.matrix[1][1] = 0.92;
    three.matrix[2][2] = 0.70;
    CHECK(worst_cluster_by_auc(three) == "young");

    AucDecomposition tied;
    tied.clusters = {"a", "b"};
    tied.matrix = OptionalMatrix(2, std::vector<std::optional<double>>(2));
    tied.matrix[0][0] = 0.7;
    tied.matrix[1][1] = 0.7;
    CHECK(worst_cluster_by_auc(tied) == "a");

    AucDecomposition undefined;
    undefined.clusters = {"a"};
    undefined.matrix = OptionalMatrix(1, std::vector<std::optional<double>>(1));
    try {
        worst_cluster_by_auc(undefined);
        FAIL("expected NoDefinedValue");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoDefinedValue);
    }
}

TEST_CASE("worst cluster by additive metric breaks ties toward dataset order") {
    AdditiveDecomposition d;
    d.per_cluster = {{"a", 2, 0.5, 0.3}, {"b", 2, 0.5, 0.3}};
    CHECK(worst_cluster_by_metric(d) == "a");
    d.per_cluster[1].value = 0.4;
    CHECK(worst_cluster_by_metric(d) == "b");
}

TEST_CASE("decompose_auc rejects single-class datasets") {
    const std::vector<double> scores{0.1, 0.2};
    const std::vector<Label> all_pos{1, 1};
    const ClusteredDataset ds = ClusteredDataset::build(scores, all_pos, {});
    try {
        decompose_auc(ds, TiePolicy::HalfCredit);
        FAIL("expected NoNegatives");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoNegatives);
    }
}
