#pragma once
// Subcommand drivers shared by the CLI binary and the test suites.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace clusterdiag {

struct RunConfig {
    std::string input;
    std::string output_dir;
    std::string delimiter = ",";
    std::string score_col;
    std::string label_col;
    std::string cluster_col;
    std::string prob_col;
    std::vector<std::string> features;
    std::string tie_policy = "half";        // half | strict
    int bins = 10;
    std::string bin_strategy = "quantile";  // quantile | uniform
    double clamp_eps = 1e-15;
    double smoothing_eps = 1e-6;
    std::string criterion = "auc";          // auc | brier | logloss
    std::string focus_cluster;              // drift: overrides the worst cluster
    int categorical_max_card = 0;           // drift: 0 disables categorical binning
    int k = 0;                              // cluster subcommand
    std::uint64_t seed = 0;
    int max_iter = 100;
};

// Exit codes: 0 success, 1 validation errors. Usage errors (exit 2) are
// handled by the flag parser before these run.
int run_decompose(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_drift(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_cluster(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace clusterdiag
