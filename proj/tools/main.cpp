// Command-line entry point: decompose / drift / cluster subcommands.

#include <iostream>

#include <CLI11.hpp>

#include "clusterdiag/commands.hpp"
#include "clusterdiag/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Cluster-level diagnostics for binary classifier scores"};
    app.set_version_flag("--version", clusterdiag::kVersion);
    app.require_subcommand(1);

    clusterdiag::RunConfig cfg;

    auto add_input_flags = [&](CLI::App* cmd) {
        cmd->add_option("--input", cfg.input, "Input CSV file")->required();
        cmd->add_option("--output-dir", cfg.output_dir, "Directory for generated files")
            ->required();
        cmd->add_option("--delimiter", cfg.delimiter, "Field delimiter (default ,)");
    };
    auto add_scored_flags = [&](CLI::App* cmd) {
        cmd->add_option("--score-col", cfg.score_col, "Column holding classifier scores")
            ->required();
        cmd->add_option("--label-col", cfg.label_col, "Column holding 0/1 labels")->required();
        cmd->add_option("--cluster-col", cfg.cluster_col,
                        "Column holding cluster ids (default: one cluster)");
        cmd->add_option("--prob-col", cfg.prob_col,
                        "Column holding predicted probabilities (default: scores when in [0,1])");
        cmd->add_option("--features", cfg.features, "Feature columns (default: remaining numeric)")
            ->delimiter(',');
        cmd->add_option("--tie-policy", cfg.tie_policy, "Credit for tied score pairs")
            ->check(CLI::IsMember({"half", "strict"}));
        cmd->add_option("--clamp-eps", cfg.clamp_eps, "Log-loss probability clamp (default 1e-15)");
    };

    CLI::App* decompose =
        app.add_subcommand("decompose", "Cluster-pair AUC decomposition plus Brier and log loss");
    add_input_flags(decompose);
    add_scored_flags(decompose);

    CLI::App* drift = app.add_subcommand(
        "drift", "Feature drift and label-rate contrast of the worst cluster vs the rest");
    add_input_flags(drift);
    add_scored_flags(drift);
    drift->add_option("--bins", cfg.bins, "Histogram bins (default 10)")
        ->check(CLI::Range(2, 100000));
    drift->add_option("--bin-strategy", cfg.bin_strategy, "Histogram edge placement")
        ->check(CLI::IsMember({"quantile", "uniform"}));
    drift->add_option("--criterion", cfg.criterion, "How the worst cluster is chosen")
        ->check(CLI::IsMember({"auc", "brier", "logloss"}));
    drift->add_option("--focus-cluster", cfg.focus_cluster,
                      "Analyze this cluster instead of the worst one");
    drift->add_option("--smoothing-eps", cfg.smoothing_eps,
                      "Additive histogram smoothing (default 1e-6)");
    drift->add_option("--categorical-max-card", cfg.categorical_max_card,
                      "Give integer columns with up to this many distinct values one bin per "
                      "category (default 0: off)")
        ->check(CLI::Range(0, 1 << 20));

    CLI::App* cluster =
        app.add_subcommand("cluster", "Append a k-means cluster column to an input CSV");
    add_input_flags(cluster);
    cluster->add_option("--k", cfg.k, "Number of clusters")->required()->check(CLI::Range(1, 1 << 20));
    cluster->add_option("--seed", cfg.seed, "Random seed (default 0)");
    cluster->add_option("--max-iter", cfg.max_iter, "Lloyd iteration cap (default 100)")
        ->check(CLI::Range(1, 1 << 20));
    cluster->add_option("--features", cfg.features,
                        "Feature columns to cluster on (default: all numeric)")
        ->delimiter(',');
    cluster->add_option("--cluster-col", cfg.cluster_col,
                        "Name of the appended column (default: cluster)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // anything but help/version is a usage error
    }

    if (decompose->parsed()) {
        return clusterdiag::run_decompose(cfg, std::cout, std::cerr);
    }
    if (drift->parsed()) {
        return clusterdiag::run_drift(cfg, std::cout, std::cerr);
    }
    return clusterdiag::run_cluster(cfg, std::cout, std::cerr);
}
