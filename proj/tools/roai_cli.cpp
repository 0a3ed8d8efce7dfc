// Command-line front end: threshold/gap/bound calculators, single runs,
// and the three benchmark experiments, all emitting plot-ready CSV.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "roai/roai.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> delta;
    std::optional<double> k;
    std::optional<double> mad_scale;
    std::optional<int> runs;
    std::optional<std::string> out;
    bool verify = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--seed", flags.seed, "master seed");
    cmd->add_option("--delta", flags.delta, "failure probability");
    cmd->add_option("--k", flags.k, "outlier parameter k");
    cmd->add_option("--mad-scale", flags.mad_scale, "MAD consistency multiplier");
    cmd->add_option("--runs", flags.runs, "number of runs or draws");
    cmd->add_option("--out", flags.out, "output path prefix");
    cmd->add_flag("--verify", flags.verify, "recompute one random row and compare");
}

roai::ExperimentConfig load_config(const std::string& kind, const CommonFlags& flags) {
    roai::ExperimentConfig config;
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) {
            throw std::runtime_error("cannot read config: " + flags.config_path);
        }
        nlohmann::json j = nlohmann::json::parse(in);
        if (j.contains("kind") && j.at("kind").get<std::string>() != kind) {
            throw std::runtime_error("config kind does not match the subcommand");
        }
        j["kind"] = kind;
        config = roai::config_from_json(j);
    } else {
        config = roai::default_config(kind);
    }
    if (flags.seed) config.seed = *flags.seed;
    if (flags.delta) config.delta = *flags.delta;
    if (flags.k) config.k = *flags.k;
    if (flags.mad_scale) config.mad_scale = *flags.mad_scale;
    if (flags.runs) config.runs = *flags.runs;
    if (flags.out) config.out = *flags.out;
    return config;
}

int execute(const roai::ExperimentConfig& config, bool verify) {
    const roai::ExperimentResult result = roai::run_experiment(config);
    if (verify) {
        const std::size_t row = roai::verify_random_row(config, result);
        std::cout << "verified row " << row << " of " << result.rows.size() << "\n";
    }
    roai::write_outputs(config, result);
    std::cout << "wrote " << config.out << ".csv and " << config.out << ".json ("
              << result.rows.size() << " rows)\n";
    return 0;
}

void apply_means_file(roai::ExperimentConfig& config, const std::string& means_path) {
    if (!means_path.empty()) {
        config.instance_type = "means-file";
        config.means_path = means_path;
        config.reward_model = "bernoulli";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust outlier arm identification benchmark harness"};
    app.require_subcommand(1);

    // threshold: robust vs non-robust threshold of a means file.
    CommonFlags threshold_flags;
    std::string threshold_means;
    CLI::App* threshold = app.add_subcommand("threshold", "thresholds of a means file");
    add_common_flags(threshold, threshold_flags);
    threshold->add_option("--means", threshold_means, "means file (one value per line)")
        ->required();

    // gaps / bounds share the bounds report.
    CommonFlags gaps_flags;
    std::string gaps_means;
    double gaps_rho = 0.0;
    CLI::App* gaps = app.add_subcommand("gaps", "per-arm gap profile");
    add_common_flags(gaps, gaps_flags);
    gaps->add_option("--means", gaps_means, "means file; defaults to the ladder instance");
    gaps->add_option("--rho", gaps_rho, "band radius for the hard-instance check");

    CommonFlags bounds_flags;
    std::string bounds_means;
    double bounds_rho = 0.0;
    CLI::App* bounds = app.add_subcommand("bounds", "sample-complexity bounds");
    add_common_flags(bounds, bounds_flags);
    bounds->add_option("--means", bounds_means, "means file; defaults to the ladder instance");
    bounds->add_option("--rho", bounds_rho, "band radius for the hard-instance check");

    // run: one seeded traced run.
    CommonFlags run_flags;
    std::string run_algorithm = "roai-lucb";
    std::string run_means;
    CLI::App* run = app.add_subcommand("run", "one seeded run with a trace");
    add_common_flags(run, run_flags);
    run->add_option("--algorithm", run_algorithm, "roai-elim|roai-lucb|uniform|roai-lucb-subsampled");
    run->add_option("--means", run_means, "means file; defaults to the ladder instance");

    // experiment {stopping-time|robustness|anytime}
    CommonFlags experiment_flags;
    std::string experiment_kind;
    std::string experiment_means;
    CLI::App* experiment = app.add_subcommand("experiment", "benchmark experiments");
    add_common_flags(experiment, experiment_flags);
    experiment->add_option("kind", experiment_kind, "stopping-time|robustness|anytime")
        ->required();
    experiment->add_option("--means", experiment_means, "means file for the anytime experiment");

    // ingest-check: validate a means file.
    std::string ingest_path;
    CLI::App* ingest = app.add_subcommand("ingest-check", "validate a means file");
    ingest->add_option("path", ingest_path, "means file")->required();

    try {
        app.parse(argc, argv);

        if (threshold->parsed()) {
            roai::ExperimentConfig config = load_config("bounds", threshold_flags);
            apply_means_file(config, threshold_means);
            const roai::BanditInstance instance =
                roai::ingest_means(config.means_path, config.k, config.mad_scale);
            std::cout << "arms: " << instance.num_arms() << "\n"
                      << "median: " << roai::format_double(roai::median_of(instance.means)) << "\n"
                      << "mad: " << roai::format_double(roai::mad_of(instance.means)) << "\n"
                      << "robust_threshold: "
                      << roai::format_double(roai::theta_of(instance)) << "\n"
                      << "nonrobust_threshold: "
                      << roai::format_double(roai::nonrobust_threshold(instance.means, config.k))
                      << "\n";
            const roai::OutlierSet truth = roai::true_outlier_set(instance);
            std::cout << "outliers:";
            for (int i : truth.indices) {
                std::cout << " " << i;
            }
            std::cout << (truth.degenerate ? " (degenerate)" : "") << "\n";
            return 0;
        }
        if (gaps->parsed() || bounds->parsed()) {
            const bool is_gaps = gaps->parsed();
            roai::ExperimentConfig config =
                load_config("bounds", is_gaps ? gaps_flags : bounds_flags);
            apply_means_file(config, is_gaps ? gaps_means : bounds_means);
            config.rho = is_gaps ? gaps_rho : bounds_rho;
            return execute(config, is_gaps ? gaps_flags.verify : bounds_flags.verify);
        }
        if (run->parsed()) {
            roai::ExperimentConfig config = load_config("single-run", run_flags);
            apply_means_file(config, run_means);
            config.algorithms = {run_algorithm};
            return execute(config, run_flags.verify);
        }
        if (experiment->parsed()) {
            roai::ExperimentConfig config = load_config(experiment_kind, experiment_flags);
            apply_means_file(config, experiment_means);
            return execute(config, experiment_flags.verify);
        }
        if (ingest->parsed()) {
            const roai::BanditInstance instance = roai::ingest_means(ingest_path);
            std::cout << "ok: " << instance.num_arms() << " Bernoulli arms\n";
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
