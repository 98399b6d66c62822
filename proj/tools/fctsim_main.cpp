#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fctsim/experiments.hpp"
#include "json.hpp"

namespace {

struct GlobalOptions {
    std::string config_path;
    std::string output_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool full_scale = false;
};

fctsim::ExperimentConfig resolve(const GlobalOptions& options) {
    fctsim::ExperimentConfig config;
    if (!options.config_path.empty()) {
        config = fctsim::load_config_file(options.config_path);
    }
    if (options.seed_set) config.seed = options.seed;
    if (!options.output_dir.empty()) config.output_dir = options.output_dir;
    if (options.full_scale) fctsim::apply_full_scale(config);
    return config;
}

void report(const std::vector<std::string>& files) {
    nlohmann::json out;
    out["written"] = files;
    std::cout << out.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fuzzy cellular and NaSch traffic stream simulator"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    GlobalOptions options;
    app.add_option("--config", options.config_path, "experiment config file")
        ->check(CLI::ExistingFile);
    app.add_option("--out", options.output_dir, "output directory");
    auto* seed_opt =
        app.add_option("--seed", options.seed, "master seed override");
    app.add_flag("--full-scale", options.full_scale,
                 "paper-scale runs (K = 500, p step 0.01)");

    auto* table1 = app.add_subcommand(
        "table1", "saturation flow of the deterministic rules");
    auto* sweep = app.add_subcommand(
        "sweep", "NaSch saturation percentiles across deceleration p");
    auto* calibrate = app.add_subcommand(
        "calibrate", "fit the fuzzy saturation target S and alpha");
    auto* arterial = app.add_subcommand(
        "arterial", "three-intersection arterial comparison runs");
    auto* bench = app.add_subcommand(
        "bench", "operation counts and wall-clock comparison");

    CLI11_PARSE(app, argc, argv);
    options.seed_set = seed_opt->count() > 0;

    try {
        const fctsim::ExperimentConfig config = resolve(options);
        if (table1->parsed()) report(fctsim::cmd_table1(config));
        if (sweep->parsed()) report(fctsim::cmd_sweep(config));
        if (calibrate->parsed()) report(fctsim::cmd_calibrate(config));
        if (arterial->parsed()) report(fctsim::cmd_arterial(config));
        if (bench->parsed()) report(fctsim::cmd_bench(config));
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    }
    return 0;
}
