#ifndef FCTSIM_EXPERIMENTS_HPP
#define FCTSIM_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fctsim/analysis.hpp"
#include "fctsim/fcm.hpp"
#include "fctsim/nasch.hpp"
#include "fctsim/network.hpp"

namespace fctsim {

enum class ModelChoice { Fcm, Nasch, Both };

// Flat experiment configuration. The file format is `key = value` lines
// with `#` comments; unknown keys are rejected. Units live in the key
// names.
struct ExperimentConfig {
    ModelChoice model = ModelChoice::Both;
    int v_max = 2;
    double p = 0.2;
    bool calibrate_s = true;  // fit S from a Monte Carlo batch
    Ofn s_veh_h;              // used when calibrate_s is false
    double road_length_m = 3000.0;
    double intersection_spacing_m = 750.0;
    int cycle_s = 60;
    int green_s = 30;
    std::vector<int> offsets_s = {0, 0, 0};
    int queue_length = 30;
    int monte_carlo_runs = 100;  // K
    int calibration_runs = 200;
    int horizon_steps = 3600;  // T
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    double nasch_cell_m = 7.5;
    double seconds_per_step = 1.0;
    NshVariant nsh_variant = NshVariant::Standard;
    double sweep_p_min = 0.0;
    double sweep_p_max = 0.8;
    double sweep_p_step = 0.1;
    std::vector<int> travel_time_queue_lengths = {10, 30, 50, 70};
    std::vector<int> count_queue_lengths = {30, 70};
    int calibration_queue_length = 70;  // released queue per measurement run
    int bench_runs = 500;
    int bench_horizon_steps = 1200;
    bool emit_cell_traces = false;

    bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& text);
std::string serialize_config(const ExperimentConfig& config);
ExperimentConfig load_config_file(const std::string& path);

// The paper-scale knobs behind --full-scale: K = 500 and a 0.01 p-step.
void apply_full_scale(ExperimentConfig& config);

// Shared building blocks (also driven directly by the acceptance suite).

struct DischargeSetup {
    Scenario scenario;
    int measured_stop_line = 0;
};

// Standing queue released at an unsignalised stop line; saturation samples
// measure the full discharge of the queue.
DischargeSetup make_discharge_setup(int queue_length, double cell_m);

struct CalibrationResult {
    SaturationFit fit;
    std::array<double, 3> alpha{};
    std::vector<double> samples;
    RulePairParams pair;
};

CalibrationResult calibrate_saturation(const ExperimentConfig& config);

// Resolves S: either the configured tuple or a fresh calibration fit.
SaturationSpec resolve_saturation_spec(const ExperimentConfig& config);

struct ArterialBatch {
    Scenario fcm_scenario;
    Scenario nasch_scenario;
    SaturationSpec spec;
    FcmTrace fcm;
    std::vector<RunTrace> nasch_runs;
    double fcm_cell_m = 0.0;
};

// FCM once, NaSch K times, same queue/cycle semantics on the two grids.
ArterialBatch run_arterial_pair(const ExperimentConfig& config,
                                const SaturationSpec& spec, int queue_length,
                                int cycle_s, int green_s);

struct BenchResult {
    double fcm_wall_s = 0.0;
    double nasch_mc_wall_s = 0.0;
    double ratio = 0.0;
    std::uint64_t fcm_ops = 0;
    std::uint64_t nasch_mc_ops = 0;
    std::uint64_t fcm_expected_ops = 0;    // 5 * T * N
    std::uint64_t nasch_expected_ops = 0;  // K * T * N
    int const_n_horizon = 0;
    int vehicle_count = 0;
};

BenchResult run_bench(const ExperimentConfig& config);

// CLI commands; each writes machine-readable CSV/JSON under
// config.output_dir and returns the file paths.
std::vector<std::string> cmd_table1(const ExperimentConfig& config);
std::vector<std::string> cmd_sweep(const ExperimentConfig& config);
std::vector<std::string> cmd_calibrate(const ExperimentConfig& config);
std::vector<std::string> cmd_arterial(const ExperimentConfig& config);
std::vector<std::string> cmd_bench(const ExperimentConfig& config);

}  // namespace fctsim

#endif
