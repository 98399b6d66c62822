#include "fctsim/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "fctsim/rng.hpp"
#include "json.hpp"

namespace fctsim {

namespace {

using nlohmann::json;

// Seed-stream tags so that distinct commands never share a substream.
constexpr std::uint64_t kSweepStream = 0x53574545;
constexpr std::uint64_t kCalibrateStream = 0xCA11B;
constexpr std::uint64_t kArterialStream = 0xA27E;
constexpr std::uint64_t kBenchStream = 0xBE4C;

// Shortest decimal form that parses back to the same double; keeps config
// round-trips and CSV outputs byte-stable.
std::string format_double(double value) {
    char buffer[64];
    if (value == std::floor(value) && std::abs(value) < 1e15) {
        std::snprintf(buffer, sizeof(buffer), "%.0f", value);
        return buffer;
    }
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
        if (std::strtod(buffer, nullptr) == value) break;
    }
    return buffer;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream stream(s);
    std::string part;
    while (std::getline(stream, part, sep)) parts.push_back(trim(part));
    return parts;
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int parsed = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for '" + key + "': " + value);
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("bad number for '" + key + "': " + value);
    }
}

std::vector<int> parse_int_list(const std::string& key,
                                const std::string& value) {
    std::vector<int> parsed;
    for (const std::string& part : split(value, ',')) {
        parsed.push_back(parse_int(key, part));
    }
    return parsed;
}

std::string int_list(const std::vector<int>& values) {
    std::string joined;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) joined += ",";
        joined += std::to_string(values[i]);
    }
    return joined;
}

void validate_config(const ExperimentConfig& c) {
    if (c.v_max < 1) throw ConfigError("v_max must be >= 1");
    if (c.p < 0.0 || c.p > 1.0) throw ConfigError("p must lie in [0, 1]");
    if (c.green_s <= 0 || c.green_s >= c.cycle_s) {
        throw ConfigError("green_s must satisfy 0 < green_s < cycle_s");
    }
    if (c.queue_length < 0) throw ConfigError("queue_length must be >= 0");
    if (c.monte_carlo_runs < 1 || c.calibration_runs < 1 || c.bench_runs < 1) {
        throw ConfigError("run counts must be >= 1");
    }
    if (c.calibration_queue_length < 1) {
        throw ConfigError("calibration_queue_length must be >= 1");
    }
    if (c.horizon_steps < 1 || c.bench_horizon_steps < 1) {
        throw ConfigError("horizons must be >= 1");
    }
    if (c.nasch_cell_m <= 0 || c.seconds_per_step <= 0) {
        throw ConfigError("grid and time step must be positive");
    }
    if (c.sweep_p_step <= 0 || c.sweep_p_min < 0 || c.sweep_p_max > 1 ||
        c.sweep_p_min > c.sweep_p_max) {
        throw ConfigError("sweep p range must be 0 <= min <= max <= 1, step > 0");
    }
    if (!c.calibrate_s && !is_monotone(c.s_veh_h)) {
        throw ConfigError("s_veh_h must be a monotone 5-tuple");
    }
    if (c.road_length_m <= 0 || c.intersection_spacing_m <= 0) {
        throw ConfigError("road geometry must be positive");
    }
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    return out;
}

std::filesystem::path output_path(const ExperimentConfig& config,
                                  const std::string& name) {
    std::filesystem::create_directories(config.output_dir);
    return std::filesystem::path(config.output_dir) / name;
}

void write_json(const std::filesystem::path& path, const json& value) {
    auto out = open_output(path);
    out << value.dump(2) << "\n";
}

std::vector<double> sweep_values(const ExperimentConfig& config) {
    std::vector<double> values;
    for (int k = 0;; ++k) {
        const double p = config.sweep_p_min + k * config.sweep_p_step;
        if (p > config.sweep_p_max + 1e-9) break;
        values.push_back(std::min(p, 1.0));
    }
    return values;
}

Road build_config_road(const ExperimentConfig& config, double cell_m) {
    std::vector<double> stops;
    for (double pos = config.intersection_spacing_m;
         pos < config.road_length_m - 1e-9;
         pos += config.intersection_spacing_m) {
        stops.push_back(pos);
    }
    return build_road(config.road_length_m, cell_m, stops);
}

Scenario build_config_scenario(const ExperimentConfig& config, double cell_m,
                               int queue_length) {
    Scenario scenario;
    scenario.road = build_config_road(config, cell_m);
    scenario.queue_length = queue_length;
    scenario.probe = true;
    for (std::size_t k = 0; k < scenario.road.stop_line_cells.size(); ++k) {
        SignalSchedule schedule;
        schedule.cycle_s = config.cycle_s;
        schedule.green_s = config.green_s;
        schedule.red_first = true;
        schedule.offset_s =
            k < config.offsets_s.size() ? config.offsets_s[k] : 0;
        scenario.schedules.push_back(schedule);
    }
    return scenario;
}

double crisp_travel_time_s(const RunTrace& run, int threshold_cell,
                           double seconds_per_step) {
    for (std::size_t t = 1; t < run.tracked_positions.size(); ++t) {
        if (run.tracked_positions[t] > threshold_cell) {
            return t * seconds_per_step;
        }
    }
    throw InvalidState(
        "crisp run never crossed the travel-time threshold; extend the "
        "horizon");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig config;
    std::map<std::string, std::string> entries;
    std::stringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) +
                              ": empty key");
        }
        if (!entries.emplace(key, value).second) {
            throw ConfigError("duplicate key '" + key + "'");
        }
    }

    for (const auto& [key, value] : entries) {
        if (key == "model") {
            if (value == "fcm") config.model = ModelChoice::Fcm;
            else if (value == "nasch") config.model = ModelChoice::Nasch;
            else if (value == "both") config.model = ModelChoice::Both;
            else throw ConfigError("model must be fcm, nasch or both");
        } else if (key == "v_max") {
            config.v_max = parse_int(key, value);
        } else if (key == "p") {
            config.p = parse_double(key, value);
        } else if (key == "s_veh_h") {
            if (value == "calibrate") {
                config.calibrate_s = true;
            } else {
                const auto parts = split(value, ',');
                if (parts.size() != 5) {
                    throw ConfigError("s_veh_h needs 5 values or 'calibrate'");
                }
                config.calibrate_s = false;
                for (int m = 0; m < 5; ++m) {
                    config.s_veh_h[m] = parse_double(key, parts[m]);
                }
            }
        } else if (key == "road_length_m") {
            config.road_length_m = parse_double(key, value);
        } else if (key == "intersection_spacing_m") {
            config.intersection_spacing_m = parse_double(key, value);
        } else if (key == "cycle_s") {
            config.cycle_s = parse_int(key, value);
        } else if (key == "green_s") {
            config.green_s = parse_int(key, value);
        } else if (key == "offsets_s") {
            config.offsets_s = parse_int_list(key, value);
        } else if (key == "queue_length") {
            config.queue_length = parse_int(key, value);
        } else if (key == "monte_carlo_runs") {
            config.monte_carlo_runs = parse_int(key, value);
        } else if (key == "calibration_runs") {
            config.calibration_runs = parse_int(key, value);
        } else if (key == "horizon_steps") {
            config.horizon_steps = parse_int(key, value);
        } else if (key == "seed") {
            try {
                config.seed = std::stoull(value);
            } catch (const std::exception&) {
                throw ConfigError("bad seed: " + value);
            }
        } else if (key == "output_dir") {
            config.output_dir = value;
        } else if (key == "nasch_cell_m") {
            config.nasch_cell_m = parse_double(key, value);
        } else if (key == "seconds_per_step") {
            config.seconds_per_step = parse_double(key, value);
        } else if (key == "nsh_variant") {
            if (value == "standard") config.nsh_variant = NshVariant::Standard;
            else if (value == "slow_to_start")
                config.nsh_variant = NshVariant::SlowToStart;
            else throw ConfigError("nsh_variant must be standard or slow_to_start");
        } else if (key == "sweep_p_min") {
            config.sweep_p_min = parse_double(key, value);
        } else if (key == "sweep_p_max") {
            config.sweep_p_max = parse_double(key, value);
        } else if (key == "sweep_p_step") {
            config.sweep_p_step = parse_double(key, value);
        } else if (key == "travel_time_queue_lengths") {
            config.travel_time_queue_lengths = parse_int_list(key, value);
        } else if (key == "count_queue_lengths") {
            config.count_queue_lengths = parse_int_list(key, value);
        } else if (key == "calibration_queue_length") {
            config.calibration_queue_length = parse_int(key, value);
        } else if (key == "bench_runs") {
            config.bench_runs = parse_int(key, value);
        } else if (key == "bench_horizon_steps") {
            config.bench_horizon_steps = parse_int(key, value);
        } else if (key == "emit_cell_traces") {
            if (value == "true") config.emit_cell_traces = true;
            else if (value == "false") config.emit_cell_traces = false;
            else throw ConfigError("emit_cell_traces must be true or false");
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }

    validate_config(config);
    return config;
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "model = "
        << (c.model == ModelChoice::Fcm
                ? "fcm"
                : c.model == ModelChoice::Nasch ? "nasch" : "both")
        << "\n";
    out << "v_max = " << c.v_max << "\n";
    out << "p = " << format_double(c.p) << "\n";
    if (c.calibrate_s) {
        out << "s_veh_h = calibrate\n";
    } else {
        out << "s_veh_h = ";
        for (int m = 0; m < 5; ++m) {
            if (m) out << ",";
            out << format_double(c.s_veh_h[m]);
        }
        out << "\n";
    }
    out << "road_length_m = " << format_double(c.road_length_m) << "\n";
    out << "intersection_spacing_m = "
        << format_double(c.intersection_spacing_m) << "\n";
    out << "cycle_s = " << c.cycle_s << "\n";
    out << "green_s = " << c.green_s << "\n";
    out << "offsets_s = " << int_list(c.offsets_s) << "\n";
    out << "queue_length = " << c.queue_length << "\n";
    out << "monte_carlo_runs = " << c.monte_carlo_runs << "\n";
    out << "calibration_runs = " << c.calibration_runs << "\n";
    out << "horizon_steps = " << c.horizon_steps << "\n";
    out << "seed = " << c.seed << "\n";
    out << "output_dir = " << c.output_dir << "\n";
    out << "nasch_cell_m = " << format_double(c.nasch_cell_m) << "\n";
    out << "seconds_per_step = " << format_double(c.seconds_per_step) << "\n";
    out << "nsh_variant = "
        << (c.nsh_variant == NshVariant::Standard ? "standard"
                                                  : "slow_to_start")
        << "\n";
    out << "sweep_p_min = " << format_double(c.sweep_p_min) << "\n";
    out << "sweep_p_max = " << format_double(c.sweep_p_max) << "\n";
    out << "sweep_p_step = " << format_double(c.sweep_p_step) << "\n";
    out << "travel_time_queue_lengths = "
        << int_list(c.travel_time_queue_lengths) << "\n";
    out << "count_queue_lengths = " << int_list(c.count_queue_lengths) << "\n";
    out << "calibration_queue_length = " << c.calibration_queue_length << "\n";
    out << "bench_runs = " << c.bench_runs << "\n";
    out << "bench_horizon_steps = " << c.bench_horizon_steps << "\n";
    out << "emit_cell_traces = " << (c.emit_cell_traces ? "true" : "false")
        << "\n";
    return out.str();
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void apply_full_scale(ExperimentConfig& config) {
    config.monte_carlo_runs = 500;
    config.calibration_runs = 500;
    config.sweep_p_step = 0.01;
}

DischargeSetup make_discharge_setup(int queue_length, double cell_m) {
    DischargeSetup setup;
    setup.scenario = make_discharge_scenario(queue_length, cell_m);
    setup.measured_stop_line = 0;
    return setup;
}

CalibrationResult calibrate_saturation(const ExperimentConfig& config) {
    const DischargeSetup setup = make_discharge_setup(
        config.calibration_queue_length, config.nasch_cell_m);

    MonteCarloConfig mc;
    mc.runs = config.calibration_runs;
    mc.horizon_steps = config.horizon_steps;
    mc.deceleration_probability = config.p;
    mc.master_seed = derive_seed(config.seed, kCalibrateStream);

    NaschParams params{config.v_max, config.nsh_variant};
    const std::vector<RunTrace> traces =
        monte_carlo(setup.scenario, mc, {}, params);

    CalibrationResult result;
    result.samples =
        saturation_samples(traces, setup.scenario, setup.measured_stop_line,
                           config.horizon_steps, config.seconds_per_step);
    result.pair = make_rule_pair(RuleKind::R1, RuleKind::R2, config.v_max,
                                 config.seconds_per_step);
    result.fit = estimate_saturation_fuzzy(result.samples, result.pair);
    result.alpha = compute_alpha(result.fit.s_veh_h, result.pair);
    return result;
}

SaturationSpec resolve_saturation_spec(const ExperimentConfig& config) {
    const RulePairParams pair = make_rule_pair(
        RuleKind::R1, RuleKind::R2, config.v_max, config.seconds_per_step);
    if (config.calibrate_s) {
        const CalibrationResult calibration = calibrate_saturation(config);
        if (calibration.fit.clamped_samples > 0) {
            std::cerr << "warning: " << calibration.fit.clamped_samples
                      << " saturation samples fell outside the rule-pair "
                         "support and were clamped\n";
        }
        return make_saturation_spec(calibration.fit.s_veh_h, pair);
    }
    return make_saturation_spec(config.s_veh_h, pair);
}

ArterialBatch run_arterial_pair(const ExperimentConfig& config,
                                const SaturationSpec& spec, int queue_length,
                                int cycle_s, int green_s) {
    ExperimentConfig local = config;
    local.cycle_s = cycle_s;
    local.green_s = green_s;

    ArterialBatch batch;
    batch.spec = spec;
    batch.fcm_cell_m =
        fcm_cell_length(config.nasch_cell_m, config.v_max, config.p);
    batch.fcm_scenario =
        build_config_scenario(local, batch.fcm_cell_m, queue_length);
    batch.nasch_scenario =
        build_config_scenario(local, config.nasch_cell_m, queue_length);

    TraceSpec fcm_trace;
    fcm_trace.tracked_vehicle_id = 0;
    fcm_trace.count_threshold_cell =
        batch.fcm_scenario.road.stop_line_cells.back();
    fcm_trace.record_cells = config.emit_cell_traces;
    batch.fcm = run_fcm(batch.fcm_scenario, spec, config.horizon_steps,
                        fcm_trace);

    TraceSpec nasch_trace;
    nasch_trace.tracked_vehicle_id = 0;
    nasch_trace.count_threshold_cell =
        batch.nasch_scenario.road.stop_line_cells.back();

    MonteCarloConfig mc;
    mc.runs = config.monte_carlo_runs;
    mc.horizon_steps = config.horizon_steps;
    mc.deceleration_probability = config.p;
    mc.master_seed = derive_seed(
        config.seed, kArterialStream + 131ULL * queue_length + cycle_s);

    NaschParams params{config.v_max, config.nsh_variant};
    batch.nasch_runs =
        monte_carlo(batch.nasch_scenario, mc, nasch_trace, params);
    return batch;
}

std::vector<std::string> cmd_table1(const ExperimentConfig& config) {
    validate_config(config);
    const auto path = output_path(config, "table1.csv");
    auto out = open_output(path);
    out << "# fctsim-csv v1 table1\n";
    out << "rule,gap_cells,saturation_veh_step,saturation_veh_h\n";
    const std::pair<RuleKind, const char*> rules[] = {
        {RuleKind::R1, "R1"}, {RuleKind::R2, "R2"}, {RuleKind::R3, "R3"}};
    for (const auto& [rule, name] : rules) {
        const double gap = steady_discharge_gap(rule, config.v_max);
        const double veh_step = config.v_max / (gap + 1.0);
        const double veh_h =
            rule_saturation(rule, config.v_max, config.seconds_per_step);
        out << name << "," << format_double(gap) << ","
            << format_double(veh_step) << "," << format_double(veh_h) << "\n";
    }
    return {path.string()};
}

std::vector<std::string> cmd_sweep(const ExperimentConfig& config) {
    validate_config(config);
    const DischargeSetup setup = make_discharge_setup(
        config.calibration_queue_length, config.nasch_cell_m);
    const std::vector<double> p_values = sweep_values(config);
    NaschParams params{config.v_max, config.nsh_variant};
    const std::vector<SweepRow> rows = sweep_p(
        setup.scenario, p_values, config.monte_carlo_runs,
        config.horizon_steps, derive_seed(config.seed, kSweepStream),
        setup.measured_stop_line, config.seconds_per_step, params);

    const auto path = output_path(config, "sweep.csv");
    auto out = open_output(path);
    out << "# fctsim-csv v1 sweep\n";
    out << "p,median_veh_h,pct5_veh_h,pct95_veh_h,spread_veh_h\n";
    for (const SweepRow& row : rows) {
        out << format_double(row.p) << "," << format_double(row.median_veh_h)
            << "," << format_double(row.pct5_veh_h) << ","
            << format_double(row.pct95_veh_h) << ","
            << format_double(row.spread_veh_h) << "\n";
    }
    return {path.string()};
}

std::vector<std::string> cmd_calibrate(const ExperimentConfig& config) {
    validate_config(config);
    const CalibrationResult calibration = calibrate_saturation(config);
    if (calibration.fit.clamped_samples > 0) {
        std::cerr << "warning: " << calibration.fit.clamped_samples
                  << " saturation samples fell outside the rule-pair support "
                     "and were clamped\n";
    }

    json summary;
    summary["s_veh_h"] = calibration.fit.s_veh_h.a;
    summary["alpha"] = calibration.alpha;
    summary["runs"] = config.calibration_runs;
    summary["p"] = config.p;
    summary["seed"] = config.seed;
    summary["clamped_samples"] = calibration.fit.clamped_samples;
    const auto json_path = output_path(config, "calibration.json");
    write_json(json_path, summary);

    const auto hist_path = output_path(config, "histogram.csv");
    auto out = open_output(hist_path);
    out << "# fctsim-csv v1 histogram\n";
    out << "bin_lo_veh_h,bin_hi_veh_h,count\n";
    for (const HistogramBin& bin : saturation_histogram(calibration.samples)) {
        out << format_double(bin.lo) << "," << format_double(bin.hi) << ","
            << bin.count << "\n";
    }
    return {json_path.string(), hist_path.string()};
}

std::vector<std::string> cmd_arterial(const ExperimentConfig& config) {
    validate_config(config);
    const SaturationSpec spec = resolve_saturation_spec(config);

    // One batch per distinct queue length; the overlay/coverage batch uses
    // the configured queue_length.
    std::vector<int> queue_lengths = {config.queue_length};
    for (int q : config.travel_time_queue_lengths) queue_lengths.push_back(q);
    for (int q : config.count_queue_lengths) queue_lengths.push_back(q);
    std::sort(queue_lengths.begin(), queue_lengths.end());
    queue_lengths.erase(
        std::unique(queue_lengths.begin(), queue_lengths.end()),
        queue_lengths.end());

    std::map<int, ArterialBatch> batches;
    for (int q : queue_lengths) {
        batches.emplace(q, run_arterial_pair(config, spec, q, config.cycle_s,
                                             config.green_s));
    }

    std::vector<std::string> written;
    const ArterialBatch& overlay = batches.at(config.queue_length);

    {
        const auto path = output_path(config, "trajectories.csv");
        auto out = open_output(path);
        out << "# fctsim-csv v1 trajectories\n";
        out << "t,source,run_id,meters\n";
        for (std::size_t t = 0; t < overlay.fcm.tracked_positions.size();
             ++t) {
            for (int m = 0; m < kOfnComponents; ++m) {
                out << t << ",fcm_x" << m << ",0,"
                    << format_double(overlay.fcm.tracked_positions[t][m] *
                                     overlay.fcm_cell_m)
                    << "\n";
            }
        }
        for (std::size_t run = 0; run < overlay.nasch_runs.size(); ++run) {
            const RunTrace& trace = overlay.nasch_runs[run];
            for (std::size_t t = 0; t < trace.tracked_positions.size(); ++t) {
                out << t << ",nasch," << run << ","
                    << format_double(trace.tracked_positions[t] *
                                     config.nasch_cell_m)
                    << "\n";
            }
        }
        written.push_back(path.string());
    }

    {
        const auto path = output_path(config, "travel_times.csv");
        auto out = open_output(path);
        out << "# fctsim-csv v1 travel_times\n";
        out << "queue_length,theta0_s,theta1_s,theta2_s,theta3_s,theta4_s,"
               "nasch_pct5_s,nasch_median_s,nasch_pct95_s\n";
        for (int q : config.travel_time_queue_lengths) {
            const ArterialBatch& batch = batches.at(q);
            const FuzzyMetric theta = fuzzy_travel_time(
                batch.fcm, 0, batch.fcm_scenario.road.stop_line_cells.back(),
                config.seconds_per_step);
            std::vector<double> crisp;
            crisp.reserve(batch.nasch_runs.size());
            for (const RunTrace& run : batch.nasch_runs) {
                crisp.push_back(crisp_travel_time_s(
                    run, batch.nasch_scenario.road.stop_line_cells.back(),
                    config.seconds_per_step));
            }
            out << q;
            for (int m = 0; m < kOfnComponents; ++m) {
                out << "," << format_double(theta.value[m]);
            }
            out << "," << format_double(quantile(crisp, 0.05)) << ","
                << format_double(quantile(crisp, 0.5)) << ","
                << format_double(quantile(crisp, 0.95)) << "\n";
        }
        written.push_back(path.string());
    }

    for (int q : config.count_queue_lengths) {
        const ArterialBatch& batch = batches.at(q);
        const auto path =
            output_path(config, "counts_q" + std::to_string(q) + ".csv");
        auto out = open_output(path);
        out << "# fctsim-csv v1 counts\n";
        out << "t,fcm_n0,fcm_n1,fcm_n2,fcm_n3,fcm_n4,nasch_pct5,nasch_median,"
               "nasch_pct95\n";
        std::vector<double> per_run(batch.nasch_runs.size());
        for (std::size_t t = 0; t < batch.fcm.vehicle_counts.size(); ++t) {
            out << t;
            for (int m = 0; m < kOfnComponents; ++m) {
                out << "," << batch.fcm.vehicle_counts[t][m];
            }
            for (std::size_t run = 0; run < batch.nasch_runs.size(); ++run) {
                per_run[run] = batch.nasch_runs[run].vehicle_counts[t];
            }
            out << "," << format_double(quantile(per_run, 0.05)) << ","
                << format_double(quantile(per_run, 0.5)) << ","
                << format_double(quantile(per_run, 0.95)) << "\n";
        }
        written.push_back(path.string());
    }

    {
        json summary;
        summary["queue_length"] = config.queue_length;
        summary["cycle_s"] = config.cycle_s;
        summary["green_s"] = config.green_s;
        summary["envelope_coverage"] = envelope_coverage(
            overlay.fcm, overlay.fcm_cell_m, overlay.nasch_runs,
            config.nasch_cell_m);
        summary["s_veh_h"] = spec.s_veh_h.a;
        summary["alpha"] = spec.alpha;
        summary["fcm_cell_m"] = overlay.fcm_cell_m;
        summary["diagnostics"] = {
            {"middle_outside_envelope",
             overlay.fcm.diagnostics.middle_outside_envelope},
            {"envelope_inverted", overlay.fcm.diagnostics.envelope_inverted},
            {"non_monotone_position",
             overlay.fcm.diagnostics.non_monotone_position}};
        const auto path = output_path(config, "arterial.json");
        write_json(path, summary);
        written.push_back(path.string());
    }

    if (config.emit_cell_traces) {
        const auto path = output_path(config, "fcm_cells.csv");
        auto out = open_output(path);
        out << "# fctsim-csv v1 fcm_cells\n";
        out << "t,vehicle_id,x0,x1,x2,x3,x4,v0,v1,v2,v3,v4\n";
        for (const FcmCellRow& row : overlay.fcm.cells) {
            out << row.step << "," << row.vehicle_id;
            for (int m = 0; m < kOfnComponents; ++m) out << "," << row.x[m];
            for (int m = 0; m < kOfnComponents; ++m) out << "," << row.v[m];
            out << "\n";
        }
        written.push_back(path.string());
    }

    return written;
}

BenchResult run_bench(const ExperimentConfig& config) {
    validate_config(config);
    ExperimentConfig local = config;
    local.calibrate_s = false;
    local.s_veh_h = make_ofn(1440, 1503, 1575, 1638, 1800);
    const SaturationSpec spec = resolve_saturation_spec(local);

    const double fcm_cell =
        fcm_cell_length(config.nasch_cell_m, config.v_max, config.p);
    const Scenario fcm_scenario =
        build_config_scenario(config, fcm_cell, config.queue_length);
    const Scenario nasch_scenario = build_config_scenario(
        config, config.nasch_cell_m, config.queue_length);

    BenchResult bench;
    bench.vehicle_count = static_cast<int>(
        init_queues(fcm_scenario.road, config.queue_length, true).size());

    // Constant-N phase: largest horizon before the R3 front-runner can
    // leave either grid (stochastic runs are never faster than R3).
    auto first_exit = [&](const Scenario& scenario) {
        std::vector<CrispVehicle> vehicles = init_queues(
            scenario.road, scenario.queue_length, scenario.probe);
        for (int t = 0; t < config.bench_horizon_steps; ++t) {
            const std::vector<int> halt =
                halt_cells_at(scenario.road, scenario.schedules, t);
            crisp_step(vehicles, halt, RuleKind::R3, config.v_max);
            if (vehicles.back().position > scenario.road.cell_count) {
                return t;  // exit during transition t; t steps are safe
            }
        }
        return config.bench_horizon_steps;
    };
    bench.const_n_horizon =
        std::min(first_exit(fcm_scenario), first_exit(nasch_scenario));

    const std::uint64_t n = bench.vehicle_count;
    const std::uint64_t t_const = bench.const_n_horizon;
    bench.fcm_expected_ops = 5ULL * t_const * n;
    bench.nasch_expected_ops =
        static_cast<std::uint64_t>(config.bench_runs) * t_const * n;

    bench.fcm_ops = run_fcm(fcm_scenario, spec, bench.const_n_horizon, {})
                        .op_count;

    MonteCarloConfig count_mc;
    count_mc.runs = config.bench_runs;
    count_mc.horizon_steps = bench.const_n_horizon;
    count_mc.deceleration_probability = config.p;
    count_mc.master_seed = derive_seed(config.seed, kBenchStream);
    NaschParams params{config.v_max, config.nsh_variant};
    for (const RunTrace& run :
         monte_carlo(nasch_scenario, count_mc, {}, params)) {
        bench.nasch_mc_ops += run.op_count;
    }

    // Wall-clock comparison over the full bench horizon, sequential on
    // both sides.
    using clock = std::chrono::steady_clock;
    const int fcm_repeats = 5;
    const auto fcm_begin = clock::now();
    for (int r = 0; r < fcm_repeats; ++r) {
        run_fcm(fcm_scenario, spec, config.bench_horizon_steps, {});
    }
    const auto fcm_end = clock::now();
    bench.fcm_wall_s =
        std::chrono::duration<double>(fcm_end - fcm_begin).count() /
        fcm_repeats;

    MonteCarloConfig timing_mc = count_mc;
    timing_mc.horizon_steps = config.bench_horizon_steps;
    const auto nasch_begin = clock::now();
    monte_carlo(nasch_scenario, timing_mc, {}, params);
    const auto nasch_end = clock::now();
    bench.nasch_mc_wall_s =
        std::chrono::duration<double>(nasch_end - nasch_begin).count();

    bench.ratio = bench.nasch_mc_wall_s / bench.fcm_wall_s;
    return bench;
}

std::vector<std::string> cmd_bench(const ExperimentConfig& config) {
    const BenchResult bench = run_bench(config);
    json summary;
    summary["fcm_wall_s"] = bench.fcm_wall_s;
    summary["nasch_mc_wall_s"] = bench.nasch_mc_wall_s;
    summary["ratio"] = bench.ratio;
    summary["op_counts"] = {
        {"fcm", bench.fcm_ops},
        {"fcm_expected", bench.fcm_expected_ops},
        {"nasch_mc", bench.nasch_mc_ops},
        {"nasch_mc_expected", bench.nasch_expected_ops}};
    summary["const_n_horizon_steps"] = bench.const_n_horizon;
    summary["vehicle_count"] = bench.vehicle_count;
    summary["runs"] = config.bench_runs;
    summary["threads"] = 1;
    const auto path = output_path(config, "bench.json");
    write_json(path, summary);
    return {path.string()};
}

}  // namespace fctsim
