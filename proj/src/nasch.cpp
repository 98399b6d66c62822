#include "fctsim/nasch.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

#include "fctsim/analysis.hpp"
#include "fctsim/rng.hpp"

namespace fctsim {

namespace {

constexpr int kNoConstraint = std::numeric_limits<int>::max() / 2;

// Gap to the lead vehicle and to the nearest active halt cell ahead; when
// neither constrains, the free-flow fallback is v_max.
int crisp_gap(const std::vector<CrispVehicle>& vehicles, std::size_t i,
              std::span<const int> halt_cells, int v_max) {
    const int pos = vehicles[i].position;
    const bool has_lead = i + 1 < vehicles.size();
    const int lead_gap =
        has_lead ? vehicles[i + 1].position - pos - 1 : kNoConstraint;
    int signal_gap = lead_gap;
    const auto it =
        std::upper_bound(halt_cells.begin(), halt_cells.end(), pos);
    if (it != halt_cells.end()) signal_gap = *it - pos - 1;
    const int gap = std::min(lead_gap, signal_gap);
    return gap >= kNoConstraint ? v_max : gap;
}

void check_configuration(const std::vector<CrispVehicle>& vehicles,
                         std::span<const int> halt_cells, int step) {
    for (std::size_t i = 0; i + 1 < vehicles.size(); ++i) {
        if (vehicles[i].position >= vehicles[i + 1].position) {
            std::ostringstream oss;
            oss << "vehicle order violated at step " << step << " (cells "
                << vehicles[i].position << ", " << vehicles[i + 1].position
                << ")";
            throw InvalidState(oss.str());
        }
    }
    (void)halt_cells;
}

// One synchronous update; pick(i) chooses the rule for vehicles[i]. The
// ascending iteration reads only not-yet-updated lead positions, so the
// update is synchronous without a state copy.
template <typename PickRule>
void step_impl(std::vector<CrispVehicle>& vehicles,
               std::span<const int> halt_cells, int v_max, NshVariant nsh,
               PickRule&& pick, std::uint64_t& ops, int step) {
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        CrispVehicle& vehicle = vehicles[i];
        const int gap = crisp_gap(vehicles, i, halt_cells, v_max);
        const RuleOutcome out =
            apply_rule(pick(i), vehicle.velocity, gap, v_max, nsh);
        ++ops;
        if (out.position_delta > gap) {
            throw InvalidState("rule advanced a vehicle beyond its gap");
        }
        vehicle.velocity = out.velocity;
        vehicle.position += out.position_delta;
    }
    check_configuration(vehicles, halt_cells, step);
}

struct CrispRun {
    const Scenario& scenario;
    int v_max;
    NshVariant nsh;

    template <typename PickRule>
    RunTrace run(int horizon_steps, const TraceSpec& trace_spec,
                 PickRule&& pick_for_step) {
        const Road& road = scenario.road;
        std::vector<CrispVehicle> vehicles =
            init_queues(road, scenario.queue_length, scenario.probe);
        std::vector<int> next_stop(vehicles.size(), 0);
        for (std::size_t i = 0; i < vehicles.size(); ++i) {
            next_stop[i] = static_cast<int>(
                std::lower_bound(road.stop_line_cells.begin(),
                                 road.stop_line_cells.end(),
                                 vehicles[i].position) -
                road.stop_line_cells.begin());
        }

        RunTrace trace;
        trace.steps = horizon_steps;
        trace.tracked_vehicle_id = trace_spec.tracked_vehicle_id;

        int tracked_index = -1;
        if (trace_spec.tracked_vehicle_id >= 0) {
            for (std::size_t i = 0; i < vehicles.size(); ++i) {
                if (vehicles[i].id == trace_spec.tracked_vehicle_id) {
                    tracked_index = static_cast<int>(i);
                    break;
                }
            }
            if (tracked_index < 0) {
                throw InvalidState("tracked vehicle not in the scenario");
            }
            trace.tracked_positions.push_back(
                vehicles[tracked_index].position);
        }

        const bool counting = trace_spec.count_threshold_cell >= 0;
        auto count_vehicles = [&]() {
            int n = 0;
            for (const CrispVehicle& v : vehicles) {
                if (v.position <= trace_spec.count_threshold_cell) ++n;
            }
            return n;
        };
        if (counting) trace.vehicle_counts.push_back(count_vehicles());
        if (trace_spec.record_cells) {
            for (const CrispVehicle& v : vehicles) {
                trace.cells.push_back({0, v.id, v.position, v.velocity});
            }
        }

        std::vector<int> halt_buffer;
        for (int t = 0; t < horizon_steps; ++t) {
            halt_buffer = halt_cells_at(road, scenario.schedules, t);
            auto pick = pick_for_step(t);
            step_impl(vehicles, halt_buffer, v_max, nsh, pick, trace.op_count,
                      t + 1);

            const int state_time = t + 1;
            for (std::size_t i = 0; i < vehicles.size(); ++i) {
                const int n_stops =
                    static_cast<int>(road.stop_line_cells.size());
                while (next_stop[i] < n_stops &&
                       vehicles[i].position >
                           road.stop_line_cells[next_stop[i]]) {
                    trace.crossings.push_back(
                        {state_time, vehicles[i].id, next_stop[i]});
                    ++next_stop[i];
                }
            }

            while (!vehicles.empty() &&
                   vehicles.back().position > road.cell_count) {
                vehicles.pop_back();
                next_stop.pop_back();
            }

            if (tracked_index >= 0 &&
                tracked_index < static_cast<int>(vehicles.size())) {
                trace.tracked_positions.push_back(
                    vehicles[tracked_index].position);
            } else {
                tracked_index = -1;
            }
            if (counting) trace.vehicle_counts.push_back(count_vehicles());
            if (trace_spec.record_cells) {
                for (const CrispVehicle& v : vehicles) {
                    trace.cells.push_back(
                        {state_time, v.id, v.position, v.velocity});
                }
            }

            if (vehicles.empty()) {
                if (counting) {
                    trace.vehicle_counts.resize(horizon_steps + 1, 0);
                }
                break;
            }
        }
        return trace;
    }
};

}  // namespace

void nasch_step(std::vector<CrispVehicle>& vehicles,
                std::span<const int> halt_cells, double p,
                std::span<const double> draws, const NaschParams& params) {
    if (draws.size() < vehicles.size()) {
        throw InvalidState("nasch_step: one draw per vehicle required");
    }
    std::uint64_t ops = 0;
    step_impl(
        vehicles, halt_cells, params.v_max, params.nsh_variant,
        [&](std::size_t i) {
            return draws[i] < p ? RuleKind::NSL : RuleKind::NSH;
        },
        ops, 0);
}

void crisp_step(std::vector<CrispVehicle>& vehicles,
                std::span<const int> halt_cells, RuleKind rule, int v_max,
                NshVariant nsh) {
    std::uint64_t ops = 0;
    step_impl(
        vehicles, halt_cells, v_max, nsh, [&](std::size_t) { return rule; },
        ops, 0);
}

RunTrace run_nasch(const Scenario& scenario, double p, int horizon_steps,
                   std::uint64_t seed, const TraceSpec& trace,
                   const NaschParams& params) {
    if (p < 0.0 || p > 1.0) {
        throw InvalidState("run_nasch: p outside [0, 1]");
    }
    std::mt19937_64 gen(seed);
    CrispRun runner{scenario, params.v_max, params.nsh_variant};
    return runner.run(horizon_steps, trace, [&](int) {
        return [&](std::size_t) {
            return uniform01(gen) < p ? RuleKind::NSL : RuleKind::NSH;
        };
    });
}

RunTrace run_deterministic(const Scenario& scenario, RuleKind rule,
                           int horizon_steps, const TraceSpec& trace,
                           int v_max, NshVariant nsh) {
    CrispRun runner{scenario, v_max, nsh};
    return runner.run(horizon_steps, trace,
                      [&](int) { return [rule](std::size_t) { return rule; }; });
}

std::vector<RunTrace> monte_carlo(const Scenario& scenario,
                                  const MonteCarloConfig& config,
                                  const TraceSpec& trace,
                                  const NaschParams& params) {
    if (config.runs < 1 || config.horizon_steps < 1 ||
        config.deceleration_probability < 0.0 ||
        config.deceleration_probability > 1.0) {
        throw InvalidState("monte_carlo: invalid configuration");
    }
    std::vector<RunTrace> traces;
    traces.reserve(config.runs);
    for (int k = 0; k < config.runs; ++k) {
        traces.push_back(run_nasch(scenario, config.deceleration_probability,
                                   config.horizon_steps,
                                   derive_seed(config.master_seed, k), trace,
                                   params));
    }
    return traces;
}

std::vector<double> saturation_samples(std::span<const RunTrace> runs,
                                       const Scenario& scenario,
                                       int measured_stop_line,
                                       int horizon_steps,
                                       double seconds_per_step) {
    std::vector<double> samples;
    samples.reserve(runs.size());
    std::vector<int> steps;
    std::vector<std::pair<int, int>> green;
    for (const RunTrace& run : runs) {
        steps.clear();
        for (const CrossingEvent& event : run.crossings) {
            if (event.stop_line_index == measured_stop_line) {
                steps.push_back(event.step);
            }
        }
        green.clear();
        if (scenario.schedules.empty()) {
            // Queue-discharge measurement: green time runs until the last
            // vehicle clears the line, so the sample is the mean discharge
            // rate of the released queue.
            const int last = steps.empty() ? horizon_steps : steps.back();
            green.emplace_back(0, last);
        } else {
            green = green_step_ranges(
                scenario.schedules.at(measured_stop_line), horizon_steps);
        }
        samples.push_back(
            measure_saturation_flow(steps, green, seconds_per_step));
    }
    return samples;
}

std::vector<SweepRow> sweep_p(const Scenario& scenario,
                              std::span<const double> p_values, int runs,
                              int horizon_steps, std::uint64_t master_seed,
                              int measured_stop_line, double seconds_per_step,
                              const NaschParams& params) {
    std::vector<SweepRow> rows;
    rows.reserve(p_values.size());
    for (std::size_t i = 0; i < p_values.size(); ++i) {
        MonteCarloConfig config;
        config.runs = runs;
        config.horizon_steps = horizon_steps;
        config.deceleration_probability = p_values[i];
        config.master_seed = derive_seed(master_seed, 0x5eed0000ULL + i);

        const std::vector<RunTrace> traces =
            monte_carlo(scenario, config, {}, params);
        const std::vector<double> samples = saturation_samples(
            traces, scenario, measured_stop_line, horizon_steps,
            seconds_per_step);

        SweepRow row;
        row.p = p_values[i];
        row.median_veh_h = quantile(samples, 0.5);
        row.pct5_veh_h = quantile(samples, 0.05);
        row.pct95_veh_h = quantile(samples, 0.95);
        row.spread_veh_h = row.pct95_veh_h - row.pct5_veh_h;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace fctsim
