#include "fctsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fctsim/rules.hpp"

namespace fctsim {

Road build_road(double length_m, double cell_length_m,
                const std::vector<double>& stop_line_positions_m) {
    if (length_m <= 0 || cell_length_m <= 0) {
        throw InvalidState("build_road: non-positive geometry");
    }
    Road road;
    road.cell_length_m = cell_length_m;
    road.cell_count = static_cast<int>(std::ceil(length_m / cell_length_m));
    for (double pos_m : stop_line_positions_m) {
        const int cell = static_cast<int>(std::floor(pos_m / cell_length_m));
        if (cell < 1 || cell + 1 > road.cell_count) {
            std::ostringstream oss;
            oss << "build_road: stop line at " << pos_m << " m outside the road";
            throw InvalidState(oss.str());
        }
        road.stop_line_cells.push_back(cell);
        road.halt_cells.push_back(cell + 1);
    }
    if (!std::is_sorted(road.stop_line_cells.begin(), road.stop_line_cells.end()) ||
        std::adjacent_find(road.stop_line_cells.begin(),
                           road.stop_line_cells.end()) !=
            road.stop_line_cells.end()) {
        throw InvalidState("build_road: stop lines must be strictly increasing");
    }
    return road;
}

Road build_arterial(ModelGrid model) {
    const double cell = model == ModelGrid::Fcm ? 6.75 : 7.5;
    return build_road(3000.0, cell, {750.0, 1500.0, 2250.0});
}

bool is_green(const SignalSchedule& schedule, int t) {
    const int cycle = schedule.cycle_s;
    int local = (t - schedule.offset_s) % cycle;
    if (local < 0) local += cycle;
    const int red = cycle - schedule.green_s;
    if (schedule.red_first) return local >= red;
    return local < schedule.green_s;
}

std::vector<int> halt_cells_at(const Road& road,
                               const std::vector<SignalSchedule>& schedules,
                               int t) {
    std::vector<int> active;
    if (schedules.empty()) return active;
    if (schedules.size() != road.halt_cells.size()) {
        throw InvalidState("halt_cells_at: one schedule per stop line expected");
    }
    for (std::size_t k = 0; k < schedules.size(); ++k) {
        if (!is_green(schedules[k], t)) active.push_back(road.halt_cells[k]);
    }
    return active;
}

std::vector<std::pair<int, int>> green_step_ranges(const SignalSchedule& schedule,
                                                   int horizon_steps) {
    std::vector<std::pair<int, int>> ranges;
    int begin = -1;
    for (int t = 0; t < horizon_steps; ++t) {
        if (is_green(schedule, t)) {
            if (begin < 0) begin = t;
        } else if (begin >= 0) {
            ranges.emplace_back(begin, t);
            begin = -1;
        }
    }
    if (begin >= 0) ranges.emplace_back(begin, horizon_steps);
    return ranges;
}

std::vector<CrispVehicle> init_queues(const Road& road, int queue_length,
                                      bool probe) {
    if (queue_length < 0) throw InvalidState("init_queues: negative queue");

    // Queue k occupies [stop - q + 1, stop]; it may not reach the previous
    // stop line nor the probe cell.
    int previous_occupied = probe ? 1 : 0;
    for (int stop : road.stop_line_cells) {
        const int tail = stop - queue_length + 1;
        if (queue_length > 0 && tail <= previous_occupied) {
            std::ostringstream oss;
            oss << "init_queues: queue of " << queue_length
                << " ahead of cell " << stop << " collides at cell " << tail;
            throw QueueOverflow(oss.str());
        }
        previous_occupied = stop;
    }

    std::vector<CrispVehicle> vehicles;
    int id = 0;
    if (probe) vehicles.push_back({id++, 1, 0});
    for (int stop : road.stop_line_cells) {
        for (int cell = stop - queue_length + 1; cell <= stop; ++cell) {
            vehicles.push_back({id++, cell, 0});
        }
    }
    return vehicles;
}

Scenario make_arterial_scenario(ModelGrid model, int queue_length, int cycle_s,
                                int green_s, const std::vector<int>& offsets_s) {
    Scenario scenario;
    scenario.road = build_arterial(model);
    scenario.queue_length = queue_length;
    scenario.probe = true;
    for (std::size_t k = 0; k < scenario.road.stop_line_cells.size(); ++k) {
        SignalSchedule schedule;
        schedule.cycle_s = cycle_s;
        schedule.green_s = green_s;
        schedule.red_first = true;
        schedule.offset_s = k < offsets_s.size() ? offsets_s[k] : 0;
        scenario.schedules.push_back(schedule);
    }
    return scenario;
}

Scenario make_discharge_scenario(int queue_length, double cell_length_m,
                                 int margin_cells) {
    Scenario scenario;
    scenario.road.cell_length_m = cell_length_m;
    scenario.road.cell_count = queue_length + margin_cells;
    scenario.road.stop_line_cells = {queue_length};
    scenario.road.halt_cells = {queue_length + 1};
    scenario.queue_length = queue_length;
    scenario.probe = false;
    return scenario;  // unsignalised: green for the whole horizon
}

int discharge_queue_for(int v_max, int horizon_steps, double seconds_per_step) {
    const double worst_rate_veh_h =
        rule_saturation(RuleKind::R3, v_max, seconds_per_step);
    const double green_hours = horizon_steps * seconds_per_step / 3600.0;
    return static_cast<int>(std::ceil(worst_rate_veh_h * green_hours * 1.1)) + 16;
}

}  // namespace fctsim
