#ifndef FCTSIM_NETWORK_HPP
#define FCTSIM_NETWORK_HPP

#include <utility>
#include <vector>

#include "fctsim/errors.hpp"

namespace fctsim {

enum class ModelGrid { Fcm, Nasch };

// One-way single-lane road. Cells are 1-based; a stop line is the last
// cell a queued vehicle may occupy and its halt cell (stop line + 1) is
// the cell inserted into the active set while the signal shows red.
struct Road {
    int cell_count = 0;
    double cell_length_m = 0.0;
    std::vector<int> stop_line_cells;  // strictly increasing
    std::vector<int> halt_cells;       // stop_line_cells[k] + 1

    double stop_line_meters(int k) const {
        return stop_line_cells[k] * cell_length_m;
    }
};

// Fixed-time signal. Yellow is counted as part of green. With red_first
// and zero offset, red covers local cycle time [0, cycle_s - green_s).
struct SignalSchedule {
    int cycle_s = 60;
    int green_s = 30;
    bool red_first = true;
    int offset_s = 0;
};

// Initial-condition description shared by both engines. queue_length
// vehicles are packed bumper to bumper ending at each stop line, plus one
// probe vehicle in cell 1 whose trajectory the experiments track.
struct Scenario {
    Road road;
    std::vector<SignalSchedule> schedules;  // one per stop line; empty = unsignalised
    int queue_length = 0;
    bool probe = true;
};

// Vehicle of the crisp engines. id 0 is the probe when present; ids count
// up rear to front.
struct CrispVehicle {
    int id = 0;
    int position = 0;  // cell index
    int velocity = 0;  // cells per step
};

// Generic grid builder: cell_count = ceil(length/cell), stop line at
// floor(position/cell) for each marked location.
Road build_road(double length_m, double cell_length_m,
                const std::vector<double>& stop_line_positions_m);

// The three-intersection 3 km arterial: 6.75 m cells, 445 cells and stop
// lines {111, 222, 333} for the fuzzy grid; 7.5 m cells, 400 cells and
// stop lines {100, 200, 300} for the NaSch grid.
Road build_arterial(ModelGrid model);

bool is_green(const SignalSchedule& schedule, int t);

// Active halt cells for the update at step t (sorted ascending). Empty
// schedule list means no signal ever activates.
std::vector<int> halt_cells_at(const Road& road,
                               const std::vector<SignalSchedule>& schedules,
                               int t);

// Green step ranges [begin, end) of one schedule within [0, horizon).
std::vector<std::pair<int, int>> green_step_ranges(const SignalSchedule& schedule,
                                                   int horizon_steps);

// Initial vehicle sequence, ascending by position: the optional probe at
// cell 1, then queue_length stopped vehicles ending at each stop line.
// Throws QueueOverflow when queues would overlap each other or the probe.
std::vector<CrispVehicle> init_queues(const Road& road, int queue_length,
                                      bool probe);

Scenario make_arterial_scenario(ModelGrid model, int queue_length, int cycle_s,
                                int green_s,
                                const std::vector<int>& offsets_s = {});

// Single stop line fed by a standing queue that cannot empty within the
// horizon; no signal (green throughout), used for saturation measurement.
Scenario make_discharge_scenario(int queue_length, double cell_length_m = 7.5,
                                 int margin_cells = 20);

// Queue length that outlasts a measurement horizon at the worst-case
// (p = 0, i.e. R3) discharge rate.
int discharge_queue_for(int v_max, int horizon_steps, double seconds_per_step);

}  // namespace fctsim

#endif
