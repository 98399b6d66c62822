#ifndef FCTSIM_TRACES_HPP
#define FCTSIM_TRACES_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace fctsim {

// Position exceeded the stop line for the first time at state time `step`.
struct CrossingEvent {
    int step = 0;
    int vehicle_id = 0;
    int stop_line_index = 0;
};

// What a run should record beyond crossing events.
struct TraceSpec {
    int tracked_vehicle_id = -1;    // -1: track nothing
    int count_threshold_cell = -1;  // -1: no per-step vehicle counts
    bool record_cells = false;      // full (t, vehicle, cell, velocity) rows
};

struct CellRow {
    int step = 0;
    int vehicle_id = 0;
    int cell = 0;
    int velocity = 0;
};

// Observables of one crisp run. tracked_positions[t] is the tracked
// vehicle's cell at state time t, recorded until it leaves the road;
// vehicle_counts[t] counts vehicles at or below the threshold cell.
struct RunTrace {
    std::vector<CrossingEvent> crossings;
    std::vector<int> tracked_positions;
    std::vector<int> vehicle_counts;
    std::vector<CellRow> cells;
    int tracked_vehicle_id = -1;
    int steps = 0;
    std::uint64_t op_count = 0;  // rule applications performed
    double saturation_sample_veh_h =
        std::numeric_limits<double>::quiet_NaN();  // filled by the harness

    bool operator==(const RunTrace&) const = default;
};

// Fuzzy analogues; one slot per tuple component.
struct FcmCrossingEvent {
    int step = 0;
    int vehicle_id = 0;
    int stop_line_index = 0;
    int component = 0;
};

struct FcmCellRow {
    int step = 0;
    int vehicle_id = 0;
    std::array<int, 5> x{};
    std::array<int, 5> v{};
};

enum class DiagnosticKind {
    MiddleOutsideEnvelope,  // x^(m), m in 1..3, left [x^(0), x^(4)]
    EnvelopeInverted,       // x^(0) > x^(4)
    NonMonotonePosition,    // position tuple lost its ordering
};

struct DiagnosticEvent {
    int step = 0;
    int vehicle_id = 0;
    int component = 0;
    DiagnosticKind kind = DiagnosticKind::MiddleOutsideEnvelope;
};

// The model is allowed to run through envelope violations (the paper never
// rules them out); they are recorded here instead of being repaired.
struct Diagnostics {
    std::uint64_t middle_outside_envelope = 0;
    std::uint64_t envelope_inverted = 0;
    std::uint64_t non_monotone_position = 0;
    std::vector<DiagnosticEvent> first_events;  // capped sample

    void record(const DiagnosticEvent& event);
    bool clean() const {
        return middle_outside_envelope == 0 && envelope_inverted == 0 &&
               non_monotone_position == 0;
    }

    bool operator==(const Diagnostics&) const = default;
};

struct FcmTrace {
    std::vector<FcmCrossingEvent> crossings;
    std::vector<std::array<int, 5>> tracked_positions;
    std::vector<std::array<int, 5>> vehicle_counts;
    std::vector<FcmCellRow> cells;
    Diagnostics diagnostics;
    int tracked_vehicle_id = -1;
    int steps = 0;
    std::uint64_t op_count = 0;

    bool operator==(const FcmTrace&) const = default;
};

}  // namespace fctsim

#endif
