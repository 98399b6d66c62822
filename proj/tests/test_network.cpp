#include <cmath>
#include <set>

#include "doctest.h"
#include "fctsim/network.hpp"

using namespace fctsim;

TEST_CASE("arterial grids match the reference geometry") {
    const Road fcm = build_arterial(ModelGrid::Fcm);
    CHECK(fcm.cell_count == 445);
    CHECK(fcm.cell_length_m == doctest::Approx(6.75));
    CHECK(fcm.stop_line_cells == std::vector<int>{111, 222, 333});
    CHECK(fcm.halt_cells == std::vector<int>{112, 223, 334});

    const Road nasch = build_arterial(ModelGrid::Nasch);
    CHECK(nasch.cell_count == 400);
    CHECK(nasch.cell_length_m == doctest::Approx(7.5));
    CHECK(nasch.stop_line_cells == std::vector<int>{100, 200, 300});
    CHECK(nasch.halt_cells == std::vector<int>{101, 201, 301});

    // Stop lines sit within one cell of the 750 m multiples on both grids.
    for (const Road& road : {fcm, nasch}) {
        for (int k = 0; k < 3; ++k) {
            const double target = 750.0 * (k + 1);
            CHECK(std::abs(road.stop_line_meters(k) - target) <=
                  road.cell_length_m);
        }
    }
    CHECK(nasch.stop_line_meters(0) == doctest::Approx(750.0));
    CHECK(nasch.stop_line_meters(1) == doctest::Approx(1500.0));
    CHECK(nasch.stop_line_meters(2) == doctest::Approx(2250.0));
}

TEST_CASE("halt cells follow the red phases") {
    const Scenario scenario =
        make_arterial_scenario(ModelGrid::Fcm, 30, 60, 30);
    const Road& road = scenario.road;

    CHECK(halt_cells_at(road, scenario.schedules, 0) ==
          std::vector<int>{112, 223, 334});
    CHECK(halt_cells_at(road, scenario.schedules, 29) ==
          std::vector<int>{112, 223, 334});
    CHECK(halt_cells_at(road, scenario.schedules, 30).empty());
    CHECK(halt_cells_at(road, scenario.schedules, 59).empty());
    CHECK(halt_cells_at(road, scenario.schedules, 60) ==
          std::vector<int>{112, 223, 334});

    // Periodicity and active fraction over one cycle.
    int red_steps = 0;
    for (int t = 0; t < 60; ++t) {
        const auto active = halt_cells_at(road, scenario.schedules, t);
        CHECK(active == halt_cells_at(road, scenario.schedules, t + 60));
        if (!active.empty()) ++red_steps;
    }
    CHECK(red_steps == 30);

    // Unsignalised scenarios never activate a halt cell.
    CHECK(halt_cells_at(road, {}, 0).empty());
}

TEST_CASE("signal offsets shift the phase") {
    SignalSchedule schedule{60, 30, true, 10};
    CHECK_FALSE(is_green(schedule, 10));  // local time 0: red
    CHECK(is_green(schedule, 40));        // local time 30: green
    CHECK(is_green(schedule, 5));         // local time 55: still green

    const auto ranges = green_step_ranges(SignalSchedule{60, 30, true, 0}, 150);
    CHECK(ranges == std::vector<std::pair<int, int>>{{30, 60}, {90, 120}, {150, 150}} ==
          false);  // guard against accidental empty trailing range
    CHECK(ranges == std::vector<std::pair<int, int>>{{30, 60}, {90, 120}});
}

TEST_CASE("init_queues packs queues against the stop lines") {
    const Road road = build_arterial(ModelGrid::Fcm);

    const std::vector<CrispVehicle> vehicles = init_queues(road, 2, true);
    std::vector<int> cells;
    for (const CrispVehicle& v : vehicles) cells.push_back(v.position);
    CHECK(cells == std::vector<int>{1, 110, 111, 221, 222, 332, 333});
    for (const CrispVehicle& v : vehicles) CHECK(v.velocity == 0);
    CHECK(vehicles.front().id == 0);  // probe

    // Only the probe for an empty queue.
    const std::vector<CrispVehicle> probe_only = init_queues(road, 0, true);
    REQUIRE(probe_only.size() == 1);
    CHECK(probe_only[0].position == 1);

    // One vehicle per cell, strictly ordered.
    const std::vector<CrispVehicle> heavy = init_queues(road, 100, true);
    std::set<int> occupied;
    for (const CrispVehicle& v : heavy) {
        CHECK(occupied.insert(v.position).second);
    }
    for (std::size_t i = 0; i + 1 < heavy.size(); ++i) {
        CHECK(heavy[i].position < heavy[i + 1].position);
    }
}

TEST_CASE("init_queues rejects overlapping queues") {
    const Road road = build_arterial(ModelGrid::Fcm);
    CHECK_THROWS_AS(init_queues(road, 120, true), QueueOverflow);
    // The first queue may not reach the probe cell.
    CHECK_THROWS_AS(init_queues(road, 111, true), QueueOverflow);
    CHECK_NOTHROW(init_queues(road, 110, true));
    // Without the probe, the full first block is available.
    CHECK_NOTHROW(init_queues(road, 111, false));
    CHECK_THROWS_AS(init_queues(road, 112, false), QueueOverflow);
}

TEST_CASE("discharge scenario geometry") {
    const Scenario scenario = make_discharge_scenario(70);
    CHECK(scenario.road.stop_line_cells == std::vector<int>{70});
    CHECK(scenario.road.halt_cells == std::vector<int>{71});
    CHECK(scenario.road.cell_count == 90);
    CHECK(scenario.schedules.empty());
    CHECK_FALSE(scenario.probe);
    const auto vehicles =
        init_queues(scenario.road, scenario.queue_length, scenario.probe);
    CHECK(vehicles.size() == 70);
    CHECK(vehicles.front().position == 1);
    CHECK(vehicles.back().position == 70);
}
