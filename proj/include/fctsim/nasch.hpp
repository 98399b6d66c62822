#ifndef FCTSIM_NASCH_HPP
#define FCTSIM_NASCH_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "fctsim/network.hpp"
#include "fctsim/rules.hpp"
#include "fctsim/traces.hpp"

namespace fctsim {

struct NaschParams {
    int v_max = 2;
    NshVariant nsh_variant = NshVariant::Standard;
};

struct MonteCarloConfig {
    int runs = 100;            // K
    int horizon_steps = 3600;  // T
    double deceleration_probability = 0.2;
    std::uint64_t master_seed = 1;
};

// One synchronous stochastic update. draws[i] is the xi for vehicles[i]
// (rear to front); xi < p selects NSL, otherwise NSH. Gaps are taken from
// the pre-step configuration; halt_cells must be sorted ascending.
void nasch_step(std::vector<CrispVehicle>& vehicles,
                std::span<const int> halt_cells, double p,
                std::span<const double> draws, const NaschParams& params = {});

// Synchronous update applying one fixed deterministic rule to every
// vehicle; the oracle counterpart of nasch_step.
void crisp_step(std::vector<CrispVehicle>& vehicles,
                std::span<const int> halt_cells, RuleKind rule, int v_max,
                NshVariant nsh = NshVariant::Standard);

// Full stochastic run; a pure function of (scenario, p, horizon, seed).
RunTrace run_nasch(const Scenario& scenario, double p, int horizon_steps,
                   std::uint64_t seed, const TraceSpec& trace = {},
                   const NaschParams& params = {});

// Deterministic run with one rule for every vehicle and step.
RunTrace run_deterministic(const Scenario& scenario, RuleKind rule,
                           int horizon_steps, const TraceSpec& trace = {},
                           int v_max = 2,
                           NshVariant nsh = NshVariant::Standard);

// K independent runs, run k seeded with derive_seed(master_seed, k).
// Aggregation happens strictly after the runs; traces come back in run
// order, so the result is reproducible.
std::vector<RunTrace> monte_carlo(const Scenario& scenario,
                                  const MonteCarloConfig& config,
                                  const TraceSpec& trace = {},
                                  const NaschParams& params = {});

struct SweepRow {
    double p = 0.0;
    double median_veh_h = 0.0;
    double pct5_veh_h = 0.0;
    double pct95_veh_h = 0.0;
    double spread_veh_h = 0.0;  // pct95 - pct5
};

// Monte Carlo saturation statistics per deceleration probability. Each p
// gets a fresh derived stream; saturation is measured from crossings of
// scenario stop line `measured_stop_line` during its green ranges (the
// whole horizon when the scenario is unsignalised).
std::vector<SweepRow> sweep_p(const Scenario& scenario,
                              std::span<const double> p_values, int runs,
                              int horizon_steps, std::uint64_t master_seed,
                              int measured_stop_line = 0,
                              double seconds_per_step = 1.0,
                              const NaschParams& params = {});

// Saturation samples (vehicles/hour) of a Monte Carlo batch, one per run.
// Unsignalised scenarios measure queue discharge: crossings over the green
// time up to the last crossing. Signalised ones count crossings inside the
// measured stop line's green ranges across the horizon.
std::vector<double> saturation_samples(std::span<const RunTrace> runs,
                                       const Scenario& scenario,
                                       int measured_stop_line,
                                       int horizon_steps,
                                       double seconds_per_step);

}  // namespace fctsim

#endif
