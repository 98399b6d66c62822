#ifndef FCTSIM_ANALYSIS_HPP
#define FCTSIM_ANALYSIS_HPP

#include <span>
#include <utility>
#include <vector>

#include "fctsim/fcm.hpp"
#include "fctsim/ofn.hpp"
#include "fctsim/rules.hpp"
#include "fctsim/traces.hpp"

namespace fctsim {

// Metric expressed per tuple component (seconds for travel times,
// vehicles for counts). The tuple is not required to be monotone: travel
// times order opposite to positions.
struct FuzzyMetric {
    Ofn value;
};

// Linear interpolation between order statistics at fractional rank
// q*(n-1) (0-based). Throws EmptySamples.
double quantile(std::span<const double> samples, double q);

// Crossings falling inside the green ranges, scaled to vehicles per hour
// of green. Throws NoGreenTime when the ranges are empty.
double measure_saturation_flow(std::span<const int> crossing_steps,
                               std::span<const std::pair<int, int>> green_ranges,
                               double seconds_per_step);

struct SaturationFit {
    Ofn s_veh_h;
    int clamped_samples = 0;  // nonzero means some samples left the support
};

// Percentile fit of the fuzzy saturation target: endpoints from the rule
// pair, inner components from the 5th/50th/95th percentiles. Samples
// outside the support are clamped and counted.
SaturationFit estimate_saturation_fuzzy(std::span<const double> samples,
                                        const RulePairParams& pair);

// Fuzzy-grid cell length equalising free-flow speed with a NaSch grid:
// base * (v_max - p) / v_max.
double fcm_cell_length(double base_cell_m, int v_max, double p);

// Per-component first time the tracked vehicle's position exceeds the
// threshold cell, in seconds. Throws NeverCrossed listing the components
// that never did.
FuzzyMetric fuzzy_travel_time(const FcmTrace& trace, int vehicle_id,
                              int threshold_cell, double seconds_per_step);

// Per-component number of vehicles at or below the threshold cell.
std::array<int, 5> fuzzy_vehicle_count(std::span<const FuzzyVehicle> vehicles,
                                       int threshold_cell);

// Fraction of (run, step) pairs whose crisp tracked position, in meters,
// lies within the fuzzy envelope [x^(0) - 1, x^(4) + 1] cells, also in
// meters. Pairs are counted while both traces still track the vehicle.
double envelope_coverage(const FcmTrace& fcm_trace, double fcm_cell_m,
                         std::span<const RunTrace> runs, double crisp_cell_m);

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
};

// Fixed-width histogram, 20 bins of 18 veh/h across [1440, 1800] by
// default. Samples outside land in the edge bins.
std::vector<HistogramBin> saturation_histogram(std::span<const double> samples,
                                               double lo = 1440.0,
                                               double hi = 1800.0,
                                               int bins = 20);

// Spearman rank correlation; exposed for the sweep's spread-vs-p check.
double spearman_rank_correlation(std::span<const double> x,
                                 std::span<const double> y);

}  // namespace fctsim

#endif
