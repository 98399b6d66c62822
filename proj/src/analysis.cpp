#include "fctsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fctsim {

double quantile(std::span<const double> samples, double q) {
    if (samples.empty()) throw EmptySamples("quantile of an empty sample set");
    if (q < 0.0 || q > 1.0) throw InvalidState("quantile: q outside [0, 1]");

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());

    const double rank = q * (sorted.size() - 1);
    const std::size_t lower = static_cast<std::size_t>(std::floor(rank));
    if (lower + 1 >= sorted.size()) return sorted.back();
    const double fraction = rank - static_cast<double>(lower);
    return sorted[lower] + fraction * (sorted[lower + 1] - sorted[lower]);
}

double measure_saturation_flow(std::span<const int> crossing_steps,
                               std::span<const std::pair<int, int>> green_ranges,
                               double seconds_per_step) {
    long green_steps = 0;
    for (const auto& [begin, end] : green_ranges) {
        green_steps += std::max(0, end - begin);
    }
    const double green_seconds = green_steps * seconds_per_step;
    if (green_seconds <= 0.0) {
        throw NoGreenTime("saturation flow needs nonzero green time");
    }

    // A crossing recorded at state time t was produced by the transition
    // at t - 1; that transition's signal state decides membership.
    long crossings = 0;
    for (int step : crossing_steps) {
        const int transition = step - 1;
        for (const auto& [begin, end] : green_ranges) {
            if (transition >= begin && transition < end) {
                ++crossings;
                break;
            }
        }
    }
    return crossings * 3600.0 / green_seconds;
}

SaturationFit estimate_saturation_fuzzy(std::span<const double> samples,
                                        const RulePairParams& pair) {
    if (samples.empty()) {
        throw EmptySamples("saturation fit of an empty sample set");
    }
    const double low = pair.saturation_low_veh_h();
    const double high = pair.saturation_high_veh_h();

    SaturationFit fit;
    std::vector<double> clamped(samples.begin(), samples.end());
    for (double& sample : clamped) {
        if (sample < low || sample > high) {
            sample = std::clamp(sample, low, high);
            ++fit.clamped_samples;
        }
    }

    fit.s_veh_h = make_ofn(low, quantile(clamped, 0.05),
                           quantile(clamped, 0.5), quantile(clamped, 0.95),
                           high);
    return fit;
}

double fcm_cell_length(double base_cell_m, int v_max, double p) {
    if (v_max < 1 || p < 0.0 || p >= v_max) {
        throw InvalidState("fcm_cell_length: requires 0 <= p < v_max");
    }
    return base_cell_m * (v_max - p) / v_max;
}

FuzzyMetric fuzzy_travel_time(const FcmTrace& trace, int vehicle_id,
                              int threshold_cell, double seconds_per_step) {
    if (trace.tracked_vehicle_id != vehicle_id ||
        trace.tracked_positions.empty()) {
        throw InvalidState("fuzzy_travel_time: vehicle was not tracked");
    }

    FuzzyMetric metric;
    std::vector<int> never;
    for (int m = 0; m < kOfnComponents; ++m) {
        int crossed_at = -1;
        for (std::size_t t = 1; t < trace.tracked_positions.size(); ++t) {
            if (trace.tracked_positions[t][m] > threshold_cell) {
                crossed_at = static_cast<int>(t);
                break;
            }
        }
        if (crossed_at < 0) {
            never.push_back(m);
        } else {
            metric.value[m] = crossed_at * seconds_per_step;
        }
    }
    if (!never.empty()) throw NeverCrossed(never);
    return metric;
}

std::array<int, 5> fuzzy_vehicle_count(std::span<const FuzzyVehicle> vehicles,
                                       int threshold_cell) {
    std::array<int, 5> counts{};
    for (const FuzzyVehicle& vehicle : vehicles) {
        for (int m = 0; m < kOfnComponents; ++m) {
            if (vehicle.position[m] <= threshold_cell) ++counts[m];
        }
    }
    return counts;
}

double envelope_coverage(const FcmTrace& fcm_trace, double fcm_cell_m,
                         std::span<const RunTrace> runs, double crisp_cell_m) {
    if (fcm_trace.tracked_positions.empty()) {
        throw InvalidState("envelope_coverage: fuzzy trace tracked nothing");
    }
    long total = 0;
    long covered = 0;
    for (const RunTrace& run : runs) {
        const std::size_t steps = std::min(fcm_trace.tracked_positions.size(),
                                           run.tracked_positions.size());
        for (std::size_t t = 0; t < steps; ++t) {
            const double meters = run.tracked_positions[t] * crisp_cell_m;
            const double lo =
                (fcm_trace.tracked_positions[t][0] - 1) * fcm_cell_m;
            const double hi =
                (fcm_trace.tracked_positions[t][4] + 1) * fcm_cell_m;
            ++total;
            if (meters >= lo && meters <= hi) ++covered;
        }
    }
    if (total == 0) {
        throw InvalidState("envelope_coverage: no overlapping steps");
    }
    return static_cast<double>(covered) / static_cast<double>(total);
}

std::vector<HistogramBin> saturation_histogram(std::span<const double> samples,
                                               double lo, double hi,
                                               int bins) {
    if (bins < 1 || hi <= lo) {
        throw InvalidState("saturation_histogram: bad binning");
    }
    std::vector<HistogramBin> histogram(bins);
    const double width = (hi - lo) / bins;
    for (int b = 0; b < bins; ++b) {
        histogram[b].lo = lo + b * width;
        histogram[b].hi = lo + (b + 1) * width;
    }
    for (double sample : samples) {
        int b = static_cast<int>(std::floor((sample - lo) / width));
        b = std::clamp(b, 0, bins - 1);
        ++histogram[b].count;
    }
    return histogram;
}

namespace {

std::vector<double> ranks_with_ties(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b];
    });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double average = (static_cast<double>(i) + j) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = average;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman_rank_correlation(std::span<const double> x,
                                 std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw InvalidState("spearman: paired samples of size >= 2 required");
    }
    const std::vector<double> rx = ranks_with_ties(x);
    const std::vector<double> ry = ranks_with_ties(y);

    const double n = static_cast<double>(x.size());
    const double mean = (n + 1.0) / 2.0;
    double num = 0.0, dx = 0.0, dy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (rx[i] - mean) * (ry[i] - mean);
        dx += (rx[i] - mean) * (rx[i] - mean);
        dy += (ry[i] - mean) * (ry[i] - mean);
    }
    if (dx == 0.0 || dy == 0.0) {
        throw InvalidState("spearman: a sample has no rank variation");
    }
    return num / std::sqrt(dx * dy);
}

}  // namespace fctsim
