#include "fctsim/fcm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fctsim/analysis.hpp"

namespace fctsim {

namespace {

constexpr double kUnconstrained = std::numeric_limits<double>::infinity();

double to_veh_step(double veh_h, double seconds_per_step) {
    return veh_h * seconds_per_step / 3600.0;
}

}  // namespace

Ofn BinaryMask::as_ofn() const {
    Ofn result;
    for (int m = 0; m < kOfnComponents; ++m) {
        result[m] = static_cast<double>(b[m]);
    }
    return result;
}

double saturation_of_normalized_position(double xbar,
                                         const RulePairParams& pair) {
    const double v = pair.v_max_low + xbar * (pair.v_max_high - pair.v_max_low);
    const double g = pair.gap_low + xbar * (pair.gap_high - pair.gap_low);
    return v / (g + 1.0);
}

double alpha_of_saturation(double s_veh_step, const RulePairParams& pair) {
    const double s_low = pair.saturation_low_veh_step();
    const double s_high = pair.saturation_high_veh_step();
    const double tolerance = 1e-9 * std::max(1.0, s_high - s_low);
    if (s_veh_step < s_low - tolerance || s_veh_step > s_high + tolerance) {
        std::ostringstream oss;
        oss << "saturation " << s_veh_step << " veh/step outside support ["
            << s_low << ", " << s_high << "]";
        throw OutOfSupport(oss.str());
    }
    const double denominator =
        (pair.v_max_high - pair.v_max_low) -
        s_veh_step * (pair.gap_high - pair.gap_low);
    if (denominator == 0.0) {
        throw DegeneratePair("rule pair spans no saturation interval");
    }
    return (s_veh_step * (pair.gap_low + 1) - pair.v_max_low) / denominator;
}

std::array<double, 3> compute_alpha(const Ofn& s_veh_h,
                                    const RulePairParams& pair) {
    std::array<double, 3> alpha{};
    for (int m = 1; m <= 3; ++m) {
        alpha[m - 1] = alpha_of_saturation(
            to_veh_step(s_veh_h[m], pair.seconds_per_step), pair);
    }
    return alpha;
}

SaturationSpec make_saturation_spec(const Ofn& s_veh_h,
                                    const RulePairParams& pair) {
    const double scale = std::max(1.0, pair.saturation_high_veh_h());
    if (std::abs(s_veh_h[0] - pair.saturation_low_veh_h()) > 1e-6 * scale ||
        std::abs(s_veh_h[4] - pair.saturation_high_veh_h()) > 1e-6 * scale) {
        throw OutOfSupport(
            "S support endpoints must equal the rule pair saturations");
    }
    SaturationSpec spec;
    spec.s_veh_h = s_veh_h;
    spec.rule_pair = pair;
    spec.alpha = compute_alpha(s_veh_h, pair);
    if (!(spec.alpha[0] <= spec.alpha[1] && spec.alpha[1] <= spec.alpha[2])) {
        throw InvalidState("alpha thresholds must be non-decreasing");
    }
    return spec;
}

RuleSelection select_rules(const Ofn& position,
                           const std::array<double, 3>& alpha) {
    const NormalizedOfn xbar = normalize(position);
    RuleSelection selection;
    selection.r[0] = SelectedRule::RL;
    selection.r[4] = SelectedRule::RH;
    for (int m = 1; m <= 3; ++m) {
        selection.r[m] =
            xbar[m] <= alpha[m - 1] ? SelectedRule::RH : SelectedRule::RL;
    }
    return selection;
}

Ofn compute_gap(const FuzzyVehicle& vehicle, const FuzzyVehicle* lead,
                std::span<const int> halt_cells, const Ofn& v_max) {
    Ofn gap;
    for (int m = 0; m < kOfnComponents; ++m) {
        const double pos = vehicle.position[m];
        const double lead_gap =
            lead != nullptr ? lead->position[m] - pos - 1.0 : kUnconstrained;
        double signal_gap = lead_gap;
        const auto it = std::upper_bound(
            halt_cells.begin(), halt_cells.end(), pos,
            [](double value, int cell) { return value < cell; });
        if (it != halt_cells.end()) signal_gap = *it - pos - 1.0;
        const double g = std::min(lead_gap, signal_gap);
        gap[m] = std::isinf(g) ? v_max[m] : g;
    }
    return gap;
}

BinaryMask velocity_mask(const RuleSelection& rules, const Ofn& v_prev,
                         const Ofn& gap) {
    BinaryMask mask;
    for (int m = 0; m < kOfnComponents; ++m) {
        const bool cancel = rules[m] == SelectedRule::RL && v_prev[m] == 0.0 &&
                            gap[m] == 1.0;
        mask.b[m] = cancel ? 0 : 1;
    }
    return mask;
}

BinaryMask advance_mask(const RuleSelection& rules, const Ofn& v_prev,
                        const Ofn& gap) {
    BinaryMask mask;
    for (int m = 0; m < kOfnComponents; ++m) {
        const bool hold = rules[m] == SelectedRule::RH && v_prev[m] == 0.0 &&
                          gap[m] == 1.0;
        mask.b[m] = hold ? 0 : 1;
    }
    return mask;
}

Ofn fcm_velocity(const Ofn& v_prev, const Ofn& gap, const RuleSelection& rules,
                 const Ofn& v_max) {
    const Ofn one = ofn_from_scalar(1.0);
    const Ofn base = fuzzy_min(fuzzy_min(v_prev + one, gap), v_max);
    return base * velocity_mask(rules, v_prev, gap).as_ofn();
}

Ofn fcm_advance(const Ofn& position, const Ofn& v_prev, const Ofn& velocity,
                const Ofn& gap, const RuleSelection& rules) {
    return position + velocity * advance_mask(rules, v_prev, gap).as_ofn();
}

FcmEngine::FcmEngine(Scenario scenario, SaturationSpec spec)
    : scenario_(std::move(scenario)), spec_(std::move(spec)) {
    if (spec_.rule_pair.v_max_low != spec_.rule_pair.v_max_high) {
        // Distinct pair velocities would interpolate to non-integer
        // per-component maxima; positions would leave the cell grid.
        throw InvalidState(
            "FcmEngine requires a rule pair with a shared v_max");
    }
    v_max_ = ofn_from_scalar(spec_.rule_pair.v_max_low);

    const std::vector<CrispVehicle> initial =
        init_queues(scenario_.road, scenario_.queue_length, scenario_.probe);
    vehicles_.reserve(initial.size());
    const auto& stops = scenario_.road.stop_line_cells;
    for (const CrispVehicle& v : initial) {
        vehicles_.push_back({v.id, ofn_from_scalar(v.position),
                             ofn_from_scalar(v.velocity)});
        const int first = static_cast<int>(
            std::lower_bound(stops.begin(), stops.end(), v.position) -
            stops.begin());
        next_stop_.push_back({first, first, first, first, first});
    }
}

void FcmEngine::validate_component_configuration(
    const std::vector<FuzzyVehicle>& previous,
    std::span<const int> halt_cells) const {
    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
        const FuzzyVehicle& vehicle = vehicles_[i];
        for (int m = 0; m < kOfnComponents; ++m) {
            if (vehicle.velocity[m] < 0.0 ||
                vehicle.velocity[m] > v_max_[m]) {
                throw InvalidState("fcm: velocity left [0, v_max]");
            }
            if (i + 1 < vehicles_.size() &&
                vehicle.position[m] >= vehicles_[i + 1].position[m]) {
                std::ostringstream oss;
                oss << "fcm: component " << m << " ordering violated at step "
                    << t_ << " (vehicle " << vehicle.id << ")";
                throw InvalidState(oss.str());
            }
            const double old_pos = previous[i].position[m];
            const auto it = std::upper_bound(
                halt_cells.begin(), halt_cells.end(), old_pos,
                [](double value, int cell) { return value < cell; });
            if (it != halt_cells.end() && vehicle.position[m] >= *it) {
                throw InvalidState("fcm: vehicle entered an active halt cell");
            }
        }
    }
}

void FcmEngine::step() {
    const std::vector<int> halt_cells =
        halt_cells_at(scenario_.road, scenario_.schedules, t_);
    const int n_stops = static_cast<int>(scenario_.road.stop_line_cells.size());

    // Pre-step copy: gaps, masks and diagnostics all read the frozen
    // configuration while positions are rewritten in place.
    const std::vector<FuzzyVehicle> previous = vehicles_;

    for (std::size_t i = 0; i < previous.size(); ++i) {
        const FuzzyVehicle& before = previous[i];
        const FuzzyVehicle* lead =
            i + 1 < previous.size() ? &previous[i + 1] : nullptr;

        const RuleSelection rules = select_rules(before.position, spec_.alpha);
        const Ofn gap = compute_gap(before, lead, halt_cells, v_max_);
        const Ofn velocity =
            fcm_velocity(before.velocity, gap, rules, v_max_);
        const Ofn position = fcm_advance(before.position, before.velocity,
                                         velocity, gap, rules);
        vehicles_[i].velocity = velocity;
        vehicles_[i].position = position;
        op_count_ += kOfnComponents;

        for (int m = 0; m < kOfnComponents; ++m) {
            if (velocity[m] > gap[m]) {
                throw InvalidState("fcm: velocity exceeded the gap");
            }
            while (next_stop_[i][m] < n_stops &&
                   position[m] >
                       scenario_.road.stop_line_cells[next_stop_[i][m]]) {
                crossings_.push_back(
                    {t_ + 1, before.id, next_stop_[i][m], m});
                ++next_stop_[i][m];
            }
        }
    }

    validate_component_configuration(previous, halt_cells);

    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
        const FuzzyVehicle& vehicle = vehicles_[i];
        const double x0 = vehicle.position[0];
        const double x4 = vehicle.position[4];
        if (x0 > x4) {
            diagnostics_.record(
                {t_ + 1, vehicle.id, 0, DiagnosticKind::EnvelopeInverted});
        }
        for (int m = 1; m <= 3; ++m) {
            if (vehicle.position[m] < x0 || vehicle.position[m] > x4) {
                diagnostics_.record({t_ + 1, vehicle.id, m,
                                     DiagnosticKind::MiddleOutsideEnvelope});
            }
        }
        if (!is_monotone(vehicle.position)) {
            diagnostics_.record(
                {t_ + 1, vehicle.id, 0, DiagnosticKind::NonMonotonePosition});
        }
    }

    while (!vehicles_.empty()) {
        const Ofn& back = vehicles_.back().position;
        const double slowest = *std::min_element(back.a.begin(), back.a.end());
        if (slowest <= scenario_.road.cell_count) break;
        vehicles_.pop_back();
        next_stop_.pop_back();
    }

    ++t_;
}

FcmTrace FcmEngine::run(int horizon_steps, const TraceSpec& trace_spec) {
    if (t_ != 0) throw InvalidState("FcmEngine::run on an advanced engine");

    FcmTrace trace;
    trace.steps = horizon_steps;
    trace.tracked_vehicle_id = trace_spec.tracked_vehicle_id;

    int tracked_index = -1;
    if (trace_spec.tracked_vehicle_id >= 0) {
        for (std::size_t i = 0; i < vehicles_.size(); ++i) {
            if (vehicles_[i].id == trace_spec.tracked_vehicle_id) {
                tracked_index = static_cast<int>(i);
                break;
            }
        }
        if (tracked_index < 0) {
            throw InvalidState("tracked vehicle not in the scenario");
        }
    }

    auto positions_of = [](const FuzzyVehicle& vehicle) {
        std::array<int, 5> cells{};
        for (int m = 0; m < kOfnComponents; ++m) {
            cells[m] = static_cast<int>(std::llround(vehicle.position[m]));
        }
        return cells;
    };
    auto velocities_of = [](const FuzzyVehicle& vehicle) {
        std::array<int, 5> v{};
        for (int m = 0; m < kOfnComponents; ++m) {
            v[m] = static_cast<int>(std::llround(vehicle.velocity[m]));
        }
        return v;
    };
    const bool counting = trace_spec.count_threshold_cell >= 0;
    auto counts = [&]() {
        return fuzzy_vehicle_count(vehicles_, trace_spec.count_threshold_cell);
    };

    if (tracked_index >= 0) {
        trace.tracked_positions.push_back(
            positions_of(vehicles_[tracked_index]));
    }
    if (counting) trace.vehicle_counts.push_back(counts());
    if (trace_spec.record_cells) {
        for (const FuzzyVehicle& v : vehicles_) {
            trace.cells.push_back({0, v.id, positions_of(v), velocities_of(v)});
        }
    }

    for (int t = 0; t < horizon_steps; ++t) {
        step();
        if (tracked_index >= 0 &&
            tracked_index < static_cast<int>(vehicles_.size())) {
            trace.tracked_positions.push_back(
                positions_of(vehicles_[tracked_index]));
        } else {
            tracked_index = -1;
        }
        if (counting) trace.vehicle_counts.push_back(counts());
        if (trace_spec.record_cells) {
            for (const FuzzyVehicle& v : vehicles_) {
                trace.cells.push_back(
                    {t + 1, v.id, positions_of(v), velocities_of(v)});
            }
        }
        if (vehicles_.empty()) {
            if (counting) {
                trace.vehicle_counts.resize(horizon_steps + 1,
                                            std::array<int, 5>{});
            }
            break;
        }
    }

    trace.crossings = std::move(crossings_);
    trace.diagnostics = diagnostics_;
    trace.op_count = op_count_;
    return trace;
}

FcmTrace run_fcm(const Scenario& scenario, const SaturationSpec& spec,
                 int horizon_steps, const TraceSpec& trace) {
    FcmEngine engine(scenario, spec);
    return engine.run(horizon_steps, trace);
}

}  // namespace fctsim
