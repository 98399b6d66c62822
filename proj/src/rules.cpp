#include "fctsim/rules.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fctsim/errors.hpp"

namespace fctsim {

namespace {

RuleKind resolve(RuleKind kind, NshVariant nsh) {
    if (kind != RuleKind::NSH) return kind;
    return nsh == NshVariant::Standard ? RuleKind::R3 : RuleKind::R2;
}

}  // namespace

RuleOutcome apply_rule(RuleKind kind, int v_prev, int gap, int v_max,
                       NshVariant nsh) {
    if (v_max < 1 || gap < 0 || v_prev < 0 || v_prev > v_max) {
        std::ostringstream oss;
        oss << "apply_rule: invalid input v_prev=" << v_prev << " gap=" << gap
            << " v_max=" << v_max;
        throw InvalidState(oss.str());
    }

    const int base = std::min({v_prev + 1, gap, v_max});
    const bool start_blocked = v_prev == 0 && gap == 1;

    RuleOutcome out;
    switch (resolve(kind, nsh)) {
        case RuleKind::R1:
            out.velocity = start_blocked ? 0 : base;
            out.position_delta = out.velocity;
            break;
        case RuleKind::R2:
            out.velocity = base;
            out.position_delta = start_blocked ? 0 : out.velocity;
            break;
        case RuleKind::R3:
            out.velocity = base;
            out.position_delta = out.velocity;
            break;
        case RuleKind::NSL:
            out.velocity = std::max(0, base - 1);
            out.position_delta = out.velocity;
            break;
        case RuleKind::NSH:
            break;  // resolved above
    }
    return out;
}

double steady_discharge_gap(RuleKind kind, int v_max) {
    if (v_max < 1) throw InvalidState("steady_discharge_gap: v_max < 1");
    switch (kind) {
        case RuleKind::R1: return 2.0 * v_max;
        case RuleKind::R2: return 1.5 * v_max;
        case RuleKind::R3: return static_cast<double>(v_max);
        default:
            throw InvalidState("steady_discharge_gap: defined for R1/R2/R3 only");
    }
}

double rule_saturation(RuleKind kind, int v_max, double seconds_per_step) {
    const double gap = steady_discharge_gap(kind, v_max);
    return v_max / (gap + 1.0) * 3600.0 / seconds_per_step;
}

double RulePairParams::saturation_low_veh_step() const {
    return static_cast<double>(v_max_low) / (gap_low + 1);
}

double RulePairParams::saturation_high_veh_step() const {
    return static_cast<double>(v_max_high) / (gap_high + 1);
}

double RulePairParams::saturation_low_veh_h() const {
    return saturation_low_veh_step() * 3600.0 / seconds_per_step;
}

double RulePairParams::saturation_high_veh_h() const {
    return saturation_high_veh_step() * 3600.0 / seconds_per_step;
}

RulePairParams make_rule_pair(RuleKind low, RuleKind high, int v_max,
                              double seconds_per_step) {
    const double gap_low = steady_discharge_gap(low, v_max);
    const double gap_high = steady_discharge_gap(high, v_max);
    if (gap_low != std::floor(gap_low) || gap_high != std::floor(gap_high)) {
        throw InvalidState(
            "make_rule_pair: steady gap not integral for this v_max");
    }

    RulePairParams pair;
    pair.v_max_low = v_max;
    pair.v_max_high = v_max;
    pair.gap_low = static_cast<int>(gap_low);
    pair.gap_high = static_cast<int>(gap_high);
    pair.seconds_per_step = seconds_per_step;

    if (pair.gap_high > pair.gap_low || pair.v_max_low > pair.v_max_high) {
        throw InvalidState("make_rule_pair: pair ordered wrongly");
    }
    if (pair.gap_high == pair.gap_low && pair.v_max_low == pair.v_max_high) {
        throw DegeneratePair("make_rule_pair: pair spans no saturation interval");
    }
    if (pair.saturation_low_veh_step() >= pair.saturation_high_veh_step()) {
        throw InvalidState(
            "make_rule_pair: low rule saturation must stay below the high one");
    }
    return pair;
}

}  // namespace fctsim
