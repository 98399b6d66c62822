#ifndef FCTSIM_RULES_HPP
#define FCTSIM_RULES_HPP

namespace fctsim {

// Crisp single-vehicle update rules. R1 keeps a stopped vehicle in place
// while its gap is one cell; R2 lets it gain speed but skips the position
// update; R3 is the deterministic Nagel-Schreckenberg rule. NSL/NSH are the
// two deterministic halves of the stochastic NaSch update.
enum class RuleKind { R1, R2, R3, NSL, NSH };

// NSH resolution. Standard treats NSH as the p = 0 NaSch rule (R3 form);
// SlowToStart uses the R2 form instead.
enum class NshVariant { Standard, SlowToStart };

struct RuleOutcome {
    int velocity = 0;        // cells per step, in [0, v_max]
    int position_delta = 0;  // cells advanced this step: 0 or velocity
};

// Applies one rule to one vehicle. gap is the number of free cells in
// front (to the lead vehicle or the nearest active halt cell); it may
// exceed v_max. Throws InvalidState when v_prev is outside [0, v_max],
// gap < 0 or v_max < 1.
RuleOutcome apply_rule(RuleKind kind, int v_prev, int gap, int v_max,
                       NshVariant nsh = NshVariant::Standard);

// Steady gap between vehicles discharging at v_max: 2*v_max for R1,
// 1.5*v_max (average of the alternating pair) for R2, v_max for R3.
double steady_discharge_gap(RuleKind kind, int v_max);

// Saturation flow v_max/(g+1) of the rule, in vehicles per hour of green.
double rule_saturation(RuleKind kind, int v_max, double seconds_per_step);

// Low/high saturation rule pair bounding the fuzzy cellular model.
// Components 0 and 4 of the model always use the low and high rule; the
// reference setup is RL = R1, RH = R2 with a shared v_max.
struct RulePairParams {
    int v_max_low = 0;   // v_max^(0)
    int v_max_high = 0;  // v_max^(4)
    int gap_low = 0;     // g^(0), steady gap of the low rule
    int gap_high = 0;    // g^(4), g^(4) <= g^(0)
    double seconds_per_step = 1.0;

    double saturation_low_veh_step() const;
    double saturation_high_veh_step() const;
    double saturation_low_veh_h() const;
    double saturation_high_veh_h() const;
};

// Builds the pair from two of {R1, R2, R3} and validates that it spans a
// nonzero saturation interval. Throws InvalidState when the steady gap of a
// rule is not integral for this v_max (R2 with odd v_max) or the pair is
// ordered wrongly; DegeneratePair when it spans no interval.
RulePairParams make_rule_pair(RuleKind low, RuleKind high, int v_max,
                              double seconds_per_step = 1.0);

}  // namespace fctsim

#endif
