#ifndef FCTSIM_FCM_HPP
#define FCTSIM_FCM_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fctsim/network.hpp"
#include "fctsim/ofn.hpp"
#include "fctsim/rules.hpp"
#include "fctsim/traces.hpp"

namespace fctsim {

// Per-component choice between the low and high saturation rule.
enum class SelectedRule : std::uint8_t { RL, RH };

// Component 0 is pinned to RL and component 4 to RH; the middle components
// switch by comparing the vehicle's normalised position against alpha.
struct RuleSelection {
    std::array<SelectedRule, 5> r{SelectedRule::RL, SelectedRule::RL,
                                  SelectedRule::RL, SelectedRule::RL,
                                  SelectedRule::RH};

    SelectedRule operator[](std::size_t m) const { return r[m]; }
    bool operator==(const RuleSelection&) const = default;
};

// 5-tuple of {0,1} used to cancel the velocity (RL's start condition) or
// the position update (RH's skip condition) per component.
struct BinaryMask {
    std::array<std::uint8_t, 5> b{1, 1, 1, 1, 1};

    Ofn as_ofn() const;
    bool operator==(const BinaryMask&) const = default;
};

struct FuzzyVehicle {
    int id = 0;
    Ofn position;  // integer-valued cell indices
    Ofn velocity;  // integer-valued cells per step
};

// Fuzzy saturation target plus everything derived from it. s_veh_h's
// support endpoints must equal the pair's rule saturations.
struct SaturationSpec {
    Ofn s_veh_h;
    RulePairParams rule_pair;
    std::array<double, 3> alpha{};  // alpha^(1..3)
};

// Saturation flow (vehicles/step) reachable at normalised position xbar,
// interpolating the pair's v_max and gap.
double saturation_of_normalized_position(double xbar,
                                         const RulePairParams& pair);

// Inverse of the above: the normalised-position threshold that realises
// saturation s (vehicles/step). Throws OutOfSupport outside
// [s^(0), s^(4)] and DegeneratePair when the pair spans no interval.
double alpha_of_saturation(double s_veh_step, const RulePairParams& pair);

// alpha^(1..3) for a fuzzy saturation target in vehicles/hour.
std::array<double, 3> compute_alpha(const Ofn& s_veh_h,
                                    const RulePairParams& pair);

// Validates support endpoints and alpha monotonicity.
SaturationSpec make_saturation_spec(const Ofn& s_veh_h,
                                    const RulePairParams& pair);

RuleSelection select_rules(const Ofn& position,
                           const std::array<double, 3>& alpha);

// Fuzzy free-cell count: min of the lead gap and the per-component
// distance to the nearest active halt cell ahead. Components constrained
// by neither fall back to v_max.
Ofn compute_gap(const FuzzyVehicle& vehicle, const FuzzyVehicle* lead,
                std::span<const int> halt_cells, const Ofn& v_max);

// Velocity mask A: zero where the selected rule is RL, the vehicle was
// stopped and its gap is one cell.
BinaryMask velocity_mask(const RuleSelection& rules, const Ofn& v_prev,
                         const Ofn& gap);

// Position mask B: zero where the selected rule is RH under the same
// stopped/gap-one condition (tested against the pre-update velocity).
BinaryMask advance_mask(const RuleSelection& rules, const Ofn& v_prev,
                        const Ofn& gap);

// V = min(v_prev + 1, G, v_max) * A, all component-wise.
Ofn fcm_velocity(const Ofn& v_prev, const Ofn& gap, const RuleSelection& rules,
                 const Ofn& v_max);

// X' = X + V * B. The mask condition reads the pre-update velocity.
Ofn fcm_advance(const Ofn& position, const Ofn& v_prev, const Ofn& velocity,
                const Ofn& gap, const RuleSelection& rules);

// Single-run fuzzy engine. One instance owns its state and must advance on
// one thread; independent instances share nothing.
class FcmEngine {
  public:
    FcmEngine(Scenario scenario, SaturationSpec spec);

    // One synchronous step: signals first, then every vehicle from the
    // frozen pre-step configuration.
    void step();

    FcmTrace run(int horizon_steps, const TraceSpec& trace = {});

    const std::vector<FuzzyVehicle>& vehicles() const { return vehicles_; }
    const Diagnostics& diagnostics() const { return diagnostics_; }
    const SaturationSpec& spec() const { return spec_; }
    int time() const { return t_; }
    std::uint64_t op_count() const { return op_count_; }

  private:
    void validate_component_configuration(
        const std::vector<FuzzyVehicle>& previous,
        std::span<const int> halt_cells) const;

    Scenario scenario_;
    SaturationSpec spec_;
    Ofn v_max_;
    std::vector<FuzzyVehicle> vehicles_;  // ascending positions
    std::vector<std::array<int, 5>> next_stop_;
    std::vector<FcmCrossingEvent> crossings_;
    Diagnostics diagnostics_;
    int t_ = 0;
    std::uint64_t op_count_ = 0;
};

FcmTrace run_fcm(const Scenario& scenario, const SaturationSpec& spec,
                 int horizon_steps, const TraceSpec& trace = {});

}  // namespace fctsim

#endif
