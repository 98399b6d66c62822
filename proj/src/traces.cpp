#include "fctsim/traces.hpp"

namespace fctsim {

void Diagnostics::record(const DiagnosticEvent& event) {
    switch (event.kind) {
        case DiagnosticKind::MiddleOutsideEnvelope:
            ++middle_outside_envelope;
            break;
        case DiagnosticKind::EnvelopeInverted:
            ++envelope_inverted;
            break;
        case DiagnosticKind::NonMonotonePosition:
            ++non_monotone_position;
            break;
    }
    if (first_events.size() < 32) first_events.push_back(event);
}

}  // namespace fctsim
