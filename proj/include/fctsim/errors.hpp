#ifndef FCTSIM_ERRORS_HPP
#define FCTSIM_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace fctsim {

// Thrown by make_ofn when a^(0) <= ... <= a^(4) is violated.
struct NonMonotoneTuple : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Rule or engine input outside its stated domain.
struct InvalidState : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Saturation component outside the rule pair's support interval.
struct OutOfSupport : std::domain_error {
    using std::domain_error::domain_error;
};

// Rule pair spanning no saturation interval (zero denominator in the
// alpha formula).
struct DegeneratePair : std::domain_error {
    using std::domain_error::domain_error;
};

struct EmptySamples : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NoGreenTime : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Initial queues would overlap each other or the probe cell.
struct QueueOverflow : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A fuzzy travel time was requested but some components never passed the
// threshold cell within the simulated horizon.
class NeverCrossed : public std::runtime_error {
  public:
    explicit NeverCrossed(std::vector<int> components);
    const std::vector<int>& components() const { return components_; }

  private:
    std::vector<int> components_;
};

}  // namespace fctsim

#endif
