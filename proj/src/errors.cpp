#include "fctsim/errors.hpp"

#include <sstream>

namespace fctsim {

namespace {

std::string describe(const std::vector<int>& components) {
    std::ostringstream oss;
    oss << "components never crossed the threshold:";
    for (int m : components) oss << " " << m;
    return oss.str();
}

}  // namespace

NeverCrossed::NeverCrossed(std::vector<int> components)
    : std::runtime_error(describe(components)),
      components_(std::move(components)) {}

}  // namespace fctsim
