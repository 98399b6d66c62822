#include "fctsim/ofn.hpp"

#include <algorithm>
#include <sstream>

namespace fctsim {

Ofn make_ofn(double a0, double a1, double a2, double a3, double a4) {
    Ofn result{{a0, a1, a2, a3, a4}};
    if (!is_monotone(result)) {
        std::ostringstream oss;
        oss << "non-monotone 5-tuple (" << a0 << ", " << a1 << ", " << a2
            << ", " << a3 << ", " << a4 << ")";
        throw NonMonotoneTuple(oss.str());
    }
    return result;
}

Ofn ofn_from_scalar(double c) { return Ofn{{c, c, c, c, c}}; }

Ofn apply_binary(BinaryOp op, const Ofn& x, const Ofn& y) {
    Ofn result;
    for (int m = 0; m < kOfnComponents; ++m) {
        switch (op) {
            case BinaryOp::Add: result[m] = x[m] + y[m]; break;
            case BinaryOp::Sub: result[m] = x[m] - y[m]; break;
            case BinaryOp::Mul: result[m] = x[m] * y[m]; break;
            case BinaryOp::Min: result[m] = std::min(x[m], y[m]); break;
            case BinaryOp::Max: result[m] = std::max(x[m], y[m]); break;
        }
    }
    return result;
}

Ofn operator+(const Ofn& x, const Ofn& y) { return apply_binary(BinaryOp::Add, x, y); }
Ofn operator-(const Ofn& x, const Ofn& y) { return apply_binary(BinaryOp::Sub, x, y); }
Ofn operator*(const Ofn& x, const Ofn& y) { return apply_binary(BinaryOp::Mul, x, y); }
Ofn fuzzy_min(const Ofn& x, const Ofn& y) { return apply_binary(BinaryOp::Min, x, y); }
Ofn fuzzy_max(const Ofn& x, const Ofn& y) { return apply_binary(BinaryOp::Max, x, y); }

NormalizedOfn normalize(const Ofn& x) {
    NormalizedOfn result;
    const double width = x[4] - x[0];
    if (width == 0.0) {
        // Degenerate support. Zero makes the rule selection pick RH, which
        // is what opens the interval from a degenerate start.
        return result;
    }
    for (int m = 0; m < kOfnComponents; ++m) {
        result.v[m] = (x[m] - x[0]) / width;
    }
    return result;
}

bool is_monotone(const Ofn& x) {
    return std::is_sorted(x.a.begin(), x.a.end());
}

}  // namespace fctsim
