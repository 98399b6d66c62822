#ifndef FCTSIM_OFN_HPP
#define FCTSIM_OFN_HPP

#include <array>
#include <cstddef>

#include "fctsim/errors.hpp"

namespace fctsim {

inline constexpr int kOfnComponents = 5;

enum class BinaryOp { Add, Sub, Mul, Min, Max };

// Triangular ordered fuzzy number held as the 5-tuple (a^(0), ..., a^(4)).
// The branch functions are affine, so the tuple determines them completely;
// a^(0) and a^(4) carry the support interval. Arithmetic is component-wise
// and results are deliberately not re-sorted: min/max cross-overs are part
// of the calculus.
struct Ofn {
    std::array<double, 5> a{};

    double operator[](std::size_t m) const { return a[m]; }
    double& operator[](std::size_t m) { return a[m]; }

    bool operator==(const Ofn&) const = default;
};

// Range-normalised counterpart: components mapped onto [0, 1] over the
// support interval. A zero-width interval normalises to all zeros.
struct NormalizedOfn {
    std::array<double, 5> v{};

    double operator[](std::size_t m) const { return v[m]; }

    bool operator==(const NormalizedOfn&) const = default;
};

// Validating constructor; throws NonMonotoneTuple unless a0 <= ... <= a4.
Ofn make_ofn(double a0, double a1, double a2, double a3, double a4);

// Embeds a crisp scalar as the 5-tuple (c, c, c, c, c).
Ofn ofn_from_scalar(double c);

// Component-wise op(x^(m), y^(m)); never validates or re-sorts the result.
Ofn apply_binary(BinaryOp op, const Ofn& x, const Ofn& y);

Ofn operator+(const Ofn& x, const Ofn& y);
Ofn operator-(const Ofn& x, const Ofn& y);
Ofn operator*(const Ofn& x, const Ofn& y);
Ofn fuzzy_min(const Ofn& x, const Ofn& y);
Ofn fuzzy_max(const Ofn& x, const Ofn& y);

NormalizedOfn normalize(const Ofn& x);

bool is_monotone(const Ofn& x);

}  // namespace fctsim

#endif
