#pragma once

// The six reference inputs with double guesses for theta, used to seed the
// MPFR oracles.

#include <array>

namespace fixtures {

struct Number {
    const char* name;
    const char* poly;
    double theta;
};

inline constexpr std::array<Number, 6> kNumbers{{
    {"golden", "x^2-x-1", 1.6180339887498949},
    {"plastic", "x^3-x-1", 1.3247179572447460},
    {"lehmer", "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1", 1.1762808182599175},
    {"garsia", "x^3-x-2", 1.5213797068045676},
    {"sqrt2", "x^2-2", 1.4142135623730951},
    {"three_halves", "2x-3", 1.5},
}};

}  // namespace fixtures
