#pragma once

// Decibel / linear conversions shared across the library.

#include <cmath>
#include <limits>

namespace mmwsim {

inline constexpr double kNegInfDb = -std::numeric_limits<double>::infinity();

inline double db_to_linear(double db) {
    return std::pow(10.0, db / 10.0);
}

/// Linear power to dB.  Zero maps to -inf rather than NaN so that "no
/// interference" composes cleanly through sums.
inline double linear_to_db(double linear) {
    return linear > 0.0 ? 10.0 * std::log10(linear) : kNegInfDb;
}

} // namespace mmwsim
