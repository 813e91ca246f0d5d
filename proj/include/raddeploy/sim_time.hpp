#pragma once

// Logical simulation time. All scheduling decisions are made on an integer
// microsecond grid so that rate arithmetic is exact; physics converts to
// seconds at the point of use.

#include <chrono>
#include <cmath>
#include <cstdint>

#include "raddeploy/errors.hpp"

namespace raddeploy {

using Micros = std::chrono::duration<std::int64_t, std::micro>;

inline double to_seconds(Micros t) { return static_cast<double>(t.count()) * 1e-6; }

/// Converts a duration in seconds to the microsecond grid. Rejects values that
/// are not (to within 1 ns) a whole number of microseconds.
inline Micros from_seconds(double s) {
    if (!std::isfinite(s)) throw InvalidParameter("time value must be finite");
    const double us = s * 1e6;
    const double rounded = std::round(us);
    if (std::abs(us - rounded) > 1e-3) throw InvalidParameter("time value is not a whole number of microseconds");
    return Micros{static_cast<std::int64_t>(rounded)};
}

/// Period of a rate given in Hz, on the microsecond grid.
inline Micros period_from_rate(double hz) {
    if (!std::isfinite(hz) || hz <= 0.0) throw InvalidParameter("rate must be finite and > 0");
    return from_seconds(1.0 / hz);
}

}  // namespace raddeploy
