#pragma once

// International Standard Atmosphere, troposphere layer only (0..11 km).

#include <cmath>
#include <string>

#include "raddeploy/errors.hpp"

namespace raddeploy::atmo {

// US Standard Atmosphere 1976 constants. Any port must use these exact values
// to reproduce pressures bit-for-bit.
inline constexpr double kStandardGravity = 9.80665;      // m/s^2
inline constexpr double kMolarMassAir = 0.0289644;       // kg/mol
inline constexpr double kGasConstant = 8.31432;          // J/(mol K)
inline constexpr double kTroposphereTop = 11000.0;       // m

struct AtmosphereModel {
    double sea_level_pressure = 101325.0;    // Pa
    double sea_level_temperature = 288.15;   // K
    double lapse_rate = 0.0065;              // K/m

    void validate() const {
        if (!std::isfinite(sea_level_pressure) || sea_level_pressure <= 0.0)
            throw InvalidParameter("sea_level_pressure must be > 0");
        if (!std::isfinite(sea_level_temperature) || sea_level_temperature <= 0.0)
            throw InvalidParameter("sea_level_temperature must be > 0");
        if (!std::isfinite(lapse_rate) || lapse_rate <= 0.0) throw InvalidParameter("lapse_rate must be > 0");
        if (sea_level_temperature - lapse_rate * kTroposphereTop <= 0.0)
            throw InvalidParameter("lapse_rate drives temperature non-positive below 11 km");
    }

    [[nodiscard]] double exponent() const { return kStandardGravity * kMolarMassAir / (kGasConstant * lapse_rate); }
};

inline double temperature_at_altitude(const AtmosphereModel& m, double altitude) {
    return m.sea_level_temperature - m.lapse_rate * altitude;
}

inline void check_altitude(double altitude) {
    if (!(altitude >= 0.0 && altitude <= kTroposphereTop))
        throw DomainError("altitude " + std::to_string(altitude) + " m outside troposphere band [0, 11000]");
}

inline double pressure_at_altitude(const AtmosphereModel& m, double altitude) {
    check_altitude(altitude);
    return m.sea_level_pressure *
           std::pow(1.0 - m.lapse_rate * altitude / m.sea_level_temperature, m.exponent());
}

/// Lowest pressure the model answers for (pressure at 11 km).
inline double min_pressure(const AtmosphereModel& m) { return pressure_at_altitude(m, kTroposphereTop); }

inline double altitude_from_pressure(const AtmosphereModel& m, double pressure) {
    if (!(pressure >= min_pressure(m) && pressure <= m.sea_level_pressure))
        throw DomainError("pressure " + std::to_string(pressure) + " Pa outside troposphere band");
    const double h = m.sea_level_temperature / m.lapse_rate *
                     (1.0 - std::pow(pressure / m.sea_level_pressure, 1.0 / m.exponent()));
    // pow rounding can leave a -1e-13 residue at sea level.
    return h < 0.0 ? 0.0 : (h > kTroposphereTop ? kTroposphereTop : h);
}

/// Ideal-gas density at altitude.
inline double density_at_altitude(const AtmosphereModel& m, double altitude) {
    const double p = pressure_at_altitude(m, altitude);
    return p * kMolarMassAir / (kGasConstant * temperature_at_altitude(m, altitude));
}

/// Density with the altitude clamped into the model band; used by the flight
/// integrators so that a high apogee does not abort a run.
inline double density_clamped(const AtmosphereModel& m, double altitude) {
    const double h = altitude < 0.0 ? 0.0 : (altitude > kTroposphereTop ? kTroposphereTop : altitude);
    return density_at_altitude(m, h);
}

}  // namespace raddeploy::atmo
