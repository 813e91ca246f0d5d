#pragma once

// Vertical point-mass flight of the launch vehicle and of the ejected payload.
//
// Both integrators use semi-implicit Euler (velocity first, then position with
// the updated velocity) on a fixed step. Drag is quadratic, 0.5 rho v^2 CdA,
// with density from the ISA model clamped into its band.

#include <algorithm>
#include <cmath>
#include <span>
#include <string_view>

#include "raddeploy/atmosphere.hpp"
#include "raddeploy/errors.hpp"

namespace raddeploy::flight {

enum class FlightPhase { PreLaunch, Boost, Coast, DrogueDescent, Landed };

inline std::string_view to_string(FlightPhase p) {
    switch (p) {
        case FlightPhase::PreLaunch: return "PreLaunch";
        case FlightPhase::Boost: return "Boost";
        case FlightPhase::Coast: return "Coast";
        case FlightPhase::DrogueDescent: return "DrogueDescent";
        case FlightPhase::Landed: return "Landed";
    }
    return "?";
}

struct VehicleSpec {
    double dry_mass = 25.0;           // kg, excluding propellant and payload
    double propellant_mass = 10.0;    // kg
    double avg_thrust = 3000.0;       // N
    double burn_time = 6.0;           // s
    double drag_area_coast = 0.012;   // m^2 (Cd * A)
    double drogue_drag_area = 1.4;    // m^2, ~20 m/s descent class at 3 km
    double gravity = 9.81;            // m/s^2
    atmo::AtmosphereModel atmosphere;

    void validate() const {
        auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
        if (!std::isfinite(dry_mass) || dry_mass <= 0.0) throw InvalidParameter("vehicle.dry_mass must be > 0");
        if (!nonneg(propellant_mass)) throw InvalidParameter("vehicle.propellant_mass must be >= 0");
        if (!nonneg(avg_thrust)) throw InvalidParameter("vehicle.avg_thrust must be >= 0");
        if (!nonneg(burn_time)) throw InvalidParameter("vehicle.burn_time must be >= 0");
        if (propellant_mass > 0.0 && burn_time <= 0.0)
            throw InvalidParameter("vehicle.burn_time must be > 0 when carrying propellant");
        if (!nonneg(drag_area_coast)) throw InvalidParameter("vehicle.drag_area_coast must be >= 0");
        if (!nonneg(drogue_drag_area)) throw InvalidParameter("vehicle.drogue_drag_area must be >= 0");
        if (!std::isfinite(gravity) || gravity <= 0.0) throw InvalidParameter("vehicle.gravity must be > 0");
        atmosphere.validate();
    }
};

struct FlightState {
    double time = 0.0;        // s
    double altitude = 0.0;    // m above the pad
    double velocity = 0.0;    // m/s, up positive
    double mass = 0.0;        // kg, total including stowed payload
    double propellant = 0.0;  // kg remaining
    FlightPhase phase = FlightPhase::PreLaunch;
};

inline FlightState launch_state(const VehicleSpec& spec, double stowed_payload_mass) {
    FlightState s;
    s.mass = spec.dry_mass + spec.propellant_mass + stowed_payload_mass;
    s.propellant = spec.propellant_mass;
    return s;
}

inline double drag_force(double density, double velocity, double drag_area) {
    return -std::copysign(0.5 * density * velocity * velocity * drag_area, velocity);
}

/// Advances the vehicle by `dt`. Ignition happens on the first step out of
/// PreLaunch; Landed is absorbing.
inline FlightState step_vehicle(const VehicleSpec& spec, const FlightState& state, double dt) {
    if (!(dt > 0.0)) throw InvalidParameter("dt must be > 0");
    FlightState s = state;
    if (s.phase == FlightPhase::Landed) return s;
    if (s.phase == FlightPhase::PreLaunch) s.phase = FlightPhase::Boost;

    // Fraction of this step still inside the burn; absorbs round-off in the
    // accumulated time so burnout never gains or loses a whole step.
    double burn_fraction = 0.0;
    if (s.phase == FlightPhase::Boost && s.propellant > 0.0) {
        burn_fraction = std::clamp((spec.burn_time - s.time) / dt, 0.0, 1.0);
        if (burn_fraction < 1e-6) burn_fraction = 0.0;
        if (burn_fraction > 1.0 - 1e-6) burn_fraction = 1.0;
    }
    const bool burning = burn_fraction > 0.0;
    const double thrust = spec.avg_thrust * burn_fraction;
    const double drag_area = s.phase == FlightPhase::DrogueDescent ? spec.drogue_drag_area : spec.drag_area_coast;
    const double rho = atmo::density_clamped(spec.atmosphere, s.altitude);
    const double accel = (thrust + drag_force(rho, s.velocity, drag_area)) / s.mass - spec.gravity;

    s.velocity += accel * dt;
    s.altitude += s.velocity * dt;
    s.time += dt;
    if (burning) {
        const double burned = std::min(spec.propellant_mass / spec.burn_time * dt * burn_fraction, s.propellant);
        s.propellant -= burned;
        s.mass -= burned;
    }

    // Held by the pad until thrust exceeds weight.
    if (s.phase == FlightPhase::Boost && s.altitude < 0.0) {
        s.altitude = 0.0;
        s.velocity = std::max(s.velocity, 0.0);
    }
    if (s.phase == FlightPhase::Boost && (spec.burn_time - s.time < 1e-6 * dt || s.propellant <= 0.0))
        s.phase = FlightPhase::Coast;
    if (s.phase == FlightPhase::Coast && s.velocity <= 0.0) s.phase = FlightPhase::DrogueDescent;
    if (s.phase == FlightPhase::DrogueDescent && s.altitude <= 0.0) {
        s.altitude = 0.0;
        s.velocity = 0.0;
        s.phase = FlightPhase::Landed;
    }
    return s;
}

struct Apogee {
    double time;
    double altitude;
};

/// First post-boost sample whose velocity is <= 0.
inline Apogee detect_apogee(std::span<const FlightState> history) {
    for (const auto& s : history) {
        if (s.phase == FlightPhase::PreLaunch || s.phase == FlightPhase::Boost) continue;
        if (s.velocity <= 0.0) return {s.time, s.altitude};
    }
    throw NotFound("no apogee in history: velocity never crosses zero after boost");
}

/// Steady descent speed where drag balances weight.
inline double terminal_speed(double mass, double gravity, double density, double drag_area) {
    return std::sqrt(2.0 * mass * gravity / (density * drag_area));
}

enum class PayloadState { Stowed, FreeFall, ParachuteDescent, Landed };

inline std::string_view to_string(PayloadState s) {
    switch (s) {
        case PayloadState::Stowed: return "Stowed";
        case PayloadState::FreeFall: return "FreeFall";
        case PayloadState::ParachuteDescent: return "ParachuteDescent";
        case PayloadState::Landed: return "Landed";
    }
    return "?";
}

struct PayloadBody {
    double mass = 1.0;                          // kg
    double parachute_drag_area = 0.65;          // m^2, ~5 m/s at sea level for 1 kg
    double parachute_open_altitude_loss = 50.0; // m fallen before the canopy opens
    PayloadState state = PayloadState::Stowed;
    double altitude = 0.0;
    double velocity = 0.0;
    double time = 0.0;
    double release_altitude = 0.0;

    void validate() const {
        if (!std::isfinite(mass) || mass <= 0.0) throw InvalidParameter("payload.mass must be > 0");
        if (!std::isfinite(parachute_drag_area) || parachute_drag_area < 0.0)
            throw InvalidParameter("payload.parachute_drag_area must be >= 0");
        if (!std::isfinite(parachute_open_altitude_loss) || parachute_open_altitude_loss < 0.0)
            throw InvalidParameter("payload.parachute_open_altitude_loss must be >= 0");
    }
};

/// Separates the payload from the vehicle with the vehicle's kinematic state.
inline PayloadBody release_payload(PayloadBody body, double altitude, double velocity, double time) {
    if (body.state != PayloadState::Stowed) throw ContractViolation("payload already released");
    body.altitude = std::max(altitude, 0.0);
    body.velocity = velocity;
    body.time = time;
    body.release_altitude = body.altitude;
    body.state = altitude <= 0.0 ? PayloadState::Landed : PayloadState::FreeFall;
    if (body.state == PayloadState::Landed) body.velocity = 0.0;
    return body;
}

inline PayloadBody step_payload(PayloadBody body, double dt, const atmo::AtmosphereModel& atmosphere,
                                double gravity) {
    if (body.state == PayloadState::Stowed) throw ContractViolation("cannot step a stowed payload");
    if (!(dt > 0.0)) throw InvalidParameter("dt must be > 0");
    if (body.state == PayloadState::Landed) return body;

    double accel = -gravity;
    if (body.state == PayloadState::ParachuteDescent) {
        const double rho = atmo::density_clamped(atmosphere, body.altitude);
        accel += drag_force(rho, body.velocity, body.parachute_drag_area) / body.mass;
    }
    body.velocity += accel * dt;
    body.altitude += body.velocity * dt;
    body.time += dt;

    if (body.state == PayloadState::FreeFall &&
        body.release_altitude - body.altitude >= body.parachute_open_altitude_loss)
        body.state = PayloadState::ParachuteDescent;
    if (body.altitude <= 0.0) {
        body.altitude = 0.0;
        body.velocity = 0.0;
        body.state = PayloadState::Landed;
    }
    return body;
}

}  // namespace raddeploy::flight
