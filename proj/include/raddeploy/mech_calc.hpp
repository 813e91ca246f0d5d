#pragma once

// Sizing equations for the rack-and-pinion payload pusher.
//
// Force path: servo torque -> pinion -> rack tip, derated by a drivetrain
// efficiency. Motion requirement: cover the bay stroke within a time budget.
// Resistance: Coulomb friction of the payload on the bulkhead plus the
// inertial term for the required acceleration. Solving the horizontal force
// balance for the mass gives the largest payload the pusher can eject.

#include <cmath>
#include <limits>
#include <string>

#include "raddeploy/errors.hpp"
#include "raddeploy/units.hpp"

namespace raddeploy::mech {

using namespace raddeploy::units;

// Gear and rack geometry of the reference hardware. Only the pitch diameter
// enters the force model; the rest is carried for reports.
namespace geometry {
inline constexpr double kGearModule = 2.0;
inline constexpr int kPinionTeeth = 10;
inline constexpr Length kPinionPitchDiameter = millimeters(20.0);
inline constexpr Length kGearThickness = millimeters(5.0);
inline constexpr Length kRackLength = millimeters(66.48);
inline constexpr Length kRackMatingHeight = millimeters(4.274);
}  // namespace geometry

struct MechanismParams {
    // 10 kgf·cm servo rating, rounded to 0.98 N·m.
    Torque servo_stall_torque = newton_meters(0.98);
    Length pinion_pitch_diameter = geometry::kPinionPitchDiameter;
    double drivetrain_efficiency = 0.85;
    // Aluminium-on-aluminium estimate; a scenario knob, not a material constant.
    double friction_coefficient = 0.61;
    Length stroke = millimeters(60.0);
    Duration deployment_time_budget = seconds(5.0);
    Acceleration gravity = meters_per_second2(9.81);

    static MechanismParams reference() { return {}; }

    /// Throws InvalidParameter naming the first offending field.
    void validate() const {
        auto require = [](bool ok, const char* field, const char* rule) {
            if (!ok) throw InvalidParameter(std::string(field) + " " + rule);
        };
        require(isfinite(servo_stall_torque) && servo_stall_torque.value() > 0.0, "servo_stall_torque",
                "must be finite and > 0");
        require(isfinite(pinion_pitch_diameter) && pinion_pitch_diameter.value() > 0.0, "pinion_pitch_diameter",
                "must be finite and > 0");
        require(std::isfinite(drivetrain_efficiency) && drivetrain_efficiency > 0.0 && drivetrain_efficiency <= 1.0,
                "drivetrain_efficiency", "must lie in (0, 1]");
        require(std::isfinite(friction_coefficient) && friction_coefficient >= 0.0, "friction_coefficient",
                "must be finite and >= 0");
        // Zero stroke is allowed here (it makes the sizing singular when mu is 0);
        // scenarios require a positive stroke.
        require(isfinite(stroke) && stroke.value() >= 0.0, "stroke", "must be finite and >= 0");
        require(isfinite(deployment_time_budget) && deployment_time_budget.value() > 0.0, "deployment_time_budget",
                "must be finite and > 0");
        require(isfinite(gravity) && gravity.value() > 0.0, "gravity", "must be finite and > 0");
    }
};

struct SizingReport {
    Force ideal_tangential_force;
    Force effective_tangential_force;
    Acceleration required_acceleration;
    SpecificForce friction_force_per_kg;
    Mass max_payload_mass;
};

/// Rack-tip force from pinion torque: efficiency * 2 * torque / pitch_diameter.
inline Force tangential_force(Torque torque, Length pitch_diameter, double efficiency) {
    if (!isfinite(torque) || torque.value() < 0.0) throw InvalidParameter("torque must be finite and >= 0");
    if (!isfinite(pitch_diameter) || pitch_diameter.value() <= 0.0)
        throw InvalidParameter("pitch_diameter must be finite and > 0");
    if (!std::isfinite(efficiency) || efficiency <= 0.0 || efficiency > 1.0)
        throw InvalidParameter("efficiency must lie in (0, 1]");
    const Force ideal = 2.0 * torque / pitch_diameter;
    return efficiency * ideal;
}

/// Constant acceleration that covers `stroke` in `time_budget` starting at
/// `initial_velocity`: 2 (S - u t) / t^2. Negative when u t already exceeds S.
inline Acceleration required_acceleration(Length stroke, Velocity initial_velocity, Duration time_budget) {
    if (!isfinite(time_budget) || time_budget.value() <= 0.0)
        throw InvalidParameter("time_budget must be finite and > 0");
    if (!isfinite(stroke) || stroke.value() < 0.0) throw InvalidParameter("stroke must be finite and >= 0");
    if (!isfinite(initial_velocity)) throw InvalidParameter("initial_velocity must be finite");
    return 2.0 * (stroke - initial_velocity * time_budget) / (time_budget * time_budget);
}

/// Coulomb friction mu * m * g.
inline Force friction_force(double mu, Mass mass, Acceleration gravity) {
    if (!std::isfinite(mu) || mu < 0.0) throw InvalidParameter("mu must be finite and >= 0");
    if (!isfinite(mass) || mass.value() < 0.0) throw InvalidParameter("mass must be finite and >= 0");
    if (!isfinite(gravity) || gravity.value() < 0.0) throw InvalidParameter("gravity must be finite and >= 0");
    return mu * mass * gravity;
}

/// Largest mass for which effective_force >= m (mu g + accel).
inline Mass max_payload_mass(Force effective_force, double mu, Acceleration gravity, Acceleration accel) {
    if (!isfinite(effective_force) || effective_force.value() < 0.0)
        throw InvalidParameter("effective_force must be finite and >= 0");
    if (!std::isfinite(mu) || mu < 0.0) throw InvalidParameter("mu must be finite and >= 0");
    if (!isfinite(gravity) || !isfinite(accel)) throw InvalidParameter("gravity and accel must be finite");
    const Acceleration resistance = mu * gravity + accel;
    if (!(resistance.value() > 0.0))
        throw SingularConfiguration("mu*g + accel must be > 0 (frictionless pusher with no required acceleration)");
    return effective_force / resistance;
}

inline SizingReport sizing_report(const MechanismParams& p) {
    p.validate();
    SizingReport r;
    r.ideal_tangential_force = tangential_force(p.servo_stall_torque, p.pinion_pitch_diameter, 1.0);
    r.effective_tangential_force =
        tangential_force(p.servo_stall_torque, p.pinion_pitch_diameter, p.drivetrain_efficiency);
    // The payload starts at rest in the bay.
    r.required_acceleration = required_acceleration(p.stroke, meters_per_second(0.0), p.deployment_time_budget);
    r.friction_force_per_kg =
        SpecificForce{friction_force(p.friction_coefficient, kilograms(1.0), p.gravity).value()};
    r.max_payload_mass =
        max_payload_mass(r.effective_tangential_force, p.friction_coefficient, p.gravity, r.required_acceleration);
    return r;
}

/// Force the pusher has to deliver to move `mass` under `friction_scale`-times
/// the nominal friction coefficient.
inline Force required_push_force(const MechanismParams& p, Mass mass, double friction_scale = 1.0) {
    const Acceleration accel = required_acceleration(p.stroke, meters_per_second(0.0), p.deployment_time_budget);
    return friction_force(p.friction_coefficient * friction_scale, mass, p.gravity) + mass * accel;
}

}  // namespace raddeploy::mech
