#pragma once

// Hardware models between the controller's commands and the payload:
// the door lock actuator, the door hinge, the servo-driven rack carrier and
// the LiPo pack, plus the injectable fault catalog.
//
// The carrier is speed-limited rather than force-integrated. The force model
// is a go/no-go check: if the effective rack force covers friction plus the
// sizing acceleration term, the rack advances at the servo's rated speed;
// otherwise it stalls at the payload face and draws stall current.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "raddeploy/errors.hpp"
#include "raddeploy/mech_calc.hpp"
#include "raddeploy/sim_time.hpp"

namespace raddeploy::act {

struct ServoSpec {
    double stall_torque = 0.98;          // N m at 6 V
    double rated_speed = 1.0;            // rev/s (60 RPM at 6 V)
    double running_current_min = 0.5;    // A, unloaded
    double running_current_max = 0.9;    // A, at full rated load
    double stall_current = 2.0;          // A
    double operating_voltage = 6.0;      // V

    void validate() const {
        auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
        if (!pos(stall_torque)) throw InvalidParameter("servo.stall_torque must be > 0");
        if (!pos(rated_speed)) throw InvalidParameter("servo.rated_speed must be > 0");
        if (!pos(running_current_min)) throw InvalidParameter("servo.running_current_min must be > 0");
        if (!pos(running_current_max) || running_current_max < running_current_min)
            throw InvalidParameter("servo.running_current_max must be >= running_current_min");
        if (!pos(stall_current)) throw InvalidParameter("servo.stall_current must be > 0");
        if (!pos(operating_voltage)) throw InvalidParameter("servo.operating_voltage must be > 0");
    }
};

/// Linear rack speed at the rated servo speed: one pitch circumference per rev.
inline double rack_speed(const ServoSpec& servo, const mech::MechanismParams& params) {
    return servo.rated_speed * std::numbers::pi * params.pinion_pitch_diameter.value();
}

/// Time for one full-stroke extension.
inline double single_push_time(const ServoSpec& servo, const mech::MechanismParams& params) {
    return params.stroke.value() / rack_speed(servo, params);
}

struct DoorSpec {
    double actuator_travel_time = 0.5;                       // s, rod fully inserted -> retracted
    double open_time = 0.3;                                  // s, closed -> max_open
    double max_open = std::numbers::pi / 2.0;                // rad
    double open_threshold = 85.0 * std::numbers::pi / 180.0; // rad
    double actuator_current = 0.3;                           // A while the rod moves

    void validate() const {
        (void)from_seconds(actuator_travel_time);
        if (!(actuator_travel_time > 0.0)) throw InvalidParameter("door.actuator_travel_time must be > 0");
        if (!std::isfinite(open_time) || open_time <= 0.0) throw InvalidParameter("door.open_time must be > 0");
        if (!std::isfinite(max_open) || max_open <= 0.0) throw InvalidParameter("door.max_open must be > 0");
        if (!std::isfinite(open_threshold) || open_threshold <= 0.0 || open_threshold > max_open)
            throw InvalidParameter("door.open_threshold must lie in (0, max_open]");
        if (!std::isfinite(actuator_current) || actuator_current < 0.0)
            throw InvalidParameter("door.actuator_current must be >= 0");
    }
};

struct BatterySpec {
    double nominal_voltage = 7.4;   // V, 2S LiPo
    double capacity = 3600.0;       // C (1000 mAh)

    void validate() const {
        if (!std::isfinite(nominal_voltage) || nominal_voltage <= 0.0)
            throw InvalidParameter("battery.nominal_voltage must be > 0");
        if (!std::isfinite(capacity) || capacity <= 0.0) throw InvalidParameter("battery.capacity must be > 0");
    }
};

// --- fault catalog ---------------------------------------------------------

enum class Fault : std::uint32_t {
    None = 0,
    LinkBreak = 1u << 0,
    GearSlip = 1u << 1,
    SurfaceFriction = 1u << 2,
    BatteryFail = 1u << 3,
    DoorJam = 1u << 4,
    PowerFault = 1u << 5,  // a command arrived while the pack was dead
};

class FaultFlags {
public:
    constexpr FaultFlags() = default;
    constexpr FaultFlags(Fault f) : bits_(static_cast<std::uint32_t>(f)) {}  // NOLINT implicit

    constexpr FaultFlags& operator|=(FaultFlags o) {
        bits_ |= o.bits_;
        return *this;
    }
    friend constexpr FaultFlags operator|(FaultFlags a, FaultFlags b) { return a |= b; }
    [[nodiscard]] constexpr bool has(Fault f) const { return (bits_ & static_cast<std::uint32_t>(f)) != 0; }
    [[nodiscard]] constexpr bool any() const { return bits_ != 0; }
    [[nodiscard]] constexpr std::uint32_t bits() const { return bits_; }
    friend constexpr bool operator==(FaultFlags, FaultFlags) = default;

    /// Pipe-joined names, or "none".
    [[nodiscard]] std::string to_string() const {
        static constexpr std::pair<Fault, const char*> kNames[] = {
            {Fault::LinkBreak, "LINK_BREAK"},   {Fault::GearSlip, "GEAR_SLIP"}, {Fault::SurfaceFriction, "FRICTION"},
            {Fault::BatteryFail, "BATTERY_FAIL"}, {Fault::DoorJam, "DOOR_JAM"}, {Fault::PowerFault, "POWER_FAULT"},
        };
        std::string out;
        for (const auto& [f, name] : kNames) {
            if (!has(f)) continue;
            if (!out.empty()) out += '|';
            out += name;
        }
        return out.empty() ? "none" : out;
    }

private:
    std::uint32_t bits_ = 0;
};

/// At most one fault of each kind, enforced by the representation.
struct FaultPlan {
    std::optional<int> gear_slip_push;            // push index (1-based) whose teeth skip
    std::optional<double> link_break_force;       // N; link snaps once its load reaches this
    std::optional<double> surface_friction_scale; // multiplier on mu
    std::optional<double> battery_fail_time;      // s
    bool door_jam = false;

    [[nodiscard]] double friction_scale() const { return surface_friction_scale.value_or(1.0); }
    [[nodiscard]] bool empty() const {
        return !gear_slip_push && !link_break_force && !surface_friction_scale && !battery_fail_time && !door_jam;
    }

    void validate() const {
        if (gear_slip_push && *gear_slip_push < 1) throw InvalidParameter("faults.gear_slip must be >= 1");
        if (link_break_force && (!std::isfinite(*link_break_force) || *link_break_force < 0.0))
            throw InvalidParameter("faults.link_break must be >= 0");
        if (surface_friction_scale && (!std::isfinite(*surface_friction_scale) || *surface_friction_scale <= 0.0))
            throw InvalidParameter("faults.surface_friction_scale must be > 0");
        if (battery_fail_time && (!std::isfinite(*battery_fail_time) || *battery_fail_time < 0.0))
            throw InvalidParameter("faults.battery_fail must be >= 0");
    }
};

// --- battery ---------------------------------------------------------------

struct BatteryState {
    double voltage = 7.4;     // V
    double charge = 3600.0;   // C remaining
    double consumed = 0.0;    // C drawn so far
    bool failed = false;

    static BatteryState full(const BatterySpec& spec) {
        return BatteryState{spec.nominal_voltage, spec.capacity, 0.0, false};
    }
};

/// Draws `current` for `dt` ending at time `now`. A dead pack delivers
/// nothing. The scheduled failure takes effect once `now` reaches it.
inline BatteryState drain_battery(BatteryState b, double current, double dt, double now, const FaultPlan& faults) {
    if (!std::isfinite(current) || current < 0.0) throw InvalidParameter("current must be >= 0");
    if (b.failed) return b;
    const double delivered = std::min(current * dt, b.charge);
    b.charge -= delivered;
    b.consumed += delivered;
    if (b.charge <= 0.0 || (faults.battery_fail_time && now >= *faults.battery_fail_time)) {
        b.failed = true;
        b.voltage = 0.0;
    }
    return b;
}

// --- door ------------------------------------------------------------------

struct DoorState {
    bool unlock_requested = false;
    Micros rod_retracted_for{0};  // accumulated powered travel
    bool rod_extended = true;
    bool locked = true;
    double angle = 0.0;           // rad
    bool open = false;
};

struct ActuatorStep {
    double current = 0.0;  // A drawn over the step
    FaultFlags faults;
};

/// Latches the unlock request; idempotent.
inline DoorState request_unlock(DoorState door) {
    door.unlock_requested = true;
    return door;
}

/// Retracts the lock rod while an unlock is requested and the pack is alive.
/// The door unlocks when the rod has travelled for the full travel time.
inline DoorState step_lock_actuator(DoorState door, const DoorSpec& spec, const BatteryState& battery, Micros dt,
                                    ActuatorStep& out) {
    if (!door.unlock_requested || !door.rod_extended) return door;
    if (battery.failed) {
        out.faults |= Fault::PowerFault;
        return door;
    }
    out.current += spec.actuator_current;
    door.rod_retracted_for += dt;
    if (door.rod_retracted_for >= from_seconds(spec.actuator_travel_time)) {
        door.rod_retracted_for = from_seconds(spec.actuator_travel_time);
        door.rod_extended = false;
        door.locked = false;
    }
    return door;
}

/// Constant-rate swing toward max_open once unlocked. A jammed door stays shut.
inline DoorState step_door(DoorState door, const DoorSpec& spec, const FaultPlan& faults, double dt,
                           ActuatorStep& out) {
    if (door.locked) return door;
    if (faults.door_jam) {
        out.faults |= Fault::DoorJam;
        return door;
    }
    door.angle = std::min(door.angle + spec.max_open / spec.open_time * dt, spec.max_open);
    door.open = door.angle >= spec.open_threshold;
    return door;
}

// --- carrier ---------------------------------------------------------------

enum class CarrierMotion { Idle, Extending, Retracting };

struct CarrierState {
    double rack_extension = 0.0;        // m, in [0, stroke]
    CarrierMotion motion = CarrierMotion::Idle;
    int push_count = 0;                 // completed extensions
    double payload_displacement = 0.0;  // m, furthest point the payload has been pushed to
    bool link_broken = false;
    bool stalled = false;

    [[nodiscard]] bool pushing() const { return motion != CarrierMotion::Idle; }
};

/// Starts one extend-retract cycle. The payload may only be pushed through an
/// open door.
inline CarrierState start_push(CarrierState c, const DoorState& door) {
    if (!door.open) throw ContractViolation("push commanded while the payload door is closed");
    if (c.motion == CarrierMotion::Idle) c.motion = CarrierMotion::Extending;
    return c;
}

struct CarrierStep {
    CarrierState state;
    double payload_displacement = 0.0;  // m transmitted during this step
    double current = 0.0;               // A
    FaultFlags faults;
};

/// Advances the rack by one step. `powered` is false when the pack is dead or
/// the controller has inhibited actuation.
inline CarrierStep step_carrier(const CarrierState& carrier, const ServoSpec& servo, double payload_mass,
                                const mech::MechanismParams& params, const FaultPlan& faults, bool powered,
                                double dt) {
    CarrierStep out;
    out.state = carrier;
    CarrierState& c = out.state;
    if (c.motion == CarrierMotion::Idle || !powered) return out;

    const double stroke = params.stroke.value();
    const double travel = rack_speed(servo, params) * dt;

    if (c.motion == CarrierMotion::Retracting) {
        c.rack_extension = std::max(c.rack_extension - travel, 0.0);
        if (c.rack_extension <= 0.0) c.motion = CarrierMotion::Idle;
        out.current = servo.running_current_min;
        return out;
    }

    const int push_index = c.push_count + 1;
    const bool slipping = faults.gear_slip_push && *faults.gear_slip_push == push_index;
    if (slipping) out.faults |= Fault::GearSlip;
    const double proposed = std::min(c.rack_extension + travel, stroke);

    const double force_available =
        mech::tangential_force(units::newton_meters(servo.stall_torque), params.pinion_pitch_diameter,
                               params.drivetrain_efficiency)
            .value();
    const double load =
        mech::required_push_force(params, units::kilograms(payload_mass), faults.friction_scale()).value();

    bool engaged = !c.link_broken && !slipping && proposed > c.payload_displacement;
    if (engaged && faults.link_break_force && load >= *faults.link_break_force) {
        c.link_broken = true;
        engaged = false;
    }
    if (c.link_broken) out.faults |= Fault::LinkBreak;

    if (engaged && load > force_available) {
        // Rack runs up to the payload face and stops there.
        c.stalled = true;
        if (faults.surface_friction_scale) out.faults |= Fault::SurfaceFriction;
        c.rack_extension = std::max(c.rack_extension, c.payload_displacement);
        out.current = servo.stall_current;
        return out;
    }

    c.stalled = false;
    c.rack_extension = proposed;
    if (engaged) {
        out.payload_displacement = proposed - c.payload_displacement;
        c.payload_displacement = proposed;
        const double load_fraction = std::clamp(load / force_available, 0.0, 1.0);
        out.current = servo.running_current_min +
                      (servo.running_current_max - servo.running_current_min) * load_fraction;
    } else {
        out.current = servo.running_current_min;
    }
    if (c.rack_extension >= stroke) {
        c.rack_extension = stroke;
        ++c.push_count;
        c.motion = CarrierMotion::Retracting;
    }
    return out;
}

/// The payload has cleared the bay once it has been pushed through the full stroke.
inline bool ejection_complete(double cumulative_payload_displacement, const mech::MechanismParams& params) {
    return cumulative_payload_displacement >= params.stroke.value();
}

}  // namespace raddeploy::act
