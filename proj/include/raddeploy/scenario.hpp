#pragma once

// Scenario files: flat `section.key = value` lines, SI units, `#` comments.
// Unknown keys and duplicate keys are rejected; missing keys keep their
// defaults, so an empty file is the reference scenario. The full key table is
// `scenario_keys()`; docs/scenario_format.md mirrors it.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "raddeploy/actuation.hpp"
#include "raddeploy/barometer.hpp"
#include "raddeploy/controller.hpp"
#include "raddeploy/errors.hpp"
#include "raddeploy/flight_sim.hpp"
#include "raddeploy/mech_calc.hpp"
#include "raddeploy/scheduler.hpp"

namespace raddeploy::mission {

struct Scenario {
    flight::VehicleSpec vehicle;
    flight::PayloadBody payload;
    mech::MechanismParams mechanism;
    act::ServoSpec servo;
    act::DoorSpec door;
    act::BatterySpec battery;
    sensors::BarometerSpec barometer;
    ctl::TriggerConfig trigger;
    act::FaultPlan faults;
    double dt = 0.001;           // s
    std::uint64_t seed = 1;
    double max_sim_time = 1200;  // s

    /// Component invariants plus cross-field rules. Throws ConfigError naming a key.
    void validate() const;
};

enum class ValueKind { Real, Integer, Bool };

struct KeySpec {
    std::string_view key;
    ValueKind kind;
    double lo;
    double hi;
    bool lo_open;
    bool hi_open;
    std::function<void(Scenario&, double)> set;
    std::function<double(const Scenario&)> get;  // NaN when unset (optional faults)
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline std::vector<KeySpec> build_keys() {
    using VK = ValueKind;
    std::vector<KeySpec> k;
    auto positive = [&](std::string_view key, auto set, auto get) {
        k.push_back({key, VK::Real, 0.0, kInf, true, true, set, get});
    };
    auto nonneg = [&](std::string_view key, auto set, auto get) {
        k.push_back({key, VK::Real, 0.0, kInf, false, true, set, get});
    };
    using S = Scenario;

    positive("vehicle.dry_mass", [](S& s, double v) { s.vehicle.dry_mass = v; }, [](const S& s) { return s.vehicle.dry_mass; });
    nonneg("vehicle.propellant_mass", [](S& s, double v) { s.vehicle.propellant_mass = v; }, [](const S& s) { return s.vehicle.propellant_mass; });
    nonneg("vehicle.avg_thrust", [](S& s, double v) { s.vehicle.avg_thrust = v; }, [](const S& s) { return s.vehicle.avg_thrust; });
    nonneg("vehicle.burn_time", [](S& s, double v) { s.vehicle.burn_time = v; }, [](const S& s) { return s.vehicle.burn_time; });
    nonneg("vehicle.drag_area_coast", [](S& s, double v) { s.vehicle.drag_area_coast = v; }, [](const S& s) { return s.vehicle.drag_area_coast; });
    nonneg("vehicle.drogue_drag_area", [](S& s, double v) { s.vehicle.drogue_drag_area = v; }, [](const S& s) { return s.vehicle.drogue_drag_area; });

    positive("atmosphere.sea_level_pressure", [](S& s, double v) { s.vehicle.atmosphere.sea_level_pressure = v; }, [](const S& s) { return s.vehicle.atmosphere.sea_level_pressure; });
    positive("atmosphere.sea_level_temperature", [](S& s, double v) { s.vehicle.atmosphere.sea_level_temperature = v; }, [](const S& s) { return s.vehicle.atmosphere.sea_level_temperature; });
    positive("atmosphere.lapse_rate", [](S& s, double v) { s.vehicle.atmosphere.lapse_rate = v; }, [](const S& s) { return s.vehicle.atmosphere.lapse_rate; });

    positive("payload.mass", [](S& s, double v) { s.payload.mass = v; }, [](const S& s) { return s.payload.mass; });
    nonneg("payload.parachute_drag_area", [](S& s, double v) { s.payload.parachute_drag_area = v; }, [](const S& s) { return s.payload.parachute_drag_area; });
    nonneg("payload.parachute_open_altitude_loss", [](S& s, double v) { s.payload.parachute_open_altitude_loss = v; }, [](const S& s) { return s.payload.parachute_open_altitude_loss; });

    positive("mechanism.pitch_diameter", [](S& s, double v) { s.mechanism.pinion_pitch_diameter = units::meters(v); }, [](const S& s) { return s.mechanism.pinion_pitch_diameter.value(); });
    k.push_back({"mechanism.efficiency", VK::Real, 0.0, 1.0, true, false,
                 [](S& s, double v) { s.mechanism.drivetrain_efficiency = v; },
                 [](const S& s) { return s.mechanism.drivetrain_efficiency; }});
    nonneg("mechanism.friction_coefficient", [](S& s, double v) { s.mechanism.friction_coefficient = v; }, [](const S& s) { return s.mechanism.friction_coefficient; });
    positive("mechanism.stroke", [](S& s, double v) { s.mechanism.stroke = units::meters(v); }, [](const S& s) { return s.mechanism.stroke.value(); });
    positive("mechanism.time_budget", [](S& s, double v) { s.mechanism.deployment_time_budget = units::seconds(v); }, [](const S& s) { return s.mechanism.deployment_time_budget.value(); });
    // One gravity for sizing and for flight.
    positive("mechanism.gravity", [](S& s, double v) { s.mechanism.gravity = units::meters_per_second2(v); s.vehicle.gravity = v; }, [](const S& s) { return s.mechanism.gravity.value(); });

    // The servo torque is also the sizing torque.
    positive("servo.stall_torque", [](S& s, double v) { s.servo.stall_torque = v; s.mechanism.servo_stall_torque = units::newton_meters(v); }, [](const S& s) { return s.servo.stall_torque; });
    positive("servo.rated_speed", [](S& s, double v) { s.servo.rated_speed = v; }, [](const S& s) { return s.servo.rated_speed; });
    positive("servo.running_current_min", [](S& s, double v) { s.servo.running_current_min = v; }, [](const S& s) { return s.servo.running_current_min; });
    positive("servo.running_current_max", [](S& s, double v) { s.servo.running_current_max = v; }, [](const S& s) { return s.servo.running_current_max; });
    positive("servo.stall_current", [](S& s, double v) { s.servo.stall_current = v; }, [](const S& s) { return s.servo.stall_current; });
    positive("servo.operating_voltage", [](S& s, double v) { s.servo.operating_voltage = v; }, [](const S& s) { return s.servo.operating_voltage; });

    positive("door.actuator_travel_time", [](S& s, double v) { s.door.actuator_travel_time = v; }, [](const S& s) { return s.door.actuator_travel_time; });
    positive("door.open_time", [](S& s, double v) { s.door.open_time = v; }, [](const S& s) { return s.door.open_time; });
    k.push_back({"door.max_open", VK::Real, 0.0, std::numbers::pi, true, false, [](S& s, double v) { s.door.max_open = v; }, [](const S& s) { return s.door.max_open; }});
    k.push_back({"door.open_threshold", VK::Real, 0.0, std::numbers::pi, true, false, [](S& s, double v) { s.door.open_threshold = v; }, [](const S& s) { return s.door.open_threshold; }});
    nonneg("door.actuator_current", [](S& s, double v) { s.door.actuator_current = v; }, [](const S& s) { return s.door.actuator_current; });

    positive("battery.nominal_voltage", [](S& s, double v) { s.battery.nominal_voltage = v; }, [](const S& s) { return s.battery.nominal_voltage; });
    positive("battery.capacity", [](S& s, double v) { s.battery.capacity = v; }, [](const S& s) { return s.battery.capacity; });

    positive("barometer.sample_rate", [](S& s, double v) { s.barometer.sample_rate = v; }, [](const S& s) { return s.barometer.sample_rate; });
    nonneg("barometer.noise_sigma", [](S& s, double v) { s.barometer.pressure_noise_sigma = v; }, [](const S& s) { return s.barometer.pressure_noise_sigma; });
    nonneg("barometer.quantization", [](S& s, double v) { s.barometer.quantization = v; }, [](const S& s) { return s.barometer.quantization; });
    nonneg("barometer.latency", [](S& s, double v) { s.barometer.latency = v; }, [](const S& s) { return s.barometer.latency; });

    k.push_back({"trigger.deploy_ceiling", VK::Real, 0.0, atmo::kTroposphereTop, false, false, [](S& s, double v) { s.trigger.deploy_ceiling = v; }, [](const S& s) { return s.trigger.deploy_ceiling; }});
    k.push_back({"trigger.deploy_floor", VK::Real, 0.0, atmo::kTroposphereTop, false, false, [](S& s, double v) { s.trigger.deploy_floor = v; }, [](const S& s) { return s.trigger.deploy_floor; }});
    k.push_back({"trigger.arm_after_apogee", VK::Bool, 0.0, 1.0, false, false, [](S& s, double v) { s.trigger.arm_after_apogee = v != 0.0; }, [](const S& s) { return s.trigger.arm_after_apogee ? 1.0 : 0.0; }});
    positive("trigger.door_open_timeout", [](S& s, double v) { s.trigger.door_open_timeout = v; }, [](const S& s) { return s.trigger.door_open_timeout; });
    nonneg("trigger.push_timeout", [](S& s, double v) { s.trigger.push_timeout = v; }, [](const S& s) { return s.trigger.push_timeout; });
    nonneg("trigger.stabilization_delay", [](S& s, double v) { s.trigger.stabilization_delay = v; }, [](const S& s) { return s.trigger.stabilization_delay; });
    nonneg("trigger.apogee_margin", [](S& s, double v) { s.trigger.apogee_margin = v; }, [](const S& s) { return s.trigger.apogee_margin; });

    k.push_back({"faults.gear_slip", VK::Integer, 1.0, kInf, false, true, [](S& s, double v) { s.faults.gear_slip_push = static_cast<int>(v); }, [](const S& s) { return s.faults.gear_slip_push ? double(*s.faults.gear_slip_push) : kNaN; }});
    nonneg("faults.link_break", [](S& s, double v) { s.faults.link_break_force = v; }, [](const S& s) { return s.faults.link_break_force.value_or(kNaN); });
    positive("faults.surface_friction_scale", [](S& s, double v) { s.faults.surface_friction_scale = v; }, [](const S& s) { return s.faults.surface_friction_scale.value_or(kNaN); });
    nonneg("faults.battery_fail", [](S& s, double v) { s.faults.battery_fail_time = v; }, [](const S& s) { return s.faults.battery_fail_time.value_or(kNaN); });
    k.push_back({"faults.door_jam", VK::Bool, 0.0, 1.0, false, false, [](S& s, double v) { s.faults.door_jam = v != 0.0; }, [](const S& s) { return s.faults.door_jam ? 1.0 : 0.0; }});

    positive("sim.dt", [](S& s, double v) { s.dt = v; }, [](const S& s) { return s.dt; });
    k.push_back({"sim.seed", VK::Integer, 0.0, 9007199254740992.0, false, false, [](S& s, double v) { s.seed = static_cast<std::uint64_t>(v); }, [](const S& s) { return static_cast<double>(s.seed); }});
    positive("sim.max_time", [](S& s, double v) { s.max_sim_time = v; }, [](const S& s) { return s.max_sim_time; });
    return k;
}

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

inline const std::vector<KeySpec>& scenario_keys() {
    static const std::vector<KeySpec> keys = detail::build_keys();
    return keys;
}

inline const KeySpec* find_key(std::string_view key) {
    for (const auto& k : scenario_keys())
        if (k.key == key) return &k;
    return nullptr;
}

/// Parses `text` as a value of `spec`'s kind and checks its range.
inline double parse_value(const KeySpec& spec, std::string_view text, int line = 0) {
    const std::string key(spec.key);
    text = detail::trim(text);
    if (spec.kind == ValueKind::Bool) {
        if (text == "true" || text == "1") return 1.0;
        if (text == "false" || text == "0") return 0.0;
        throw ConfigError(key, line, key + ": expected true or false, got '" + std::string(text) + "'");
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError(key, line, key + ": not a finite number: '" + std::string(text) + "'");
    if (spec.kind == ValueKind::Integer && v != std::floor(v))
        throw ConfigError(key, line, key + ": expected an integer, got '" + std::string(text) + "'");
    const bool lo_ok = spec.lo_open ? v > spec.lo : v >= spec.lo;
    const bool hi_ok = spec.hi_open ? v < spec.hi : v <= spec.hi;
    if (!lo_ok || !hi_ok) {
        std::ostringstream msg;
        msg << key << " = " << text << " is outside " << (spec.lo_open ? "(" : "[") << spec.lo << ", " << spec.hi
            << (spec.hi_open ? ")" : "]");
        throw ConfigError(key, line, msg.str());
    }
    return v;
}

/// Sets one key from its textual value. Throws ConfigError for unknown keys.
inline void apply_override(Scenario& s, std::string_view key, std::string_view value, int line = 0) {
    const KeySpec* spec = find_key(key);
    if (!spec) throw ConfigError(std::string(key), line, "unknown key '" + std::string(key) + "'");
    spec->set(s, parse_value(*spec, value, line));
}

inline void Scenario::validate() const {
    auto fail = [](const char* key, const std::string& why) { throw ConfigError(key, 0, std::string(key) + ": " + why); };
    // Component checks report "<field> must ..."; name the scenario key when
    // the field maps onto one, else the section.
    auto guard = [&](const char* section, const auto& check) {
        try {
            check();
        } catch (const InvalidParameter& e) {
            const std::string what = e.what();
            const std::string word = what.substr(0, what.find(' '));
            std::string key = section;
            if (find_key(word)) key = word;
            else if (find_key(key + "." + word)) key += "." + word;
            throw ConfigError(key, 0, key + ": " + what);
        }
    };
    guard("vehicle", [&] { vehicle.validate(); });
    guard("payload", [&] { payload.validate(); });
    guard("mechanism", [&] { mechanism.validate(); });
    guard("servo", [&] { servo.validate(); });
    guard("door", [&] { door.validate(); });
    guard("battery", [&] { battery.validate(); });
    guard("barometer", [&] { barometer.validate(); });
    guard("trigger", [&] { trigger.validate(); });
    guard("faults", [&] { faults.validate(); });

    if (!(trigger.deploy_floor < trigger.deploy_ceiling))
        fail("trigger.deploy_floor", "must be below trigger.deploy_ceiling");
    if (servo.running_current_max < servo.running_current_min)
        fail("servo.running_current_max", "must be >= servo.running_current_min");
    if (door.open_threshold > door.max_open) fail("door.open_threshold", "must be <= door.max_open");
    if (servo.stall_torque != mechanism.servo_stall_torque.value())
        fail("servo.stall_torque", "servo and sizing torque disagree");
    if (vehicle.gravity != mechanism.gravity.value()) fail("mechanism.gravity", "vehicle and sizing gravity disagree");

    Micros step{};
    guard("sim.dt", [&] { step = from_seconds(dt); });
    if (step.count() <= 0) fail("sim.dt", "must be at least 1 us");
    guard("sim.dt", [&] { ctl::TaskSchedule::standard().check_step(step); });
    if (period_from_rate(barometer.sample_rate).count() % step.count() != 0)
        fail("sim.dt", "must divide the barometer sample period");
    if (from_seconds(barometer.latency).count() % step.count() != 0)
        fail("barometer.latency", "must be a whole number of sim.dt steps");
    if (!(max_sim_time > 0.0)) fail("sim.max_time", "must be > 0");
}

/// Parses scenario text. `source` names the input in error messages.
inline Scenario parse_scenario(std::string_view text) {
    Scenario s;
    std::set<std::string, std::less<>> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("", line_no, "line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string_view key = detail::trim(line.substr(0, eq));
        const std::string_view value = line.substr(eq + 1);
        if (!seen.emplace(key).second)
            throw ConfigError(std::string(key), line_no,
                              "line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
        try {
            apply_override(s, key, value, line_no);
        } catch (const ConfigError& e) {
            throw ConfigError(e.key(), line_no, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    s.validate();
    return s;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", 0, "cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

/// Applies a `--fault NAME[:param]` override.
inline void apply_fault_override(Scenario& s, std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string_view name = spec.substr(0, colon);
    const std::string_view param = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    auto need = [&](std::string_view key) {
        if (param.empty()) throw ConfigError(std::string(key), 0, "fault '" + std::string(name) + "' needs a parameter");
        apply_override(s, key, param);
    };
    if (name == "link_break") need("faults.link_break");
    else if (name == "gear_slip") need("faults.gear_slip");
    else if (name == "friction" || name == "surface_friction_scale") need("faults.surface_friction_scale");
    else if (name == "battery_fail") need("faults.battery_fail");
    else if (name == "door_jam") apply_override(s, "faults.door_jam", param.empty() ? "true" : param);
    else throw ConfigError("faults", 0, "unknown fault '" + std::string(name) + "'");
}

/// Every key with its current value, in table order; unset faults are skipped.
inline std::string dump_scenario(const Scenario& s) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& k : scenario_keys()) {
        const double v = k.get(s);
        if (std::isnan(v)) continue;
        out << k.key << " = ";
        if (k.kind == ValueKind::Bool)
            out << (v != 0.0 ? "true" : "false");
        else
            out << v;
        out << '\n';
    }
    return out.str();
}

}  // namespace raddeploy::mission
