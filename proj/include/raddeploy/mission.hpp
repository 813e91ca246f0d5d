#pragma once

// Closed-loop mission: vehicle, barometer, flight software, actuators and the
// released payload advanced on one logical clock.
//
// Each tick k (now = k * dt):
//   1. physics over (now - dt, now]: vehicle, lock actuator, door, carrier,
//      battery, then the payload (released the step its push completes);
//   2. the barometer is polled at `now`;
//   3. due tasks run in priority order; commands take effect from the next step;
//   4. telemetry rows are sampled after the controller so they show the
//      phase decided at `now`.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "raddeploy/actuation.hpp"
#include "raddeploy/barometer.hpp"
#include "raddeploy/controller.hpp"
#include "raddeploy/flight_sim.hpp"
#include "raddeploy/scenario.hpp"
#include "raddeploy/scheduler.hpp"
#include "raddeploy/telemetry.hpp"

namespace raddeploy::mission {

enum class Outcome { DeployedInWindow, SafeHold, LandedUndeployed, Timeout };

inline std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::DeployedInWindow: return "DeployedInWindow";
        case Outcome::SafeHold: return "SafeHold";
        case Outcome::LandedUndeployed: return "LandedUndeployed";
        case Outcome::Timeout: return "Timeout";
    }
    return "?";
}

/// Process exit status for each outcome.
inline int exit_code(Outcome o) {
    switch (o) {
        case Outcome::DeployedInWindow: return 0;
        case Outcome::SafeHold: return 2;
        case Outcome::LandedUndeployed: return 3;
        case Outcome::Timeout: return 4;
    }
    return 1;
}
inline constexpr int kExitConfigError = 64;

struct MissionVerdict {
    Outcome outcome = Outcome::Timeout;
    ctl::SafeHoldReason reason = ctl::SafeHoldReason::None;
    std::optional<double> deploy_altitude_truth;  // m, vehicle altitude when the payload cleared the bay
    std::optional<double> deploy_time;            // s
    double energy_used = 0.0;                     // J
    double peak_current = 0.0;                    // A
    act::FaultFlags faults;
    double end_time = 0.0;                        // s
};

/// A controller command annotated with the truth state when it was issued.
struct CommandRecord {
    ctl::Command command;
    double truth_altitude = 0.0;
    double truth_velocity = 0.0;
};

struct MissionResult {
    MissionVerdict verdict;
    std::vector<TelemetryRecord> telemetry;
    std::vector<CommandRecord> commands;

    // Truth-side events for auditing.
    std::optional<double> apogee_time;
    std::optional<double> apogee_altitude;
    std::optional<double> door_open_time;       // first step the door reached the open threshold
    std::optional<double> first_push_time;
    std::optional<double> safe_hold_time;
    std::optional<double> unlock_time;
    std::optional<double> fault_onset_time;     // first step any injected fault manifested
    double max_descent_rate = 0.0;              // m/s, vehicle
    double reported_charge = 0.0;               // C, sum of reported current * dt
    double battery_consumed = 0.0;              // C, battery bookkeeping
    std::vector<ctl::DeploymentPhase> phase_sequence;  // distinct phases in order of entry
    std::vector<flight::FlightPhase> flight_phase_sequence;
};

inline MissionResult run_mission(const Scenario& scenario) {
    scenario.validate();
    const Micros dt_us = from_seconds(scenario.dt);
    const double dt = to_seconds(dt_us);
    const Micros max_time{static_cast<std::int64_t>(std::ceil(scenario.max_sim_time * 1e6))};

    const ctl::TaskSchedule schedule = ctl::TaskSchedule::standard();
    schedule.check_step(dt_us);

    sensors::BarometerSpec baro_spec = scenario.barometer;
    baro_spec.seed = scenario.seed;
    sensors::Barometer barometer(baro_spec, scenario.vehicle.atmosphere);

    const double push_time = act::single_push_time(scenario.servo, scenario.mechanism);
    ctl::DeploymentController controller(scenario.trigger, ctl::resolve_push_timeout(scenario.trigger, push_time));

    flight::FlightState vehicle = flight::launch_state(scenario.vehicle, scenario.payload.mass);
    flight::PayloadBody payload = scenario.payload;
    payload.state = flight::PayloadState::Stowed;
    act::DoorState door;
    act::CarrierState carrier;
    act::BatteryState battery = act::BatteryState::full(scenario.battery);
    act::FaultFlags faults;
    double step_current = 0.0;

    MissionResult result;
    MissionVerdict& verdict = result.verdict;
    result.phase_sequence.push_back(controller.phase());
    result.flight_phase_sequence.push_back(vehicle.phase);

    bool timed_out = false;
    for (std::int64_t k = 0;; ++k) {
        const Micros now = dt_us * k;
        if (now >= max_time) {
            timed_out = true;
            break;
        }
        const double now_s = to_seconds(now);

        if (k > 0) {
            const bool holding = controller.phase().kind == ctl::PhaseKind::SafeHold;
            const bool powered = !battery.failed && !holding;

            vehicle = flight::step_vehicle(scenario.vehicle, vehicle, dt);
            vehicle.time = now_s;
            if (vehicle.phase != result.flight_phase_sequence.back()) {
                result.flight_phase_sequence.push_back(vehicle.phase);
                if (vehicle.phase == flight::FlightPhase::DrogueDescent && !result.apogee_time) {
                    result.apogee_time = now_s;
                    result.apogee_altitude = vehicle.altitude;
                }
            }
            result.max_descent_rate = std::max(result.max_descent_rate, -vehicle.velocity);

            act::ActuatorStep door_step;
            if (!holding) door = act::step_lock_actuator(door, scenario.door, battery, dt_us, door_step);
            door = act::step_door(door, scenario.door, scenario.faults, dt, door_step);
            if (door.open && !result.door_open_time) result.door_open_time = now_s;

            act::CarrierStep carrier_step = act::step_carrier(carrier, scenario.servo, scenario.payload.mass,
                                                              scenario.mechanism, scenario.faults, powered, dt);
            carrier = carrier_step.state;
            act::FaultFlags step_faults = door_step.faults | carrier_step.faults;

            const double demanded = battery.failed ? 0.0 : door_step.current + carrier_step.current;
            const double volts = battery.voltage;
            const double before = battery.consumed;
            const bool was_failed = battery.failed;
            battery = act::drain_battery(battery, demanded, dt, now_s, scenario.faults);
            const double delivered = battery.consumed - before;
            if (battery.failed && !was_failed) step_faults |= act::Fault::BatteryFail;
            // Actuator-side report; the battery keeps its own books.
            step_current = demanded;
            result.reported_charge += demanded * dt;
            verdict.energy_used += volts * delivered;
            verdict.peak_current = std::max(verdict.peak_current, step_current);

            if (step_faults.any() && !result.fault_onset_time) result.fault_onset_time = now_s;
            faults |= step_faults;

            if (payload.state == flight::PayloadState::Stowed) {
                if (act::ejection_complete(carrier.payload_displacement, scenario.mechanism)) {
                    payload = flight::release_payload(payload, vehicle.altitude, vehicle.velocity, now_s);
                    vehicle.mass -= payload.mass;
                    verdict.deploy_altitude_truth = vehicle.altitude;
                    verdict.deploy_time = now_s;
                }
            } else {
                payload = flight::step_payload(payload, dt, scenario.vehicle.atmosphere, scenario.vehicle.gravity);
            }
        }

        const auto delivered_sample = barometer.sample(vehicle.altitude, now);
        (void)delivered_sample;

        for (const ctl::TaskId task : schedule.due(now)) {
            switch (task) {
                case ctl::TaskId::SenseBarometer:
                    controller.sense(barometer.latest());
                    break;
                case ctl::TaskId::EstimateState:
                    controller.estimate();
                    break;
                case ctl::TaskId::DeployLogic: {
                    const bool ejected = act::ejection_complete(carrier.payload_displacement, scenario.mechanism);
                    const auto cmd = controller.deploy_logic(door, carrier, battery, ejected, now);
                    if (controller.phase() != result.phase_sequence.back()) {
                        result.phase_sequence.push_back(controller.phase());
                        if (controller.phase().kind == ctl::PhaseKind::SafeHold) result.safe_hold_time = now_s;
                    }
                    if (!cmd) break;
                    result.commands.push_back({*cmd, vehicle.altitude, vehicle.velocity});
                    if (cmd->kind == ctl::CommandKind::Unlock) {
                        door = act::request_unlock(door);
                        result.unlock_time = now_s;
                    } else {
                        carrier = act::start_push(carrier, door);
                        if (!result.first_push_time) result.first_push_time = now_s;
                    }
                    break;
                }
                case ctl::TaskId::Telemetry: {
                    TelemetryRecord row;
                    row.time = now;
                    row.truth_altitude = vehicle.altitude;
                    row.truth_velocity = vehicle.velocity;
                    row.sensed_altitude = controller.sensed_altitude();
                    row.flight_phase = vehicle.phase;
                    row.deploy_phase = controller.phase();
                    row.door_angle = door.angle;
                    row.rack_extension = carrier.rack_extension;
                    row.push_count = carrier.push_count;
                    row.current = step_current;
                    row.battery_voltage = battery.voltage;
                    row.faults = faults;
                    result.telemetry.push_back(row);
                    break;
                }
            }
        }

        verdict.end_time = now_s;
        const bool vehicle_down = vehicle.phase == flight::FlightPhase::Landed;
        if (payload.state == flight::PayloadState::Landed) break;
        if (vehicle_down && payload.state == flight::PayloadState::Stowed) break;
    }

    verdict.faults = faults;
    result.battery_consumed = battery.consumed;
    const ctl::DeploymentPhase& phase = controller.phase();
    if (phase.kind == ctl::PhaseKind::Ejected) {
        verdict.outcome = Outcome::DeployedInWindow;
    } else if (phase.kind == ctl::PhaseKind::SafeHold) {
        verdict.outcome = Outcome::SafeHold;
        verdict.reason = phase.reason;
    } else {
        verdict.outcome = timed_out ? Outcome::Timeout : Outcome::LandedUndeployed;
    }
    return result;
}

/// Plain-text summary.
inline std::string verdict_summary(const MissionVerdict& v) {
    std::string s = "outcome: " + to_string(v.outcome);
    if (v.outcome == Outcome::SafeHold) s += " (" + ctl::to_string(v.reason) + ")";
    s += "\n";
    char buf[256];
    if (v.deploy_altitude_truth) {
        std::snprintf(buf, sizeof buf, "deployed at %.2f m (truth), t = %.3f s\n", *v.deploy_altitude_truth,
                      *v.deploy_time);
        s += buf;
    }
    std::snprintf(buf, sizeof buf, "energy used: %.3f J, peak current: %.3f A\nfaults: %s\nend time: %.3f s\n",
                  v.energy_used, v.peak_current, v.faults.to_string().c_str(), v.end_time);
    s += buf;
    return s;
}

/// Machine-readable key=value lines.
inline std::string verdict_key_values(const MissionVerdict& v) {
    char buf[512];
    auto opt = [](const std::optional<double>& x, const char* fmt) {
        if (!x) return std::string("none");
        char b[64];
        std::snprintf(b, sizeof b, fmt, *x);
        return std::string(b);
    };
    std::snprintf(buf, sizeof buf,
                  "outcome=%s\nreason=%s\nexit_code=%d\ndeploy_altitude_truth_m=%s\ndeploy_time_s=%s\n"
                  "energy_used_j=%.6f\npeak_current_a=%.6f\nfault_flags=%s\nend_time_s=%.3f\n",
                  to_string(v.outcome).c_str(), ctl::to_string(v.reason).c_str(), exit_code(v.outcome),
                  opt(v.deploy_altitude_truth, "%.6f").c_str(), opt(v.deploy_time, "%.3f").c_str(), v.energy_used,
                  v.peak_current, v.faults.to_string().c_str(), v.end_time);
    return buf;
}

}  // namespace raddeploy::mission
