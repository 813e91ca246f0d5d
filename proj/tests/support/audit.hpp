#pragma once

// Trace audits shared by the property tests and the acceptance runner. Each
// check returns human-readable violations; an empty list means the trace is
// clean.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "raddeploy/raddeploy.hpp"

namespace raddeploy::support {

using mission::MissionResult;
using mission::Scenario;

inline std::string scenario_dir() { return RADDEPLOY_SCENARIO_DIR; }

inline Scenario bundled(const std::string& name) {
    return mission::load_scenario(scenario_dir() + "/" + name + ".cfg");
}

inline std::vector<std::string> bundled_names() {
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(scenario_dir()))
        if (e.path().extension() == ".cfg") out.push_back(e.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}

inline std::string telemetry_csv(const MissionResult& r) {
    std::ostringstream out;
    mission::write_telemetry_csv(out, r.telemetry);
    return out.str();
}

inline bool noise_off(const Scenario& s) {
    return s.barometer.pressure_noise_sigma == 0.0 && s.barometer.quantization == 0.0;
}

/// Altitude slack for comparing a command's truth altitude against a window
/// edge: sensor staleness at the worst vehicle descent rate plus pressure
/// error (six sigma when noise is on).
inline double window_allowance(const Scenario& s, const MissionResult& r, double edge) {
    const double sigmas = noise_off(s) ? 0.0 : 6.0;
    return sensors::altitude_error_bound(s.barometer, s.vehicle.atmosphere, edge, r.max_descent_rate, sigmas);
}

/// Deployment protocol checks over one mission trace.
inline std::vector<std::string> audit_protocol(const Scenario& s, const MissionResult& r) {
    std::vector<std::string> v;
    auto fail = [&](const std::string& what) { v.push_back(what); };
    constexpr double kEps = 1e-9;
    const auto& cfg = s.trigger;

    int unlocks = 0;
    int pushes = 0;
    for (const auto& c : r.commands) {
        const double t = to_seconds(c.command.time);
        if (c.command.kind == ctl::CommandKind::Unlock) {
            ++unlocks;
            if (!r.apogee_time || t < *r.apogee_time) fail("unlock before apogee");
            const double slack = window_allowance(s, r, cfg.deploy_ceiling);
            if (c.truth_altitude > cfg.deploy_ceiling + slack) fail("unlock above the window ceiling");
        } else {
            ++pushes;
            if (c.command.argument != pushes) fail("push pulses out of order");
        }
        if (noise_off(s)) {
            const double slack = window_allowance(s, r, cfg.deploy_floor);
            if (c.truth_altitude < cfg.deploy_floor - slack) fail("command below the deploy floor");
        }
        if (r.safe_hold_time && t >= *r.safe_hold_time - kEps) fail("command after SafeHold");
        if (r.unlock_time && c.command.kind == ctl::CommandKind::Push && t < *r.unlock_time) fail("push before unlock");
    }
    if (unlocks > 1) fail("more than one unlock");
    if (pushes > 3) fail("more than three pushes");

    if (r.first_push_time) {
        if (!r.door_open_time) {
            fail("push without the door ever opening");
        } else {
            const double delay = *r.first_push_time - *r.door_open_time;
            const double tick = to_seconds(ctl::TaskSchedule::standard().period_of(ctl::TaskId::DeployLogic));
            if (delay < cfg.stabilization_delay - kEps || delay > cfg.stabilization_delay + tick + kEps) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "stabilization delay %.6f s", delay);
                fail(buf);
            }
        }
    }

    // Phase sequence: strictly forward, SafeHold absorbing.
    for (std::size_t i = 1; i < r.phase_sequence.size(); ++i) {
        if (r.phase_sequence[i - 1].terminal()) fail("phase change after a terminal phase");
        if (r.phase_sequence[i].rank() <= r.phase_sequence[i - 1].rank()) fail("phase sequence went backwards");
    }
    for (std::size_t i = 1; i < r.flight_phase_sequence.size(); ++i)
        if (r.flight_phase_sequence[i] <= r.flight_phase_sequence[i - 1]) fail("flight phase went backwards");

    const auto& last = r.phase_sequence.back();
    if (last.kind == ctl::PhaseKind::Ejected && !r.verdict.deploy_time) fail("Ejected without ejection complete");
    if (r.verdict.deploy_time && last.kind == ctl::PhaseKind::SafeHold &&
        r.safe_hold_time && *r.verdict.deploy_time <= *r.safe_hold_time)
        fail("ejection complete but the controller held");

    // Verdict soundness.
    const bool deployed = r.verdict.outcome == mission::Outcome::DeployedInWindow;
    bool ejected_row = false;
    for (const auto& row : r.telemetry) ejected_row |= row.deploy_phase.kind == ctl::PhaseKind::Ejected;
    bool in_band = false;
    if (r.verdict.deploy_altitude_truth) {
        const double h = *r.verdict.deploy_altitude_truth;
        in_band = h <= cfg.deploy_ceiling + window_allowance(s, r, cfg.deploy_ceiling) &&
                  h >= cfg.deploy_floor - window_allowance(s, r, cfg.deploy_floor);
    }
    if (deployed != (ejected_row && in_band)) fail("verdict disagrees with telemetry");
    return v;
}

/// Actuator-side checks: door safety, rack bounds and the charge audit.
inline std::vector<std::string> audit_actuation(const Scenario& s, const MissionResult& r) {
    std::vector<std::string> v;
    const double stroke = s.mechanism.stroke.value();
    for (const auto& row : r.telemetry) {
        if (row.door_angle > 0.0 && (!r.unlock_time || to_seconds(row.time) < *r.unlock_time))
            v.push_back("door moved before unlock");
        if (row.rack_extension < 0.0 || row.rack_extension > stroke) v.push_back("rack outside [0, stroke]");
        if (row.push_count > 3) v.push_back("push count above three");
    }
    const double denom = std::max(std::abs(r.battery_consumed), 1e-300);
    if (std::abs(r.reported_charge - r.battery_consumed) / denom > 1e-9 &&
        std::abs(r.reported_charge - r.battery_consumed) > 1e-12)
        v.push_back("charge audit mismatch");
    return v;
}

/// Random flight profiles and fault plans. Draws use the library's uniform
/// mapping so a failing case is reproducible from its index alone.
class ScenarioFuzzer {
public:
    explicit ScenarioFuzzer(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }
    bool chance(double p) { return rng_.uniform() < p; }
    int pick(int lo, int hi) { return lo + static_cast<int>(rng_.uniform() * (hi - lo + 1)); }

    Scenario next() {
        Scenario s;
        s.vehicle.dry_mass = uniform(15.0, 40.0);
        s.vehicle.propellant_mass = uniform(4.0, 14.0);
        s.vehicle.avg_thrust = uniform(1500.0, 4500.0);
        s.vehicle.burn_time = uniform(3.0, 8.0);
        s.vehicle.drag_area_coast = uniform(0.005, 0.02);
        s.vehicle.drogue_drag_area = uniform(0.6, 3.0);

        s.payload.mass = uniform(0.5, 16.0);
        s.payload.parachute_drag_area = uniform(0.3, 1.0);
        s.mechanism.friction_coefficient = uniform(0.3, 0.9);

        s.trigger.deploy_ceiling = uniform(1500.0, 4500.0);
        s.trigger.deploy_floor = s.trigger.deploy_ceiling - uniform(100.0, 400.0);

        if (chance(0.5)) {
            s.barometer.pressure_noise_sigma = 0.0;
            s.barometer.quantization = 0.0;
        } else {
            s.barometer.pressure_noise_sigma = uniform(0.0, 5.0);
            s.barometer.quantization = chance(0.5) ? 1.0 : 0.0;
        }
        s.barometer.latency = 0.02 * pick(0, 2);
        s.barometer.sample_rate = chance(0.5) ? 50.0 : 25.0;

        if (chance(0.2)) s.faults.gear_slip_push = pick(1, 3);
        if (chance(0.2)) s.faults.link_break_force = uniform(0.0, 40.0);
        if (chance(0.2)) s.faults.surface_friction_scale = uniform(1.0, 4.0);
        if (chance(0.2)) s.faults.battery_fail_time = uniform(0.0, 300.0);
        s.faults.door_jam = chance(0.1);

        s.seed = static_cast<std::uint64_t>(pick(0, 1 << 30));
        return s;
    }

private:
    GaussianSource rng_;
};

}  // namespace raddeploy::support
