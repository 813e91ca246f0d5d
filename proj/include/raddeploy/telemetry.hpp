#pragma once

// Telemetry rows and their CSV encoding. The column set is versioned; bump
// kTelemetrySchemaVersion whenever a column is added, removed or reformatted.

#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "raddeploy/actuation.hpp"
#include "raddeploy/controller.hpp"
#include "raddeploy/flight_sim.hpp"
#include "raddeploy/sim_time.hpp"

namespace raddeploy::mission {

inline constexpr int kTelemetrySchemaVersion = 1;

inline constexpr const char* kTelemetryColumns =
    "time_s,truth_alt_m,truth_vel_mps,sensed_alt_m,flight_phase,deploy_phase,door_angle_rad,rack_ext_m,push_count,"
    "current_a,battery_v,fault_flags";

struct TelemetryRecord {
    Micros time{0};
    double truth_altitude = 0.0;
    double truth_velocity = 0.0;
    std::optional<double> sensed_altitude;
    flight::FlightPhase flight_phase = flight::FlightPhase::PreLaunch;
    ctl::DeploymentPhase deploy_phase;
    double door_angle = 0.0;
    double rack_extension = 0.0;
    int push_count = 0;
    double current = 0.0;
    double battery_voltage = 0.0;
    act::FaultFlags faults;
};

inline std::string telemetry_header() {
    return "# raddeploy telemetry schema_version=" + std::to_string(kTelemetrySchemaVersion) + "\n" +
           kTelemetryColumns + "\n";
}

/// One CSV line. Fixed printf formats so that identical doubles always render
/// identically; an absent sensor reading is an empty field.
inline std::string format_row(const TelemetryRecord& r) {
    char sensed[48] = "";
    if (r.sensed_altitude) std::snprintf(sensed, sizeof sensed, "%.6f", *r.sensed_altitude);
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.3f,%.6f,%.6f,%s,%s,%s,%.6f,%.6f,%d,%.6f,%.3f,%s\n", to_seconds(r.time),
                  r.truth_altitude, r.truth_velocity, sensed, std::string(flight::to_string(r.flight_phase)).c_str(),
                  r.deploy_phase.to_string().c_str(), r.door_angle, r.rack_extension, r.push_count, r.current,
                  r.battery_voltage, r.faults.to_string().c_str());
    return buf;
}

inline void write_telemetry_csv(std::ostream& out, std::span<const TelemetryRecord> rows) {
    out << telemetry_header();
    for (const auto& r : rows) out << format_row(r);
}

}  // namespace raddeploy::mission
