#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>

#include "raddeploy/raddeploy.hpp"
#include "support/audit.hpp"

using namespace raddeploy;
using namespace raddeploy::mission;

namespace {

std::string error_key(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ConfigError& e) {
        return e.key() + "@" + std::to_string(e.line());
    }
    return "ok";
}

}  // namespace

TEST(ScenarioFile, BundledNominalHasReferenceConstants) {
    const Scenario s = support::bundled("altair_nominal");
    const mech::MechanismParams ref;
    EXPECT_EQ(s.mechanism.servo_stall_torque, ref.servo_stall_torque);
    EXPECT_EQ(s.mechanism.pinion_pitch_diameter, ref.pinion_pitch_diameter);
    EXPECT_EQ(s.mechanism.drivetrain_efficiency, ref.drivetrain_efficiency);
    EXPECT_EQ(s.mechanism.friction_coefficient, ref.friction_coefficient);
    EXPECT_EQ(s.mechanism.stroke, ref.stroke);
    EXPECT_EQ(s.mechanism.deployment_time_budget, ref.deployment_time_budget);
    EXPECT_EQ(s.payload.mass, 1.0);
    EXPECT_EQ(s.trigger.deploy_ceiling, 3000.0);
    EXPECT_EQ(s.trigger.deploy_floor, 2800.0);
}

TEST(ScenarioFile, EmptyFileIsDefaults) {
    EXPECT_EQ(dump_scenario(parse_scenario("")), dump_scenario(Scenario{}));
    EXPECT_EQ(dump_scenario(parse_scenario("# only a comment\n\n   \n")), dump_scenario(Scenario{}));
}

TEST(ScenarioFile, OutOfRangeValueNamesKey) {
    EXPECT_EQ(error_key("mechanism.efficiency = 1.3\n"), "mechanism.efficiency@1");
    EXPECT_EQ(error_key("payload.mass = 1\nmechanism.efficiency = 0\n"), "mechanism.efficiency@2");
}

TEST(ScenarioFile, SyntaxErrors) {
    EXPECT_EQ(error_key("payload.mass 1\n"), "@1");
    EXPECT_EQ(error_key("\n\nno.such.key = 1\n"), "no.such.key@3");
    EXPECT_EQ(error_key("payload.mass = 1\npayload.mass = 2\n"), "payload.mass@2");
    EXPECT_EQ(error_key("payload.mass = heavy\n"), "payload.mass@1");
    EXPECT_EQ(error_key("payload.mass = 1kg\n"), "payload.mass@1");
    EXPECT_EQ(error_key("payload.mass = nan\n"), "payload.mass@1");
    EXPECT_EQ(error_key("faults.gear_slip = 1.5\n"), "faults.gear_slip@1");
    EXPECT_EQ(error_key("faults.door_jam = maybe\n"), "faults.door_jam@1");
}

TEST(ScenarioFile, CrossFieldRules) {
    EXPECT_EQ(error_key("trigger.deploy_floor = 3100\n"), "trigger.deploy_floor@0");
    EXPECT_EQ(error_key("sim.dt = 0.003\n"), "sim.dt@0");
    EXPECT_EQ(error_key("sim.dt = 0.0000005\n"), "sim.dt@0");
    EXPECT_EQ(error_key("barometer.latency = 0.0205\n"), "barometer.latency@0");
    EXPECT_EQ(error_key("sim.dt = 0.002\n"), "ok");
}

TEST(ScenarioFile, CommentsAndWhitespace) {
    const Scenario s = parse_scenario("  payload.mass   =  2.5   # heavier\r\nfaults.door_jam=true\n");
    EXPECT_EQ(s.payload.mass, 2.5);
    EXPECT_TRUE(s.faults.door_jam);
}

TEST(ScenarioFile, LinkedKeys) {
    const Scenario s = parse_scenario("servo.stall_torque = 1.2\nmechanism.gravity = 9.80665\n");
    EXPECT_EQ(s.mechanism.servo_stall_torque.value(), 1.2);
    EXPECT_EQ(s.vehicle.gravity, 9.80665);
}

TEST(ScenarioFile, DumpRoundTrips) {
    Scenario s = support::bundled("friction_3x");
    s.faults.gear_slip_push = 2;
    s.faults.battery_fail_time = 123.25;
    EXPECT_EQ(dump_scenario(parse_scenario(dump_scenario(s))), dump_scenario(s));
}

TEST(ScenarioFile, EveryKeyIsDocumented) {
    std::ifstream doc(std::string(RADDEPLOY_SCENARIO_DIR) + "/../docs/scenario_format.md");
    ASSERT_TRUE(doc);
    const std::string text((std::istreambuf_iterator<char>(doc)), std::istreambuf_iterator<char>());
    for (const auto& k : scenario_keys())
        EXPECT_NE(text.find("| " + std::string(k.key) + " |"), std::string::npos) << k.key;
}

TEST(ScenarioFile, FaultOverrides) {
    Scenario s;
    apply_fault_override(s, "link_break:5");
    apply_fault_override(s, "gear_slip:2");
    apply_fault_override(s, "friction:3");
    apply_fault_override(s, "battery_fail:30");
    apply_fault_override(s, "door_jam");
    EXPECT_EQ(s.faults.link_break_force, 5.0);
    EXPECT_EQ(s.faults.gear_slip_push, 2);
    EXPECT_EQ(s.faults.surface_friction_scale, 3.0);
    EXPECT_EQ(s.faults.battery_fail_time, 30.0);
    EXPECT_TRUE(s.faults.door_jam);
    EXPECT_THROW(apply_fault_override(s, "gear_slip"), ConfigError);
    EXPECT_THROW(apply_fault_override(s, "meteor:1"), ConfigError);
}

TEST(ScenarioFile, MissingFile) {
    EXPECT_THROW(load_scenario("/nonexistent/scenario.cfg"), ConfigError);
}

TEST(RunMission, NominalDeploys) {
    const auto r = run_mission(support::bundled("altair_nominal"));
    EXPECT_EQ(r.verdict.outcome, Outcome::DeployedInWindow);
    EXPECT_EQ(exit_code(r.verdict.outcome), 0);
    EXPECT_FALSE(r.verdict.faults.any());
    EXPECT_GT(r.verdict.energy_used, 0.0);
}

TEST(RunMission, OverweightPayloadTimesOut) {
    const auto r = run_mission(support::bundled("overweight"));
    EXPECT_EQ(r.verdict.outcome, Outcome::SafeHold);
    EXPECT_EQ(r.verdict.reason, ctl::SafeHoldReason::PushTimeout);
    EXPECT_EQ(r.verdict.peak_current, act::ServoSpec{}.stall_current);
    EXPECT_FALSE(r.verdict.deploy_time);
    EXPECT_EQ(exit_code(r.verdict.outcome), 2);
}

TEST(RunMission, SeedChangesNoiseNotVerdict) {
    Scenario a = support::bundled("altair_nominal");
    Scenario b = a;
    b.seed = 2;
    const auto ra = run_mission(a);
    const auto rb = run_mission(b);
    EXPECT_EQ(ra.verdict.outcome, rb.verdict.outcome);
    EXPECT_NE(support::telemetry_csv(ra), support::telemetry_csv(rb));
}

TEST(RunMission, VerdictStableAcrossHundredSeeds) {
    std::vector<double> seeds;
    for (int i = 1; i <= 100; ++i) seeds.push_back(i);
    const auto rows = sweep(support::bundled("altair_nominal"), "sim.seed", seeds);
    for (const auto& row : rows) EXPECT_EQ(row.verdict.outcome, Outcome::DeployedInWindow) << "seed " << row.value;
}

TEST(RunMission, LandedUndeployedWhenWindowIsNeverReached) {
    Scenario s = support::bundled("altair_nominal");
    s.vehicle.avg_thrust = 0.0;  // sits on the pad
    const auto r = run_mission(s);
    EXPECT_EQ(r.verdict.outcome, Outcome::LandedUndeployed);
    EXPECT_EQ(exit_code(r.verdict.outcome), 3);
    EXPECT_TRUE(r.commands.empty());
}

TEST(RunMission, TimeoutAtMaxSimTime) {
    Scenario s = support::bundled("altair_nominal");
    s.max_sim_time = 60.0;
    const auto r = run_mission(s);
    EXPECT_EQ(r.verdict.outcome, Outcome::Timeout);
    EXPECT_EQ(exit_code(r.verdict.outcome), 4);
    EXPECT_EQ(r.telemetry.size(), 1200u);
}

TEST(RunMission, PayloadLandsUnderCanopy) {
    const auto r = run_mission(support::bundled("altair_nominal"));
    ASSERT_TRUE(r.verdict.deploy_time);
    // Ends when the payload touches down, long after the vehicle's drogue descent started.
    EXPECT_GT(r.verdict.end_time, *r.verdict.deploy_time + 300.0);
}

TEST(Telemetry, SixtySecondsAtTwentyHertz) {
    Scenario s = support::bundled("altair_nominal");
    s.max_sim_time = 60.0;
    const std::string csv = support::telemetry_csv(run_mission(s));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1200 + 2);
    EXPECT_EQ(csv.rfind("# raddeploy telemetry schema_version=1\ntime_s,truth_alt_m,truth_vel_mps,sensed_alt_m,", 0), 0u);
}

TEST(Telemetry, SafeHoldReasonInFinalRows) {
    const auto r = run_mission(support::bundled("door_jam"));
    ASSERT_FALSE(r.telemetry.empty());
    EXPECT_EQ(r.telemetry.back().deploy_phase.to_string(), "SafeHold:door-timeout");
    EXPECT_NE(format_row(r.telemetry.back()).find(",SafeHold:door-timeout,"), std::string::npos);
    EXPECT_NE(format_row(r.telemetry.back()).find("DOOR_JAM"), std::string::npos);
}

TEST(Telemetry, RowFormat) {
    TelemetryRecord row;
    row.time = Micros{1250000};
    row.truth_altitude = 2999.5;
    row.flight_phase = flight::FlightPhase::DrogueDescent;
    row.deploy_phase = ctl::DeploymentPhase::pushing(2);
    row.push_count = 1;
    row.battery_voltage = 7.4;
    EXPECT_EQ(format_row(row),
              "1.250,2999.500000,0.000000,,DrogueDescent,Push2,0.000000,0.000000,1,0.000000,7.400,none\n");
    row.sensed_altitude = 3000.25;
    EXPECT_NE(format_row(row).find(",3000.250000,"), std::string::npos);
}

TEST(Telemetry, IdenticalRunsAreByteIdentical) {
    const Scenario s = support::bundled("altair_nominal");
    EXPECT_EQ(support::telemetry_csv(run_mission(s)), support::telemetry_csv(run_mission(s)));
}

TEST(Verdict, KeyValues) {
    const auto r = run_mission(support::bundled("door_jam"));
    const std::string kv = verdict_key_values(r.verdict);
    EXPECT_NE(kv.find("outcome=SafeHold\n"), std::string::npos);
    EXPECT_NE(kv.find("reason=door-timeout\n"), std::string::npos);
    EXPECT_NE(kv.find("exit_code=2\n"), std::string::npos);
    EXPECT_NE(kv.find("deploy_altitude_truth_m=none\n"), std::string::npos);
    EXPECT_NE(verdict_summary(r.verdict).find("SafeHold (door-timeout)"), std::string::npos);
}

TEST(Sweep, MassBoundary) {
    std::vector<double> masses;
    for (int i = 0; i <= 38; ++i) masses.push_back(1.0 + 0.5 * i);
    const double limit = mech::sizing_report(mech::MechanismParams{}).max_payload_mass.value();
    const auto rows = sweep(support::bundled("altair_nominal"), "payload.mass", masses);
    ASSERT_EQ(rows.size(), masses.size());
    for (const auto& row : rows) {
        EXPECT_EQ(row.verdict.outcome, row.value <= limit ? Outcome::DeployedInWindow : Outcome::SafeHold)
            << row.value << " kg";
    }
}

TEST(Sweep, EmptyValueList) {
    EXPECT_TRUE(sweep(support::bundled("altair_nominal"), "payload.mass", {}).empty());
}

TEST(Sweep, RejectsBadKeysBeforeRunning) {
    EXPECT_THROW(sweep(Scenario{}, "payload.weight", {1.0}), ConfigError);
    EXPECT_THROW(sweep(Scenario{}, "faults.door_jam", {1.0}), ConfigError);
    EXPECT_THROW(sweep(Scenario{}, "mechanism.efficiency", {0.5, 1.3}), ConfigError);
}

TEST(Sweep, LargestDeployableMassFallsWithFriction) {
    std::vector<double> masses;
    for (int i = 0; i <= 38; ++i) masses.push_back(1.0 + 0.5 * i);
    double previous = 1e9;
    for (double mu : {0.3, 0.61, 1.0}) {
        Scenario s = support::bundled("altair_nominal");
        s.mechanism.friction_coefficient = mu;
        double largest = 0.0;
        for (const auto& row : sweep(s, "payload.mass", masses))
            if (row.verdict.outcome == Outcome::DeployedInWindow) largest = std::max(largest, row.value);
        EXPECT_LT(largest, previous) << "mu " << mu;
        previous = largest;
    }
}

TEST(Sweep, PermutingValuesPermutesRows) {
    const Scenario s = support::bundled("altair_nominal");
    const std::vector<double> forward{2.0, 13.5, 14.5, 20.0, 7.0};
    std::vector<double> reversed(forward.rbegin(), forward.rend());
    const auto a = sweep(s, "payload.mass", forward, 2);
    const auto b = sweep(s, "payload.mass", reversed, 3);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a[i];
        const auto& y = b[b.size() - 1 - i];
        EXPECT_EQ(x.value, y.value);
        EXPECT_EQ(verdict_key_values(x.verdict), verdict_key_values(y.verdict));
    }
    EXPECT_EQ(format_sweep_table("payload.mass", a).substr(0, 13), "payload.mass,");
}
