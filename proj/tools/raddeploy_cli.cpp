// raddeploy: sizing reports, single missions and parameter sweeps.
//
//   raddeploy sizing [--param key=value]...
//   raddeploy run --scenario FILE [--seed N] [--out DIR] [--fault NAME[:param]]... [--set key=value]...
//   raddeploy sweep --scenario FILE --key K --values a,b,c [--fault NAME[:param]]...
//
// Exit status of `run`: 0 deployed in window, 2 safe hold, 3 landed undeployed,
// 4 timeout, 64 configuration error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "raddeploy/raddeploy.hpp"

namespace fs = std::filesystem;
using namespace raddeploy;

namespace {

constexpr const char* kOutDirEnv = "RADDEPLOY_OUT_DIR";

std::pair<std::string, std::string> split_assignment(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(text, 0, "expected key=value, got '" + text + "'");
    return {text.substr(0, eq), text.substr(eq + 1)};
}

mission::Scenario scenario_from(const std::string& path, const std::vector<std::string>& sets,
                                const std::vector<std::string>& faults, const std::optional<std::uint64_t>& seed) {
    mission::Scenario s = path.empty() ? mission::Scenario{} : mission::load_scenario(path);
    for (const auto& a : sets) {
        const auto [k, v] = split_assignment(a);
        mission::apply_override(s, k, v);
    }
    for (const auto& f : faults) mission::apply_fault_override(s, f);
    if (seed) s.seed = *seed;
    s.validate();
    return s;
}

int cmd_sizing(const std::vector<std::string>& params, const std::string& format) {
    mission::Scenario s;
    for (const auto& a : params) {
        const auto [k, v] = split_assignment(a);
        if (!k.starts_with("mechanism.") && k != "servo.stall_torque")
            throw ConfigError(k, 0, "sizing accepts mechanism.* keys and servo.stall_torque, not '" + k + "'");
        mission::apply_override(s, k, v);
    }
    const mech::SizingReport r = mech::sizing_report(s.mechanism);
    if (format != "kv") std::cout << report::sizing_table(s.mechanism, r);
    if (format == "both") std::cout << '\n';
    if (format != "text") std::cout << report::sizing_key_values(r);
    return 0;
}

int cmd_run(const mission::Scenario& s, std::string out_dir) {
    const mission::MissionResult result = mission::run_mission(s);

    if (out_dir.empty()) {
        const char* env = std::getenv(kOutDirEnv);
        out_dir = env && *env ? env : "raddeploy_out";
    }
    fs::create_directories(out_dir);
    {
        std::ofstream csv(fs::path(out_dir) / "telemetry.csv", std::ios::binary);
        mission::write_telemetry_csv(csv, result.telemetry);
    }
    {
        std::ofstream cmds(fs::path(out_dir) / "commands.csv", std::ios::binary);
        cmds << "time_s,command,argument,truth_alt_m\n";
        for (const auto& c : result.commands) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "%.3f,%s,%d,%.6f\n", to_seconds(c.command.time), c.command.name().c_str(),
                          c.command.argument, c.truth_altitude);
            cmds << buf;
        }
    }
    {
        std::ofstream kv(fs::path(out_dir) / "verdict.txt", std::ios::binary);
        kv << mission::verdict_key_values(result.verdict);
    }
    std::cout << mission::verdict_summary(result.verdict) << '\n' << mission::verdict_key_values(result.verdict);
    return mission::exit_code(result.verdict.outcome);
}

int cmd_sweep(const mission::Scenario& s, const std::string& key, const std::vector<std::string>& values,
              unsigned threads) {
    const mission::KeySpec& spec = mission::sweepable_key(key);
    std::vector<double> numbers;
    for (const auto& v : values) numbers.push_back(mission::parse_value(spec, v));
    const auto rows = mission::sweep(s, key, numbers, threads);
    std::cout << mission::format_sweep_table(key, rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial payload deployment: mechanism sizing and mission simulation"};
    app.require_subcommand(1);

    auto* sizing = app.add_subcommand("sizing", "Print the mechanism sizing report");
    std::vector<std::string> sizing_params;
    std::string sizing_format = "both";
    sizing->add_option("--param", sizing_params, "Override a sizing input, e.g. mechanism.friction_coefficient=0.5");
    sizing->add_option("--format", sizing_format, "text, kv or both")->check(CLI::IsMember({"text", "kv", "both"}));

    std::string scenario_path;
    std::vector<std::string> faults;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;

    auto* run = app.add_subcommand("run", "Simulate one mission");
    std::string out_dir;
    run->add_option("--scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "Override sim.seed");
    run->add_option("--out", out_dir, std::string("Output directory (default $") + kOutDirEnv + " or ./raddeploy_out)");
    run->add_option("--fault", faults, "Inject a fault: link_break:N, gear_slip:K, friction:S, battery_fail:T, door_jam");
    run->add_option("--set", sets, "Override any scenario key, key=value");

    auto* sweep = app.add_subcommand("sweep", "Run one mission per value of a scenario key");
    std::string sweep_key;
    std::vector<std::string> sweep_values;
    unsigned threads = 0;
    sweep->add_option("--scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--key", sweep_key, "Numeric scenario key")->required();
    sweep->add_option("--values", sweep_values, "Comma-separated values")->delimiter(',')->required();
    sweep->add_option("--seed", seed, "Override sim.seed");
    sweep->add_option("--fault", faults, "Inject a fault");
    sweep->add_option("--set", sets, "Override any scenario key, key=value");
    sweep->add_option("--threads", threads, "Concurrent runs (default: hardware threads)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : mission::kExitConfigError;
    }

    try {
        if (*sizing) return cmd_sizing(sizing_params, sizing_format);
        const mission::Scenario s = scenario_from(scenario_path, sets, faults, seed);
        if (*run) return cmd_run(s, out_dir);
        return cmd_sweep(s, sweep_key, sweep_values, threads);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return mission::kExitConfigError;
    } catch (const InvalidParameter& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return mission::kExitConfigError;
    } catch (const SingularConfiguration& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return mission::kExitConfigError;
    }
}
