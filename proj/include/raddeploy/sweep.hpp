#pragma once

// Parameter sweeps: one independent mission per value of a numeric key.
// Runs share nothing, so they execute concurrently; rows come back in input
// order.

#include <algorithm>
#include <cstdio>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "raddeploy/errors.hpp"
#include "raddeploy/mission.hpp"
#include "raddeploy/scenario.hpp"

namespace raddeploy::mission {

struct SweepRow {
    double value = 0.0;
    MissionVerdict verdict;
};

/// Checks that `key` names a numeric scenario field. Throws ConfigError.
inline const KeySpec& sweepable_key(std::string_view key) {
    const KeySpec* spec = find_key(key);
    if (!spec) throw ConfigError(std::string(key), 0, "unknown sweep key '" + std::string(key) + "'");
    if (spec->kind == ValueKind::Bool)
        throw ConfigError(std::string(key), 0, "sweep key '" + std::string(key) + "' is not numeric");
    return *spec;
}

/// Every value is validated before any mission runs.
inline std::vector<SweepRow> sweep(const Scenario& base, std::string_view key, const std::vector<double>& values,
                                   unsigned max_threads = 0) {
    const KeySpec& spec = sweepable_key(key);
    std::vector<Scenario> runs;
    runs.reserve(values.size());
    for (double v : values) {
        char text[64];
        std::snprintf(text, sizeof text, "%.17g", v);
        Scenario s = base;
        spec.set(s, parse_value(spec, text));
        s.validate();
        runs.push_back(std::move(s));
    }

    std::vector<SweepRow> rows(values.size());
    const unsigned hw = max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t start = 0; start < runs.size(); start += hw) {
        const std::size_t end = std::min(runs.size(), start + hw);
        std::vector<std::future<MissionVerdict>> batch;
        for (std::size_t i = start; i < end; ++i)
            batch.push_back(std::async(std::launch::async, [&runs, i] { return run_mission(runs[i]).verdict; }));
        for (std::size_t i = start; i < end; ++i) rows[i] = SweepRow{values[i], batch[i - start].get()};
    }
    return rows;
}

inline std::string format_sweep_table(std::string_view key, const std::vector<SweepRow>& rows) {
    std::string out = std::string(key) + ",outcome,reason,deploy_altitude_truth_m,energy_used_j,peak_current_a\n";
    char buf[256];
    for (const auto& r : rows) {
        char alt[32] = "none";
        if (r.verdict.deploy_altitude_truth) std::snprintf(alt, sizeof alt, "%.3f", *r.verdict.deploy_altitude_truth);
        std::snprintf(buf, sizeof buf, "%.17g,%s,%s,%s,%.6f,%.6f\n", r.value, to_string(r.verdict.outcome).c_str(),
                      ctl::to_string(r.verdict.reason).c_str(), alt, r.verdict.energy_used, r.verdict.peak_current);
        out += buf;
    }
    return out;
}

}  // namespace raddeploy::mission
