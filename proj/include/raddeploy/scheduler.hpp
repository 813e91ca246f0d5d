#pragma once

// Cooperative run-to-completion scheduler on logical time. A task is due on
// every tick that is a whole multiple of its period; ties run in list order.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "raddeploy/errors.hpp"
#include "raddeploy/sim_time.hpp"

namespace raddeploy::ctl {

enum class TaskId { SenseBarometer, EstimateState, DeployLogic, Telemetry };

inline std::string_view to_string(TaskId id) {
    switch (id) {
        case TaskId::SenseBarometer: return "SenseBarometer";
        case TaskId::EstimateState: return "EstimateState";
        case TaskId::DeployLogic: return "DeployLogic";
        case TaskId::Telemetry: return "Telemetry";
    }
    return "?";
}

struct ScheduledTask {
    TaskId id;
    Micros period;
};

class TaskSchedule {
public:
    TaskSchedule() = default;
    explicit TaskSchedule(std::vector<ScheduledTask> tasks) : tasks_(std::move(tasks)) {
        for (const auto& t : tasks_)
            if (t.period.count() <= 0) throw InvalidParameter("task period must be > 0");
    }

    /// Barometer and estimator at 50 Hz, deployment logic at 100 Hz,
    /// telemetry at 20 Hz, in that priority order.
    static TaskSchedule standard() {
        return TaskSchedule({{TaskId::SenseBarometer, period_from_rate(50.0)},
                             {TaskId::EstimateState, period_from_rate(50.0)},
                             {TaskId::DeployLogic, period_from_rate(100.0)},
                             {TaskId::Telemetry, period_from_rate(20.0)}});
    }

    [[nodiscard]] std::span<const ScheduledTask> tasks() const { return tasks_; }

    [[nodiscard]] Micros period_of(TaskId id) const {
        for (const auto& t : tasks_)
            if (t.id == id) return t.period;
        throw NotFound("task not in schedule");
    }

    /// Every period must be a whole number of simulation steps.
    void check_step(Micros dt) const {
        if (dt.count() <= 0) throw InvalidParameter("dt must be > 0");
        for (const auto& t : tasks_)
            if (t.period.count() % dt.count() != 0)
                throw InvalidParameter("dt does not divide the period of task " + std::string(to_string(t.id)));
    }

    /// Tasks due at `now`, highest priority first.
    [[nodiscard]] std::vector<TaskId> due(Micros now) const {
        std::vector<TaskId> out;
        for (const auto& t : tasks_)
            if (now.count() % t.period.count() == 0) out.push_back(t.id);
        return out;
    }

private:
    std::vector<ScheduledTask> tasks_;
};

}  // namespace raddeploy::ctl
