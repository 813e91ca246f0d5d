#pragma once

// Deployment sequencer.
//
//   Locked -> AwaitWindow -> Unlocking -> DoorOpenWait -> StabilizeDelay
//          -> Push(1) -> Push(2) -> Push(3) -> Ejected
//
// Any non-terminal phase may drop into SafeHold, which is absorbing and never
// emits a command. A push that moves the rack through the full stroke without
// moving the payload means the drive path is broken; the sequencer holds
// instead of pushing again. Push(k) advances to Push(k+1) only after a push
// that moved the payload part of the way and a completed retraction.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "raddeploy/actuation.hpp"
#include "raddeploy/barometer.hpp"
#include "raddeploy/errors.hpp"
#include "raddeploy/sim_time.hpp"

namespace raddeploy::ctl {

enum class PhaseKind { Locked, AwaitWindow, Unlocking, DoorOpenWait, StabilizeDelay, Push, Ejected, SafeHold };

enum class SafeHoldReason { None, WindowMissed, DoorTimeout, PushTimeout, BatteryFailure, EjectionIncomplete };

inline std::string to_string(SafeHoldReason r) {
    switch (r) {
        case SafeHoldReason::None: return "none";
        case SafeHoldReason::WindowMissed: return "window-missed";
        case SafeHoldReason::DoorTimeout: return "door-timeout";
        case SafeHoldReason::PushTimeout: return "push-timeout";
        case SafeHoldReason::BatteryFailure: return "battery-failure";
        case SafeHoldReason::EjectionIncomplete: return "ejection-incomplete";
    }
    return "?";
}

struct DeploymentPhase {
    PhaseKind kind = PhaseKind::Locked;
    int push = 0;  // 1..3 while kind == Push
    SafeHoldReason reason = SafeHoldReason::None;

    static DeploymentPhase safe_hold(SafeHoldReason r) { return {PhaseKind::SafeHold, 0, r}; }
    static DeploymentPhase pushing(int k) { return {PhaseKind::Push, k, SafeHoldReason::None}; }

    [[nodiscard]] bool terminal() const { return kind == PhaseKind::Ejected || kind == PhaseKind::SafeHold; }

    /// Ordinal along the nominal sequence; SafeHold sorts last.
    [[nodiscard]] int rank() const {
        switch (kind) {
            case PhaseKind::Locked: return 0;
            case PhaseKind::AwaitWindow: return 1;
            case PhaseKind::Unlocking: return 2;
            case PhaseKind::DoorOpenWait: return 3;
            case PhaseKind::StabilizeDelay: return 4;
            case PhaseKind::Push: return 4 + push;
            case PhaseKind::Ejected: return 8;
            case PhaseKind::SafeHold: return 9;
        }
        return -1;
    }

    [[nodiscard]] std::string to_string() const {
        switch (kind) {
            case PhaseKind::Locked: return "Locked";
            case PhaseKind::AwaitWindow: return "AwaitWindow";
            case PhaseKind::Unlocking: return "Unlocking";
            case PhaseKind::DoorOpenWait: return "DoorOpenWait";
            case PhaseKind::StabilizeDelay: return "StabilizeDelay";
            case PhaseKind::Push: return "Push" + std::to_string(push);
            case PhaseKind::Ejected: return "Ejected";
            case PhaseKind::SafeHold: return "SafeHold:" + ctl::to_string(reason);
        }
        return "?";
    }

    friend bool operator==(const DeploymentPhase&, const DeploymentPhase&) = default;
};

struct TriggerConfig {
    double deploy_ceiling = 3000.0;     // m
    double deploy_floor = 2800.0;       // m
    bool arm_after_apogee = true;
    double door_open_timeout = 2.0;     // s, measured from the unlock command
    double push_timeout = 0.0;          // s per push; 0 selects 3x the single-push time
    double stabilization_delay = 2.0;   // s between door open and the first push
    double apogee_margin = 5.0;         // m the sensed altitude must drop below its peak

    void validate() const {
        if (!std::isfinite(deploy_floor) || !std::isfinite(deploy_ceiling) || !(deploy_floor < deploy_ceiling))
            throw InvalidParameter("trigger.deploy_floor must be < trigger.deploy_ceiling");
        if (!(door_open_timeout > 0.0)) throw InvalidParameter("trigger.door_open_timeout must be > 0");
        if (!(push_timeout >= 0.0)) throw InvalidParameter("trigger.push_timeout must be >= 0");
        if (!(stabilization_delay >= 0.0)) throw InvalidParameter("trigger.stabilization_delay must be >= 0");
        if (!(apogee_margin >= 0.0) || !std::isfinite(apogee_margin))
            throw InvalidParameter("trigger.apogee_margin must be >= 0");
        (void)from_seconds(door_open_timeout);
        (void)from_seconds(stabilization_delay);
    }
};

/// Push timeout in effect for a configuration: explicit, or three single-push times.
inline Micros resolve_push_timeout(const TriggerConfig& cfg, double single_push_time) {
    const double s = cfg.push_timeout > 0.0 ? cfg.push_timeout : 3.0 * single_push_time;
    return Micros{static_cast<std::int64_t>(std::ceil(s * 1e6))};
}

enum class CommandKind { Unlock, Push };

struct Command {
    Micros time{0};
    CommandKind kind = CommandKind::Unlock;
    int argument = 0;  // push index for Push

    [[nodiscard]] std::string name() const { return kind == CommandKind::Unlock ? "unlock" : "push"; }
    friend bool operator==(const Command&, const Command&) = default;
};

struct ControllerState {
    DeploymentPhase phase;
    Micros entered_at{0};
    std::optional<Micros> unlock_at;
    double displacement_at_push_start = 0.0;
};

/// What the deployment logic observes on one tick.
struct ControllerInputs {
    std::optional<double> sensed_altitude;
    bool apogee_seen = false;
    bool door_locked = true;
    bool door_open = false;
    act::CarrierState carrier;
    bool battery_failed = false;
    bool ejection_complete = false;
};

struct PhaseUpdate {
    ControllerState state;
    std::optional<Command> command;
};

/// One DeployLogic step. Pure: the result depends only on the arguments.
inline PhaseUpdate update_phase(const ControllerState& current, const ControllerInputs& in, const TriggerConfig& cfg,
                                Micros push_timeout, Micros now) {
    PhaseUpdate out{current, std::nullopt};
    ControllerState& s = out.state;
    const DeploymentPhase& p = current.phase;
    if (p.terminal()) return out;

    auto enter = [&](DeploymentPhase next) {
        s.phase = next;
        s.entered_at = now;
    };
    auto hold = [&](SafeHoldReason r) {
        enter(DeploymentPhase::safe_hold(r));
        return out;
    };

    if (in.battery_failed) return hold(SafeHoldReason::BatteryFailure);
    if (p.kind == PhaseKind::Push && in.ejection_complete) {
        enter({PhaseKind::Ejected});
        return out;
    }
    const bool armed = !cfg.arm_after_apogee || in.apogee_seen;
    const bool descending_or_committed = in.apogee_seen || p.rank() >= DeploymentPhase{PhaseKind::Unlocking}.rank();
    if (in.sensed_altitude && *in.sensed_altitude < cfg.deploy_floor && descending_or_committed)
        return hold(SafeHoldReason::WindowMissed);

    const Micros door_timeout = from_seconds(cfg.door_open_timeout);
    switch (p.kind) {
        case PhaseKind::Locked:
            if (armed) enter({PhaseKind::AwaitWindow});
            break;
        case PhaseKind::AwaitWindow:
            if (armed && in.sensed_altitude && *in.sensed_altitude >= cfg.deploy_floor &&
                *in.sensed_altitude <= cfg.deploy_ceiling) {
                enter({PhaseKind::Unlocking});
                s.unlock_at = now;
                out.command = Command{now, CommandKind::Unlock, 0};
            }
            break;
        case PhaseKind::Unlocking:
            if (!in.door_locked)
                enter({PhaseKind::DoorOpenWait});
            else if (now - *s.unlock_at >= door_timeout)
                return hold(SafeHoldReason::DoorTimeout);
            break;
        case PhaseKind::DoorOpenWait:
            if (in.door_open)
                enter({PhaseKind::StabilizeDelay});
            else if (now - *s.unlock_at >= door_timeout)
                return hold(SafeHoldReason::DoorTimeout);
            break;
        case PhaseKind::StabilizeDelay:
            if (now - s.entered_at >= from_seconds(cfg.stabilization_delay)) {
                enter(DeploymentPhase::pushing(1));
                s.displacement_at_push_start = in.carrier.payload_displacement;
                out.command = Command{now, CommandKind::Push, 1};
            }
            break;
        case PhaseKind::Push: {
            const int k = p.push;
            if (in.carrier.push_count >= k) {
                const bool moved_payload = in.carrier.payload_displacement > s.displacement_at_push_start;
                if (!moved_payload || k >= 3) return hold(SafeHoldReason::EjectionIncomplete);
                if (!in.carrier.pushing()) {
                    enter(DeploymentPhase::pushing(k + 1));
                    s.displacement_at_push_start = in.carrier.payload_displacement;
                    out.command = Command{now, CommandKind::Push, k + 1};
                    break;
                }
            }
            if (now - s.entered_at >= push_timeout) return hold(SafeHoldReason::PushTimeout);
            break;
        }
        case PhaseKind::Ejected:
        case PhaseKind::SafeHold:
            break;
    }
    return out;
}

/// Apogee detection on sensed altitude: the reading has dropped `margin`
/// metres below the highest reading so far.
class ApogeeEstimator {
public:
    explicit ApogeeEstimator(double margin) : margin_(margin) {}

    void update(double sensed_altitude) {
        peak_ = std::max(peak_, sensed_altitude);
        if (!apogee_seen_ && sensed_altitude < peak_ - margin_) apogee_seen_ = true;
    }

    [[nodiscard]] bool apogee_seen() const { return apogee_seen_; }
    [[nodiscard]] double peak() const { return peak_; }

private:
    double margin_;
    double peak_ = -std::numeric_limits<double>::infinity();
    bool apogee_seen_ = false;
};

/// The flight software: task bodies plus the command log.
class DeploymentController {
public:
    DeploymentController(TriggerConfig cfg, Micros push_timeout)
        : cfg_(cfg), push_timeout_(push_timeout), estimator_(cfg.apogee_margin) {
        cfg_.validate();
        if (push_timeout_.count() <= 0) throw InvalidParameter("push timeout must be > 0");
    }

    // SenseBarometer
    void sense(const std::optional<sensors::BaroSample>& sample) {
        if (sample && (!latest_ || sample->measured_at != latest_->measured_at)) {
            latest_ = *sample;
            fresh_ = true;
        }
    }

    // EstimateState
    void estimate() {
        if (latest_ && fresh_) estimator_.update(latest_->altitude);
        fresh_ = false;
    }

    // DeployLogic
    std::optional<Command> deploy_logic(const act::DoorState& door, const act::CarrierState& carrier,
                                        const act::BatteryState& battery, bool ejection_complete, Micros now) {
        ControllerInputs in;
        if (latest_) in.sensed_altitude = latest_->altitude;
        in.apogee_seen = estimator_.apogee_seen();
        in.door_locked = door.locked;
        in.door_open = door.open;
        in.carrier = carrier;
        in.battery_failed = battery.failed;
        in.ejection_complete = ejection_complete;

        const bool was_holding = state_.phase.kind == PhaseKind::SafeHold;
        PhaseUpdate up = update_phase(state_, in, cfg_, push_timeout_, now);
        if (was_holding && up.command) throw ContractViolation("command emitted in SafeHold");
        state_ = up.state;
        if (up.command) log_.push_back(*up.command);
        return up.command;
    }

    [[nodiscard]] const DeploymentPhase& phase() const { return state_.phase; }
    [[nodiscard]] const ControllerState& state() const { return state_; }
    [[nodiscard]] const std::vector<Command>& command_log() const { return log_; }
    [[nodiscard]] std::optional<double> sensed_altitude() const {
        return latest_ ? std::optional<double>(latest_->altitude) : std::nullopt;
    }
    [[nodiscard]] bool apogee_seen() const { return estimator_.apogee_seen(); }
    [[nodiscard]] const TriggerConfig& config() const { return cfg_; }

private:
    TriggerConfig cfg_;
    Micros push_timeout_;
    ApogeeEstimator estimator_;
    ControllerState state_;
    std::optional<sensors::BaroSample> latest_;
    bool fresh_ = false;
    std::vector<Command> log_;
};

}  // namespace raddeploy::ctl
