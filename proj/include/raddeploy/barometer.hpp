#pragma once

// Barometric altimeter stand-in: samples true pressure on a fixed rate grid,
// adds Gaussian noise, quantizes, and delivers each reading after a fixed
// latency. Altitude is recovered through the inverse ISA relation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>

#include "raddeploy/atmosphere.hpp"
#include "raddeploy/errors.hpp"
#include "raddeploy/random.hpp"
#include "raddeploy/sim_time.hpp"

namespace raddeploy::sensors {

struct BarometerSpec {
    double sample_rate = 50.0;           // Hz
    double pressure_noise_sigma = 3.0;   // Pa
    double quantization = 1.0;           // Pa, 0 disables
    double latency = 0.02;               // s
    std::uint64_t seed = 0;

    void validate() const {
        (void)period_from_rate(sample_rate);
        if (!std::isfinite(pressure_noise_sigma) || pressure_noise_sigma < 0.0)
            throw InvalidParameter("barometer.noise_sigma must be >= 0");
        if (!std::isfinite(quantization) || quantization < 0.0)
            throw InvalidParameter("barometer.quantization must be >= 0");
        if (!std::isfinite(latency) || latency < 0.0) throw InvalidParameter("barometer.latency must be >= 0");
        (void)from_seconds(latency);
    }
};

struct BaroSample {
    Micros measured_at{0};
    double pressure = 0.0;   // Pa, after noise and quantization
    double altitude = 0.0;   // m, from the band-clamped pressure
};

inline double quantize(double value, double step) {
    return step > 0.0 ? std::round(value / step) * step : value;
}

class Barometer {
public:
    Barometer(BarometerSpec spec, atmo::AtmosphereModel atmosphere)
        : spec_(spec), atmosphere_(atmosphere), noise_(spec.seed) {
        spec_.validate();
        atmosphere_.validate();
        period_ = period_from_rate(spec_.sample_rate);
        latency_ = from_seconds(spec_.latency);
    }

    [[nodiscard]] const BarometerSpec& spec() const { return spec_; }
    [[nodiscard]] Micros period() const { return period_; }
    [[nodiscard]] Micros latency() const { return latency_; }
    /// Newest reading delivered so far.
    [[nodiscard]] const std::optional<BaroSample>& latest() const { return latest_; }

    /// Advances the sensor to `now`. Returns the newest reading whose latency
    /// has elapsed, or nothing. Ticks must be non-decreasing.
    std::optional<BaroSample> sample(double true_altitude, Micros now) {
        if (last_tick_ && now < *last_tick_) throw ContractViolation("barometer ticks must be non-decreasing");
        const bool new_tick = !last_tick_ || now > *last_tick_;
        last_tick_ = now;
        if (new_tick && now.count() % period_.count() == 0) pending_.push_back(measure(true_altitude, now));

        std::optional<BaroSample> out;
        while (!pending_.empty() && pending_.front().measured_at + latency_ <= now) {
            out = pending_.front();
            pending_.pop_front();
        }
        if (out) latest_ = out;
        return out;
    }

private:
    BaroSample measure(double true_altitude, Micros now) {
        // The sensor saturates at the ends of the model band.
        const double h = std::clamp(true_altitude, 0.0, atmo::kTroposphereTop);
        double p = atmo::pressure_at_altitude(atmosphere_, h);
        if (spec_.pressure_noise_sigma > 0.0) p += spec_.pressure_noise_sigma * noise_.standard_normal();
        p = quantize(p, spec_.quantization);
        const double clamped = std::clamp(p, atmo::min_pressure(atmosphere_), atmosphere_.sea_level_pressure);
        return BaroSample{now, p, atmo::altitude_from_pressure(atmosphere_, clamped)};
    }

    BarometerSpec spec_;
    atmo::AtmosphereModel atmosphere_;
    GaussianSource noise_;
    Micros period_{};
    Micros latency_{};
    std::optional<Micros> last_tick_;
    std::deque<BaroSample> pending_;
    std::optional<BaroSample> latest_;
};

/// Worst-case altitude error of a reading consumed by the controller:
/// staleness (latency rounded up to the sample grid, plus one sample period)
/// times the descent rate, plus half a quantization step and `noise_sigmas`
/// standard deviations of pressure noise, converted to altitude at `altitude`.
inline double altitude_error_bound(const BarometerSpec& spec, const atmo::AtmosphereModel& atmosphere,
                                   double altitude, double descent_rate, double noise_sigmas) {
    const Micros period = period_from_rate(spec.sample_rate);
    const Micros latency = from_seconds(spec.latency);
    const std::int64_t periods_of_latency = (latency.count() + period.count() - 1) / period.count();
    const double staleness = to_seconds(period * (periods_of_latency + 1));
    const double h = std::clamp(altitude, 0.0, atmo::kTroposphereTop);
    // |dp/dh| = rho g0 (hydrostatic)
    const double dp_dh = atmo::density_at_altitude(atmosphere, h) * atmo::kStandardGravity;
    const double pressure_error = 0.5 * spec.quantization + noise_sigmas * spec.pressure_noise_sigma;
    // 1% headroom for the change of dp/dh across the error interval.
    return staleness * std::abs(descent_rate) + 1.01 * pressure_error / dp_dh;
}

}  // namespace raddeploy::sensors
