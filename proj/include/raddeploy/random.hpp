#pragma once

// Seed-stable Gaussian noise.
//
// std::mt19937_64 has a fully specified output sequence, but the standard
// distributions do not, so the uniform mapping and the Box-Muller transform
// are spelled out here. A port reproduces the stream by implementing:
//   u = (x >> 11) * 2^-53            for each 64-bit MT19937-64 output x
//   r = sqrt(-2 ln(1 - u1)), th = 2 pi u2
//   emit r cos th, then r sin th (the second value is cached)

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>

namespace raddeploy {

class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double standard_normal() {
        if (spare_) {
            const double z = *spare_;
            spare_.reset();
            return z;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

}  // namespace raddeploy
