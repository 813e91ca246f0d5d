#pragma once

// Text renderings of a sizing report: an aligned table with the rounded
// figures engineers quote, and exact key=value lines for scripts.

#include <cmath>
#include <cstdio>
#include <string>

#include "raddeploy/mech_calc.hpp"

namespace raddeploy::report {

inline std::string sizing_table(const mech::MechanismParams& p, const mech::SizingReport& r) {
    char buf[2048];
    std::snprintf(buf, sizeof buf,
                  "Mechanism sizing\n"
                  "  servo stall torque        %10.4f N m\n"
                  "  pinion pitch diameter     %10.4f m\n"
                  "  drivetrain efficiency     %10.4f\n"
                  "  friction coefficient      %10.4f\n"
                  "  stroke                    %10.4f m\n"
                  "  time budget               %10.4f s\n"
                  "  gravity                   %10.4f m/s^2\n"
                  "\n"
                  "  ideal tangential force    %10.4f N\n"
                  "  effective tangential force%10.4f N\n"
                  "  required acceleration     %10.4e m/s^2\n"
                  "  friction force per kg     %10.4f N/kg\n"
                  "  max payload mass          %10.4f kg  (~%.0f kg)\n",
                  p.servo_stall_torque.value(), p.pinion_pitch_diameter.value(), p.drivetrain_efficiency,
                  p.friction_coefficient, p.stroke.value(), p.deployment_time_budget.value(), p.gravity.value(),
                  r.ideal_tangential_force.value(), r.effective_tangential_force.value(),
                  r.required_acceleration.value(), r.friction_force_per_kg.value(), r.max_payload_mass.value(),
                  std::round(r.max_payload_mass.value()));
    return buf;
}

inline std::string sizing_key_values(const mech::SizingReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "ideal_tangential_force_n=%.17g\neffective_tangential_force_n=%.17g\n"
                  "required_acceleration_mps2=%.17g\nfriction_force_per_kg_n=%.17g\nmax_payload_mass_kg=%.17g\n",
                  r.ideal_tangential_force.value(), r.effective_tangential_force.value(),
                  r.required_acceleration.value(), r.friction_force_per_kg.value(), r.max_payload_mass.value());
    return buf;
}

}  // namespace raddeploy::report
