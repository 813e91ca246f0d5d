#pragma once

#include "raddeploy/actuation.hpp"
#include "raddeploy/atmosphere.hpp"
#include "raddeploy/barometer.hpp"
#include "raddeploy/controller.hpp"
#include "raddeploy/errors.hpp"
#include "raddeploy/flight_sim.hpp"
#include "raddeploy/mech_calc.hpp"
#include "raddeploy/mission.hpp"
#include "raddeploy/report.hpp"
#include "raddeploy/scenario.hpp"
#include "raddeploy/scheduler.hpp"
#include "raddeploy/sim_time.hpp"
#include "raddeploy/sweep.hpp"
#include "raddeploy/telemetry.hpp"
#include "raddeploy/units.hpp"
