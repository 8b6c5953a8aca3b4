#pragma once

#include "icem/envs/environment.hpp"
#include "icem/envs/integrator.hpp"
#include "icem/envs/pendulum.hpp"
#include "icem/envs/point_mass.hpp"
#include "icem/envs/sparse_goal.hpp"
#include "icem/noise.hpp"
#include "icem/optimizer.hpp"
#include "icem/planner.hpp"
#include "icem/spectrum.hpp"
#include "icem/types.hpp"
