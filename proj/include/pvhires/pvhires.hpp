#pragma once

#include "pvhires/cell_electrical.hpp"
#include "pvhires/energy.hpp"
#include "pvhires/error.hpp"
#include "pvhires/geometry.hpp"
#include "pvhires/hierarchy.hpp"
#include "pvhires/irradiance.hpp"
#include "pvhires/iv_curve.hpp"
#include "pvhires/metrics.hpp"
#include "pvhires/mlpe.hpp"
#include "pvhires/module_db.hpp"
#include "pvhires/mpp.hpp"
#include "pvhires/report.hpp"
#include "pvhires/scenario.hpp"
#include "pvhires/simulation.hpp"
#include "pvhires/sky.hpp"
#include "pvhires/solar_position.hpp"
#include "pvhires/thermal.hpp"
#include "pvhires/timeutil.hpp"
#include "pvhires/topology.hpp"
#include "pvhires/weather.hpp"
