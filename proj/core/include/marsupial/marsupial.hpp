#pragma once

#include "marsupial/analysis.hpp"
#include "marsupial/control.hpp"
#include "marsupial/core.hpp"
#include "marsupial/potential.hpp"
#include "marsupial/safety.hpp"
#include "marsupial/scenario.hpp"
#include "marsupial/sim.hpp"
#include "marsupial/trajectory_io.hpp"
