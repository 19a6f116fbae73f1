#pragma once

#include "ccopt/core.hpp"
#include "ccopt/io.hpp"
#include "ccopt/oracle.hpp"
#include "ccopt/sim.hpp"
#include "ccopt/solver.hpp"
#include "ccopt/sweep.hpp"
