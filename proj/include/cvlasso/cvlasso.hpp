#pragma once

#include "core.hpp"
#include "rng.hpp"
#include "solver.hpp"
#include "penalty.hpp"
#include "crossval.hpp"
#include "dgp.hpp"
#include "diagnostics.hpp"
#include "experiments.hpp"
#include "audit.hpp"
