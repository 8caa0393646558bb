#pragma once

// Umbrella header for the PME / infinite-server busy-period toolkit.

#include "busy_period.hpp"
#include "errors.hpp"
#include "extended_real.hpp"
#include "inversion.hpp"
#include "laplace_numeric.hpp"
#include "pareto.hpp"
#include "pme.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "service.hpp"
#include "simulator.hpp"
#include "stats.hpp"
#include "tail_curve.hpp"
#include "transforms.hpp"
