#pragma once

// Umbrella header: calculus on finite time scales plus constructive
// Hyers-Ulam stability certification of linear dynamic equations.
//
// Layering (each header includes what it needs):
//   errors, tolerances
//   time_scale, grid_function     grids and aligned values
//   calculus                      delta derivative/integral, exponentials
//   solvers                       first/second-order solvers, Riccati
//   hyers_ulam                    stability certifiers and constants
//   rng, equation, perturbation,  randomized campaign harness
//   campaign, family
//   expr, config, format, report  CLI-facing parsing and serialization
//     (config/report need the vendored json.hpp on the include path and are
//      not pulled in here; include them directly where used)

#include "tempus/calculus.hpp"
#include "tempus/campaign.hpp"
#include "tempus/equation.hpp"
#include "tempus/errors.hpp"
#include "tempus/expr.hpp"
#include "tempus/family.hpp"
#include "tempus/format.hpp"
#include "tempus/grid_function.hpp"
#include "tempus/hyers_ulam.hpp"
#include "tempus/perturbation.hpp"
#include "tempus/rng.hpp"
#include "tempus/solvers.hpp"
#include "tempus/time_scale.hpp"
#include "tempus/tolerances.hpp"
