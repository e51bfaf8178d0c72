#pragma once

#include "hema/model.hpp"

namespace hema {

/// Four-term example with period 0.005 and six coexisting periodic
/// solutions. lambda_k r_k(t) is stored in r with lambda = 1. Matches
/// models/six_orbit.model.
Model six_orbit_model();

/// Same coefficients as six_orbit_model() with every delay set to `delay`.
Model six_orbit_model_with_delay(double delay);

/// Single term a = 2, b = 1, m = 1, n = 2 with constant delays; x = 1 is the
/// unique positive equilibrium.
Model equilibrium_model(double period = 1.0, double delay = 0.1);

/// No production terms: x' = -b x.
Model pure_decay_model(double period = 1.0, double decay = 1.0);

}  // namespace hema
