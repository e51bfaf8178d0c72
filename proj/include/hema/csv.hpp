#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "hema/analysis.hpp"
#include "hema/dde.hpp"
#include "hema/orbits.hpp"

namespace hema {

/// Shortest decimal form that round-trips; "inf", "-inf" and "nan" otherwise.
std::string format_number(double v);

/// `gamma,t,alpha,beta`, one row per grid point. Requires retained values.
void write_envelope_csv(std::ostream& os, const EnvelopeGrid& grid);
/// `gamma,phi,min_alpha,max_beta`, one row per gamma.
void write_envelope_summary_csv(std::ostream& os, const EnvelopeGrid& grid);
/// `t,x` or `t,y`, preceded by a `# mode: linear|log` comment line.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
/// `t,y,x` on `points` uniform times over one period.
void write_orbit_csv(std::ostream& os, const PeriodicOrbit& orbit, int points = 256);
/// `orbit_id,mean,y_min,y_max,residual,amplitude,bracket_lo,bracket_hi`; ids start at 1.
void write_manifest_csv(std::ostream& os, const std::vector<PeriodicOrbit>& orbits);

}  // namespace hema
