#include "hema/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace hema {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

void write_envelope_csv(std::ostream& os, const EnvelopeGrid& grid) {
    if (!grid.has_values()) throw std::invalid_argument("write_envelope_csv: envelope values were not retained");
    os << "gamma,t,alpha,beta\n";
    for (std::size_t g = 0; g < grid.gammas.size(); ++g)
        for (std::size_t i = 0; i < grid.times.size(); ++i)
            os << format_number(grid.gammas[g]) << ',' << format_number(grid.times[i]) << ','
               << format_number(grid.alpha_at(g, i)) << ',' << format_number(grid.beta_at(g, i)) << '\n';
}

void write_envelope_summary_csv(std::ostream& os, const EnvelopeGrid& grid) {
    os << "gamma,phi,min_alpha,max_beta\n";
    for (std::size_t g = 0; g < grid.gammas.size(); ++g)
        os << format_number(grid.gammas[g]) << ',' << format_number(grid.phi_values[g]) << ','
           << format_number(grid.min_alpha[g]) << ',' << format_number(grid.max_beta[g]) << '\n';
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    const bool log = traj.mode == StateSpace::log;
    os << "# mode: " << (log ? "log" : "linear") << '\n' << (log ? "t,y\n" : "t,x\n");
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        os << format_number(traj.times[i]) << ',' << format_number(traj.values[i]) << '\n';
}

void write_orbit_csv(std::ostream& os, const PeriodicOrbit& orbit, int points) {
    os << "t,y,x\n";
    for (int i = 0; i < points; ++i) {
        const double t = orbit.y.period() * i / points;
        const double y = orbit.y(t);
        os << format_number(t) << ',' << format_number(y) << ',' << format_number(std::exp(y)) << '\n';
    }
}

void write_manifest_csv(std::ostream& os, const std::vector<PeriodicOrbit>& orbits) {
    os << "orbit_id,mean,y_min,y_max,residual,amplitude,bracket_lo,bracket_hi\n";
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        const PeriodicOrbit& o = orbits[i];
        os << i + 1 << ',' << format_number(o.y.mean()) << ',' << format_number(o.y_min) << ','
           << format_number(o.y_max) << ',' << format_number(o.residual_norm) << ',' << format_number(o.amplitude())
           << ',';
        if (o.bracket)
            os << format_number(o.bracket->lo) << ',' << format_number(o.bracket->hi);
        else
            os << ',';
        os << '\n';
    }
}

}  // namespace hema
