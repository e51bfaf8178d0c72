#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hema/analysis.hpp"
#include "hema/model.hpp"

namespace hema {

/// Truncated Fourier series  a0 + sum_{j=1..K} (a_j cos(j w t) + b_j sin(j w t)),  w = 2 pi / T.
class FourierSeries {
 public:
    FourierSeries(double period, double mean, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);
    static FourierSeries constant(double period, int harmonics, double value);
    /// Unpacks [a0, a1, b1, a2, b2, ...].
    static FourierSeries unpack(double period, std::span<const double> packed);

    std::vector<double> pack() const;

    double operator()(double t) const;
    double derivative(double t) const;

    double period() const noexcept { return period_; }
    double mean() const noexcept { return mean_; }
    int harmonics() const noexcept { return static_cast<int>(cos_.size()); }
    const std::vector<double>& cos_coeffs() const noexcept { return cos_; }
    const std::vector<double>& sin_coeffs() const noexcept { return sin_; }

 private:
    double period_;
    double mean_;
    std::vector<double> cos_;
    std::vector<double> sin_;
};

/// A T-periodic solution y = log x in Fourier form.
struct PeriodicOrbit {
    FourierSeries y;
    double residual_norm = 0.0;  // max |collocation residual|
    double y_min = 0.0;
    double y_max = 0.0;
    std::optional<Band> bracket;  // log band of the alternation chain containing [y_min, y_max]
    int iterations = 0;

    double amplitude() const { return y_max - y_min; }
};

/// Collocation residuals of the log-form equation at the 4K+2 uniform times
/// t_j = (j + offset) T / (4K + 2). Delayed times are reduced modulo T.
std::vector<double> collocation_residual(const Model& model, const FourierSeries& y, double offset = 0.0);

struct SolveOptions {
    int harmonics = 16;
    int max_harmonics = 64;  // K doubles up to this when Newton stalls close to a solution
    int max_iter = 100;      // total over all K
    double damping = 1.0;  // initial Newton step length; halved while the residual does not drop
    double residual_tolerance = 1e-10;
    double amplitude_tolerance = 1e-6;
    bool snap_seed = true;  // start from the root of phi closest to the seed mean
};

struct SolveResult {
    std::optional<PeriodicOrbit> orbit;  // set when converged and the amplitude bound holds
    int iterations = 0;
    double residual_norm = 0.0;
    std::string failure;  // empty on success
};

/// Damped Gauss-Newton on the 2K+1 Fourier unknowns of y, started from the
/// constant `seed_mean` (or from the nearest root of phi when `snap_seed` is
/// set). The Jacobian is a forward difference; each step is the least-squares
/// solution over the 4K+2 collocation residuals. When the
/// iteration stalls with a small residual, K is doubled (warm start) up to
/// `max_harmonics`.
SolveResult solve_orbit(const Model& model, double seed_mean, const SolveOptions& options = {});

struct OrbitSearchOptions {
    SolveOptions solve;
    int seeds_per_bracket = 5;
    double dedup_tol = 1e-4;
    double margin_floor = 1e-9;
};

struct OrbitSearch {
    std::vector<PeriodicOrbit> orbits;  // distinct, sorted by mean
    int predicted = 0;                  // alternations of the sign chain
    std::vector<Band> intervals;
    std::vector<std::string> warnings;
};

/// Seeds Newton in every band of the alternation chain: the refined roots of phi
/// inside the band plus `seeds_per_bracket` equally spaced means. Unbounded
/// outer bands are closed by marching outwards to the sign change of phi and
/// extending 3C past it. Results are deduplicated by L-infinity distance.
OrbitSearch find_all_orbits(const Model& model, const EnvelopeGrid& envelope, const OrbitSearchOptions& options = {});

/// Max |a(t) - b(t)| on a uniform grid over one period.
double orbit_distance(const FourierSeries& a, const FourierSeries& b, int points = 256);

struct ValidateOptions {
    int steps_per_period = 512;
    double amplitude_tolerance = 1e-6;
    double period_map_tolerance = 1e-5;
};

struct OrbitValidation {
    double amplitude = 0.0;
    double amplitude_bound = 0.0;  // C + tolerance
    bool amplitude_ok = false;
    double period_map_error = 0.0;  // L-infinity, time integration vs Fourier form over one period
    bool period_map_ok = false;
    bool positive = false;
    bool bracket_ok = true;  // true when no bracket is attached
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
};

OrbitValidation validate_orbit(const Model& model, const PeriodicOrbit& orbit, const ValidateOptions& options = {});

}  // namespace hema
