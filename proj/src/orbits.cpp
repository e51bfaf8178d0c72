#include "hema/orbits.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hema/dde.hpp"
#include "hema/numeric.hpp"

namespace hema {

FourierSeries::FourierSeries(double period, double mean, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
    : period_(period), mean_(mean), cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
    if (!(period > 0.0)) throw std::invalid_argument("FourierSeries: period must be > 0");
    if (cos_.size() != sin_.size()) throw std::invalid_argument("FourierSeries: cos/sin coefficient count mismatch");
}

FourierSeries FourierSeries::constant(double period, int harmonics, double value) {
    return FourierSeries(period, value, std::vector<double>(static_cast<std::size_t>(harmonics), 0.0),
                         std::vector<double>(static_cast<std::size_t>(harmonics), 0.0));
}

FourierSeries FourierSeries::unpack(double period, std::span<const double> packed) {
    if (packed.empty() || packed.size() % 2 == 0)
        throw std::invalid_argument("FourierSeries::unpack: expected 2K+1 coefficients");
    const std::size_t k = packed.size() / 2;
    std::vector<double> a(k), b(k);
    for (std::size_t j = 0; j < k; ++j) {
        a[j] = packed[1 + 2 * j];
        b[j] = packed[2 + 2 * j];
    }
    return FourierSeries(period, packed[0], std::move(a), std::move(b));
}

std::vector<double> FourierSeries::pack() const {
    std::vector<double> out{mean_};
    for (std::size_t j = 0; j < cos_.size(); ++j) {
        out.push_back(cos_[j]);
        out.push_back(sin_[j]);
    }
    return out;
}

double FourierSeries::operator()(double t) const {
    const double theta = kTwoPi * wrap_time(t, period_) / period_;
    double v = mean_;
    for (std::size_t j = 0; j < cos_.size(); ++j) {
        const double a = static_cast<double>(j + 1) * theta;
        v += cos_[j] * std::cos(a) + sin_[j] * std::sin(a);
    }
    return v;
}

double FourierSeries::derivative(double t) const {
    const double w = kTwoPi / period_;
    const double theta = w * wrap_time(t, period_);
    double v = 0.0;
    for (std::size_t j = 0; j < cos_.size(); ++j) {
        const double jj = static_cast<double>(j + 1);
        v += jj * w * (sin_[j] * std::cos(jj * theta) - cos_[j] * std::sin(jj * theta));
    }
    return v;
}

namespace {

// Residual map c -> y'(t_j) - f(t_j, y) with every Fourier evaluation
// precomputed as a basis matrix (rows: collocation times, columns: packed coefficients).
class Collocation {
 public:
    Collocation(const Model& model, int harmonics, double offset) : decay_(points(harmonics)) {
        const double period = model.period();
        const int n = points(harmonics);
        const int cols = 2 * harmonics + 1;
        const double w = kTwoPi / period;
        value_.resize(n, cols);
        slope_.resize(n, cols);
        production_.assign(model.size(), Eigen::MatrixXd(n, cols));
        feedback_.assign(model.size(), Eigen::MatrixXd(n, cols));
        weight_.resize(n, static_cast<Eigen::Index>(model.size()));
        for (const Term& term : model.terms()) {
            m_.push_back(term.m);
            n_.push_back(term.n);
        }
        auto fill = [&](Eigen::MatrixXd& basis, int row, double t) {
            const double theta = w * wrap_time(t, period);
            basis(row, 0) = 1.0;
            for (int j = 1; j <= harmonics; ++j) {
                basis(row, 2 * j - 1) = std::cos(j * theta);
                basis(row, 2 * j) = std::sin(j * theta);
            }
        };
        for (int i = 0; i < n; ++i) {
            const double t = (i + offset) * period / n;
            fill(value_, i, t);
            const double theta = w * wrap_time(t, period);
            slope_(i, 0) = 0.0;
            for (int j = 1; j <= harmonics; ++j) {
                slope_(i, 2 * j - 1) = -j * w * std::sin(j * theta);
                slope_(i, 2 * j) = j * w * std::cos(j * theta);
            }
            decay_(i) = model.decay()(t);
            for (std::size_t k = 0; k < model.size(); ++k) {
                const Term& term = model.term(k);
                fill(production_[k], i, t - term.tau(t));
                fill(feedback_[k], i, t - term.mu(t));
                weight_(i, static_cast<Eigen::Index>(k)) = term.lambda * term.r(t);
            }
        }
    }

    static int points(int harmonics) { return 4 * harmonics + 2; }

    Eigen::VectorXd residual(const Eigen::VectorXd& c) const {
        const Eigen::VectorXd y = value_ * c;
        Eigen::VectorXd out = slope_ * c + decay_;
        for (std::size_t k = 0; k < m_.size(); ++k) {
            const Eigen::VectorXd yp = production_[k] * c;
            const Eigen::VectorXd yf = feedback_[k] * c;
            for (Eigen::Index i = 0; i < out.size(); ++i)
                out(i) -= weight_(i, static_cast<Eigen::Index>(k)) * std::exp(m_[k] * yp(i) - y(i) - softplus(n_[k] * yf(i)));
        }
        return out;
    }

 private:
    Eigen::MatrixXd value_, slope_;
    std::vector<Eigen::MatrixXd> production_, feedback_;
    Eigen::MatrixXd weight_;
    Eigen::VectorXd decay_;
    std::vector<double> m_, n_;
};

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

std::pair<double, double> extremes(const FourierSeries& y, int points = 4096) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < points; ++i) {
        const double v = y(y.period() * i / points);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

}  // namespace

std::vector<double> collocation_residual(const Model& model, const FourierSeries& y, double offset) {
    if (y.harmonics() < 1) throw std::invalid_argument("collocation_residual: need at least one harmonic");
    const Collocation sys(model, y.harmonics(), offset);
    const auto packed = y.pack();
    const Eigen::VectorXd r = sys.residual(Eigen::Map<const Eigen::VectorXd>(packed.data(), static_cast<Eigen::Index>(packed.size())));
    return {r.data(), r.data() + r.size()};
}

namespace {

enum class Stop { converged, stalled, exhausted, diverged, not_finite };

// Damped Gauss-Newton at a fixed number of harmonics; updates c, r and the iteration count.
Stop gauss_newton(const Collocation& sys, Eigen::VectorXd& c, Eigen::VectorXd& r, const SolveOptions& options,
                  int& iterations) {
    r = sys.residual(c);
    if (!all_finite(r)) return Stop::not_finite;
    Eigen::MatrixXd jac(r.size(), c.size());
    const double fd_step = std::sqrt(std::numeric_limits<double>::epsilon());
    while (true) {
        if (r.lpNorm<Eigen::Infinity>() <= options.residual_tolerance) return Stop::converged;
        if (iterations >= options.max_iter) return Stop::exhausted;
        for (Eigen::Index i = 0; i < c.size(); ++i) {
            const double h = fd_step * std::max(1.0, std::abs(c(i)));
            Eigen::VectorXd shifted = c;
            shifted(i) += h;
            jac.col(i) = (sys.residual(shifted) - r) / h;
        }
        const Eigen::VectorXd delta = jac.colPivHouseholderQr().solve(-r);
        const double f0 = r.squaredNorm();
        double step = options.damping;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
            const Eigen::VectorXd trial = c + step * delta;
            const Eigen::VectorXd rt = sys.residual(trial);
            if (all_finite(rt) && rt.squaredNorm() < (1.0 - 1e-4 * step) * f0) {
                c = trial;
                r = rt;
                accepted = true;
                break;
            }
        }
        ++iterations;
        if (!accepted) return Stop::stalled;
        if (std::abs(c(0)) > 1e5) return Stop::diverged;
    }
}

// Closest sign change of phi to `seed`, marching outwards on both sides.
double nearest_phi_root(const Model& model, double seed) {
    constexpr double kStep = 0.05;
    constexpr int kMaxSteps = 4000;
    const double at_seed = phi(model, seed);
    if (at_seed == 0.0 || !std::isfinite(at_seed)) return seed;
    double left = seed, right = seed, f_left = at_seed, f_right = at_seed;
    for (int i = 1; i <= kMaxSteps; ++i) {
        const double r = seed + i * kStep, l = seed - i * kStep;
        const double fr = phi(model, r), fl = phi(model, l);
        if (sign_of(fr) != sign_of(f_right)) return refine_phi_root(model, right, r);
        if (sign_of(fl) != sign_of(f_left)) return refine_phi_root(model, l, left);
        right = r, f_right = fr;
        left = l, f_left = fl;
    }
    return seed;
}

Eigen::VectorXd pad(const Eigen::VectorXd& c, int harmonics) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * harmonics + 1);
    out.head(c.size()) = c;
    return out;
}

}  // namespace

SolveResult solve_orbit(const Model& model, double seed_mean, const SolveOptions& options) {
    if (options.harmonics < 1) throw std::invalid_argument("solve_orbit: need at least one harmonic");
    if (!(options.damping > 0.0) || options.damping > 1.0) throw std::invalid_argument("solve_orbit: damping must be in (0, 1]");
    constexpr double kRefineBelow = 1e-3;

    SolveResult out;
    int harmonics = options.harmonics;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * harmonics + 1);
    c(0) = options.snap_seed ? nearest_phi_root(model, seed_mean) : seed_mean;
    Eigen::VectorXd r;
    while (true) {
        const Collocation sys(model, harmonics, 0.0);
        const Stop stop = gauss_newton(sys, c, r, options, out.iterations);
        out.residual_norm = r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0;
        if (stop == Stop::converged) break;
        const bool near = (stop == Stop::stalled || stop == Stop::exhausted) && out.residual_norm < kRefineBelow;
        if (near && 2 * harmonics <= options.max_harmonics && out.iterations < options.max_iter) {
            harmonics *= 2;
            c = pad(c, harmonics);
            continue;
        }
        switch (stop) {
            case Stop::stalled: out.failure = "line search stalled"; break;
            case Stop::exhausted: out.failure = "no convergence after " + std::to_string(options.max_iter) + " iterations"; break;
            case Stop::diverged: out.failure = "iterate diverged"; break;
            default: out.failure = "residual is not finite"; break;
        }
        return out;
    }

    const std::vector<double> packed(c.data(), c.data() + c.size());
    PeriodicOrbit orbit{FourierSeries::unpack(model.period(), packed), out.residual_norm, 0.0, 0.0, std::nullopt,
                        out.iterations};
    std::tie(orbit.y_min, orbit.y_max) = extremes(orbit.y);
    if (orbit.amplitude() > model.decay_integral() + options.amplitude_tolerance) {
        out.failure = "converged orbit violates the amplitude bound y_max - y_min <= C";
        return out;
    }
    out.orbit = std::move(orbit);
    return out;
}

double orbit_distance(const FourierSeries& a, const FourierSeries& b, int points) {
    double d = 0.0;
    for (int i = 0; i < points; ++i) {
        const double t = a.period() * i / points;
        d = std::max(d, std::abs(a(t) - b(t)));
    }
    return d;
}

namespace {

// Root of phi beyond the finite end of an unbounded band, found by doubling
// steps toward the infinite side until phi takes the limit sign there.
std::optional<double> outer_root(const Model& model, double start, int direction, int limit_sign) {
    double prev = start, g = start, step = 1.0;
    while (sign_of(phi(model, g)) != limit_sign) {
        prev = g;
        g = start + direction * step;
        step *= 2.0;
        if (std::abs(g) > 1e6) return std::nullopt;
    }
    if (g == prev) return std::nullopt;
    return refine_phi_root(model, std::min(prev, g), std::max(prev, g));
}

void spread(std::vector<double>& seeds, double lo, double hi, int count) {
    for (int i = 0; i < count; ++i) seeds.push_back(lo + (i + 0.5) * (hi - lo) / count);
}

}  // namespace

OrbitSearch find_all_orbits(const Model& model, const EnvelopeGrid& envelope, const OrbitSearchOptions& options) {
    OrbitSearch out;
    const AlternationChain chain = alternation_chain(model, envelope, options.margin_floor);
    out.predicted = chain.alternations();
    out.intervals = chain.intervals;
    const double c3 = 3.0 * model.decay_integral();
    const double grid_step = envelope.step() > 0.0 ? envelope.step() : 0.01;

    std::vector<double> seeds;
    for (const Band& band : chain.intervals) {
        const bool lo_finite = std::isfinite(band.lo), hi_finite = std::isfinite(band.hi);
        if (lo_finite && hi_finite) {
            if (band.hi > band.lo) {
                const double step = std::min(grid_step, (band.hi - band.lo) / 8.0);
                const BracketScan scan = find_phi_brackets(model, {band.lo, band.hi, step});
                for (const auto& b : scan.brackets) seeds.push_back(refine_phi_root(model, b.lo, b.hi));
                out.warnings.insert(out.warnings.end(), scan.warnings.begin(), scan.warnings.end());
            }
            spread(seeds, band.lo, band.hi, options.seeds_per_bracket);
            continue;
        }
        std::optional<double> root;
        double near = 0.0;
        int direction = 0;
        if (lo_finite || hi_finite) {
            near = lo_finite ? band.lo : band.hi;
            direction = lo_finite ? +1 : -1;
            root = outer_root(model, near, direction, direction > 0 ? chain.sign_plus : chain.sign_minus);
        } else {
            direction = sign_of(phi(model, 0.0)) == chain.sign_plus ? -1 : +1;
            root = outer_root(model, 0.0, direction, direction > 0 ? chain.sign_plus : chain.sign_minus);
        }
        if (!root) {
            out.warnings.push_back("no sign change of phi found in an unbounded band");
            continue;
        }
        seeds.push_back(*root);
        const double far = *root + direction * c3;
        if (lo_finite || hi_finite)
            spread(seeds, std::min(near, far), std::max(near, far), options.seeds_per_bracket);
        else
            spread(seeds, *root - c3, *root + c3, options.seeds_per_bracket);
    }

    std::vector<std::future<SolveResult>> jobs;
    jobs.reserve(seeds.size());
    for (double s : seeds)
        jobs.push_back(std::async(std::launch::async, [&model, s, &options] { return solve_orbit(model, s, options.solve); }));

    for (auto& job : jobs) {
        SolveResult res = job.get();
        if (!res.orbit) continue;
        const bool duplicate = std::any_of(out.orbits.begin(), out.orbits.end(), [&](const PeriodicOrbit& o) {
            return orbit_distance(o.y, res.orbit->y) < options.dedup_tol;
        });
        if (!duplicate) out.orbits.push_back(std::move(*res.orbit));
    }
    std::sort(out.orbits.begin(), out.orbits.end(),
              [](const PeriodicOrbit& a, const PeriodicOrbit& b) { return a.y.mean() < b.y.mean(); });
    for (auto& orbit : out.orbits) {
        for (const Band& band : chain.intervals)
            if (band.contains(orbit.y_min, orbit.y_max)) {
                orbit.bracket = band;
                break;
            }
    }
    if (static_cast<int>(out.orbits.size()) < out.predicted) {
        std::ostringstream os;
        os << "found " << out.orbits.size() << " distinct orbits, fewer than the predicted " << out.predicted;
        out.warnings.push_back(os.str());
    }
    return out;
}

OrbitValidation validate_orbit(const Model& model, const PeriodicOrbit& orbit, const ValidateOptions& options) {
    OrbitValidation v;
    const auto [lo, hi] = extremes(orbit.y);
    v.amplitude = hi - lo;
    v.amplitude_bound = model.decay_integral() + options.amplitude_tolerance;
    v.amplitude_ok = v.amplitude <= v.amplitude_bound;
    if (!v.amplitude_ok) v.failures.push_back("amplitude: y_max - y_min exceeds C");

    const FourierSeries& y = orbit.y;
    IntegrateOptions io;
    io.steps_per_period = options.steps_per_period;
    io.mode = StateSpace::log;
    try {
        const Trajectory traj = integrate(model, InitialHistory::log([&y](double t) { return y(t); }), 0.0, model.period(), io);
        for (std::size_t i = 0; i < traj.times.size(); ++i)
            v.period_map_error = std::max(v.period_map_error, std::abs(traj.values[i] - y(traj.times[i])));
        v.period_map_ok = v.period_map_error <= options.period_map_tolerance;
    } catch (const std::exception& e) {
        v.period_map_error = std::numeric_limits<double>::infinity();
        v.period_map_ok = false;
    }
    if (!v.period_map_ok) v.failures.push_back("period map: time integration departs from the orbit");

    v.positive = std::isfinite(lo) && std::isfinite(hi);
    if (!v.positive) v.failures.push_back("positivity: log state is not finite");

    if (orbit.bracket) {
        v.bracket_ok = orbit.bracket->contains(lo, hi);
        if (!v.bracket_ok) v.failures.push_back("bracket: orbit leaves its log band");
    }
    return v;
}

}  // namespace hema
