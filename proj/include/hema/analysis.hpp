#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hema/model.hpp"

namespace hema {

/// Uniform grid lo, lo + step, ..., up to hi (inclusive within 1e-9 steps).
struct GammaGrid {
    double lo = -50.0;
    double hi = 50.0;
    double step = 0.01;

    /// Throws std::invalid_argument for an empty range or non-positive step.
    std::vector<double> values() const;
};

// Time-independent parts of the averaged and envelope functions. All use
// exp(a - softplus(b)) so none of them overflow for |gamma| up to several hundred.

/// e^((m-1)g) / (1 + e^(n g))
double phi_factor(double m, double n, double gamma);
/// e^((m-1)g) e^(-C m) / (1 + e^(n (g + C)))
double alpha_factor(double m, double n, double gamma, double c);
/// e^((m-1)g) e^(C m) / (1 + e^(n (g - C)))
double beta_factor(double m, double n, double gamma, double c);

/// phi(g) = sum_k lambda_k mean(r_k) e^((m_k-1)g) / (1 + e^(n_k g)) - mean(b)
double phi(const Model& model, double gamma);
/// Partial sum of phi over M_i (i in 1..5), without the -mean(b) term.
double phi_component(const Model& model, const TermClassification& cls, int class_index, double gamma);

double alpha(const Model& model, double gamma, double t);
double beta(const Model& model, double gamma, double t);

/// The model coefficients sampled on a uniform grid over [0, T).
///
/// Every "for all t" hypothesis is a weighted sum of the sampled lambda_k r_k(t)
/// against b(t), so the per-time work reduces to one dot product per grid point.
class TimeSamples {
 public:
    TimeSamples(const Model& model, int points);

    std::size_t size() const noexcept { return times_.size(); }
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<double>& decay() const noexcept { return decay_; }
    /// lambda_k r_k(t_i)
    const std::vector<double>& weight(std::size_t k) const { return weights_.at(k); }

    struct Range {
        double min;
        double max;
    };
    /// Extremes over the grid of  sum_k factors[k] * lambda_k r_k(t) - decay_scale * b(t).
    Range envelope(std::span<const double> factors, double decay_scale = 1.0) const;
    double value(std::size_t i, std::span<const double> factors, double decay_scale = 1.0) const;

 private:
    std::vector<double> times_;
    std::vector<double> decay_;
    std::vector<std::vector<double>> weights_;
};

/// alpha/beta sampled over a (gamma, t) grid together with phi and the
/// per-gamma extremes min_t alpha, max_t beta.
struct EnvelopeGrid {
    std::vector<double> gammas;
    std::vector<double> times;
    std::vector<double> alpha_values;  // row-major [gamma][t]; empty unless retained
    std::vector<double> beta_values;
    std::vector<double> phi_values;
    std::vector<double> min_alpha;
    std::vector<double> max_beta;

    bool has_values() const noexcept { return !alpha_values.empty(); }
    double alpha_at(std::size_t g, std::size_t t) const { return alpha_values.at(g * times.size() + t); }
    double beta_at(std::size_t g, std::size_t t) const { return beta_values.at(g * times.size() + t); }
    double step() const { return gammas.size() > 1 ? gammas[1] - gammas[0] : 0.0; }
};

EnvelopeGrid scan_envelopes(const Model& model, const GammaGrid& grid, int t_points, bool keep_values = true);

struct PhiBracket {
    double lo;
    double hi;
    bool rising;  // phi(lo) < 0 < phi(hi)
};

struct BracketScan {
    std::vector<PhiBracket> brackets;
    std::vector<std::string> warnings;
};

/// Sign changes of phi over the grid, each refined by bisection to `width`.
/// A midpoint probe inside every sign-preserving step exposes pairs of roots
/// closer than one step; those are split into two brackets and reported.
BracketScan find_phi_brackets(const Model& model, const GammaGrid& grid, double width = 1e-6);

/// Refines a sign change of phi on [lo, hi] to a point (midpoint of the final bracket).
double refine_phi_root(const Model& model, double lo, double hi, double width = 1e-12);

/// Sign of lim phi(g) as g -> -inf / +inf read off the exponent classes
/// (+1 or -1; 0 when the limit is exactly zero).
int phi_limit_sign_minus(const Model& model, const TermClassification& cls);
int phi_limit_sign_plus(const Model& model, const TermClassification& cls);

/// Open log band (lo, hi); either end may be infinite.
struct Band {
    double lo;
    double hi;
    bool contains(double a, double b) const { return lo < a && b < hi; }
};

/// Maximal run of consecutive grid gammas with the same certified sign:
/// +1 where min_t alpha > 0, -1 where max_t beta < 0.
struct ChainRun {
    int sign;
    double first;
    double last;
};

/// Alternating sign chain over the gamma grid with the limit signs of phi at
/// -inf and +inf attached. Each change of sign between consecutive runs encloses
/// one band (last gamma of a run, first gamma of the next) that must contain a
/// periodic solution.
struct AlternationChain {
    int sign_minus = 0;
    int sign_plus = 0;
    std::vector<ChainRun> runs;
    std::vector<Band> intervals;

    int alternations() const noexcept { return static_cast<int>(intervals.size()); }
};

AlternationChain alternation_chain(const Model& model, const EnvelopeGrid& envelope, double margin_floor = 1e-9);

/// Lower bound on the number of positive T-periodic solutions from the chain.
int count_predicted_solutions(const Model& model, const EnvelopeGrid& envelope, double margin_floor = 1e-9);

}  // namespace hema
