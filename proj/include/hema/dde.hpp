#pragma once

#include <deque>
#include <functional>
#include <span>
#include <vector>

#include "hema/model.hpp"

namespace hema {

/// Integration variable: the concentration x itself or y = log x.
enum class StateSpace { linear, log };

/// Solution before the initial time, given in either state space.
struct InitialHistory {
    std::function<double(double)> fn;
    StateSpace space = StateSpace::linear;

    static InitialHistory constant(double x0);
    static InitialHistory linear(std::function<double(double)> x);
    static InitialHistory log(std::function<double(double)> y);

    /// Value at t expressed in `target` space.
    double value(double t, StateSpace target) const;
};

/// Per-term delayed states (x(t - tau_k(t)), x(t - mu_k(t))) or their logarithms.
struct DelayedPair {
    double production;
    double feedback;
};

/// x' = sum_k lambda_k r_k(t) x_tau^m_k / (1 + x_mu^n_k) - b(t) x. Powers are
/// evaluated as exp(m log x). Throws std::domain_error on a non-positive state.
double rhs(const Model& model, double t, double x_now, std::span<const DelayedPair> delayed);

/// Log form: y' = sum_k lambda_k r_k(t) e^(m_k y_tau - y) / (1 + e^(n_k y_mu)) - b(t).
double rhs_log(const Model& model, double t, double y_now, std::span<const DelayedPair> delayed);

/// Dense output of the computed solution: knots with values and slopes joined
/// by cubic Hermite pieces, falling back to the initial history before the
/// start time. Knots older than the retention horizon are dropped.
class History {
 public:
    History(InitialHistory initial, StateSpace space, double start, double horizon);

    void append(double t, double value, double slope);
    /// Throws std::out_of_range for t beyond the newest knot or before the retained window.
    double operator()(double t) const;

    double start() const noexcept { return start_; }
    double frontier() const noexcept { return knots_.empty() ? start_ : knots_.back().t; }
    std::size_t size() const noexcept { return knots_.size(); }

 private:
    struct Knot {
        double t;
        double value;
        double slope;
    };
    InitialHistory initial_;
    StateSpace space_;
    double start_;
    double horizon_;
    std::deque<Knot> knots_;
};

struct IntegrateOptions {
    int steps_per_period = 512;
    StateSpace mode = StateSpace::log;
    int record_every = 1;  // keep every n-th step in the trajectory
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> values;  // x or y depending on mode
    StateSpace mode = StateSpace::log;
    double step = 0.0;
    int steps_per_period = 0;
};

/// Classical RK4 with fixed step T / steps_per_period (method of steps).
/// Delayed states are read from the dense history; a step whose delayed
/// reads would land inside the step itself is split into substeps no longer
/// than the shortest positive delay. Zero delays read the current stage state.
Trajectory integrate(const Model& model, const InitialHistory& history, double t_start, double t_end,
                     const IntegrateOptions& options = {});

}  // namespace hema
