#include "hema/dde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hema/numeric.hpp"

namespace hema {

InitialHistory InitialHistory::constant(double x0) {
    if (!(x0 > 0.0)) throw std::domain_error("initial history must be positive");
    return {[x0](double) { return x0; }, StateSpace::linear};
}

InitialHistory InitialHistory::linear(std::function<double(double)> x) { return {std::move(x), StateSpace::linear}; }

InitialHistory InitialHistory::log(std::function<double(double)> y) { return {std::move(y), StateSpace::log}; }

double InitialHistory::value(double t, StateSpace target) const {
    const double v = fn(t);
    if (space == target) return v;
    if (target == StateSpace::log) {
        if (!(v > 0.0)) throw std::domain_error("initial history must be positive");
        return std::log(v);
    }
    return std::exp(v);
}

double rhs(const Model& model, double t, double x_now, std::span<const DelayedPair> delayed) {
    if (delayed.size() != model.size()) throw std::invalid_argument("rhs: one delayed pair per term required");
    double sum = 0.0;
    for (std::size_t k = 0; k < model.size(); ++k) {
        const Term& term = model.term(k);
        const auto& d = delayed[k];
        if (!(d.production > 0.0) || !(d.feedback > 0.0))
            throw std::domain_error("rhs: delayed state must be positive in linear mode");
        sum += term.lambda * term.r(t) * std::exp(term.m * std::log(d.production) - softplus(term.n * std::log(d.feedback)));
    }
    return sum - model.decay()(t) * x_now;
}

double rhs_log(const Model& model, double t, double y_now, std::span<const DelayedPair> delayed) {
    if (delayed.size() != model.size()) throw std::invalid_argument("rhs_log: one delayed pair per term required");
    double sum = 0.0;
    for (std::size_t k = 0; k < model.size(); ++k) {
        const Term& term = model.term(k);
        const auto& d = delayed[k];
        sum += term.lambda * term.r(t) * std::exp(term.m * d.production - y_now - softplus(term.n * d.feedback));
    }
    return sum - model.decay()(t);
}

History::History(InitialHistory initial, StateSpace space, double start, double horizon)
    : initial_(std::move(initial)), space_(space), start_(start), horizon_(horizon) {}

void History::append(double t, double value, double slope) {
    if (!knots_.empty() && !(t > knots_.back().t)) throw std::invalid_argument("History: knots must increase in time");
    knots_.push_back({t, value, slope});
    while (knots_.size() > 2 && knots_[1].t < t - horizon_) knots_.pop_front();
}

double History::operator()(double t) const {
    if (t < start_) return initial_.value(t, space_);
    if (knots_.empty() || t > knots_.back().t) throw std::out_of_range("History: read beyond the computed solution");
    if (t < knots_.front().t) throw std::out_of_range("History: read before the retained window");
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t, [](double v, const Knot& k) { return v < k.t; });
    if (it == knots_.end()) return knots_.back().value;
    const Knot& b = *it;
    const Knot& a = *(it - 1);
    const double h = b.t - a.t;
    const double s = (t - a.t) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * a.value + (s3 - 2 * s2 + s) * h * a.slope + (-2 * s3 + 3 * s2) * b.value +
           (s3 - s2) * h * b.slope;
}

namespace {

class Stepper {
 public:
    Stepper(const Model& model, const InitialHistory& initial, StateSpace mode, double start, double step)
        : model_(model), mode_(mode), history_(initial, mode, start, model.max_delay() + model.period() + 4 * step),
          delayed_(model.size()), zero_delay_(1e-12 * model.period()) {
        t_ = start;
        y_ = initial.value(start, mode);
        dy_ = slope(t_, y_);
        history_.append(t_, y_, dy_);
    }

    double time() const { return t_; }
    double state() const { return y_; }

    void advance(double h, int depth = 0) {
        const double shortest = shortest_delay(h);
        if (shortest < h && depth == 0) {
            const int pieces = static_cast<int>(std::min(4096.0, std::ceil(h / shortest)));
            const double t0 = t_;
            for (int i = 1; i <= pieces; ++i) advance(t0 + h * i / pieces - t_, depth + 1);
            return;
        }
        const double t = t_, y = y_;
        const double k1 = dy_;
        const double k2 = slope(t + 0.5 * h, y + 0.5 * h * k1);
        const double k3 = slope(t + 0.5 * h, y + 0.5 * h * k2);
        const double k4 = slope(t + h, y + h * k3);
        const double y_next = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(y_next)) throw std::runtime_error("integrate: solution is not finite");
        if (mode_ == StateSpace::linear && !(y_next > 0.0))
            throw std::domain_error("integrate: linear-mode state lost positivity; use log mode or a smaller step");
        const double t_next = t + h;
        const double dy_next = slope(t_next, y_next);
        history_.append(t_next, y_next, dy_next);
        t_ = t_next;
        y_ = y_next;
        dy_ = dy_next;
    }

 private:
    double shortest_delay(double h) const {
        double d = std::numeric_limits<double>::infinity();
        for (double s : {t_, t_ + 0.5 * h, t_ + h})
            for (const Term& term : model_.terms())
                for (double v : {term.tau(s), term.mu(s)})
                    if (v > zero_delay_) d = std::min(d, v);
        return d;
    }

    // Delayed state at t - delay. Reads that would land past the newest knot
    // (only possible once substeps hit their cap) use the current stage state.
    double read(double t, double delay, double state_now) const {
        if (delay <= zero_delay_) return state_now;
        const double s = t - delay;
        if (s > history_.frontier()) return state_now;
        return history_(s);
    }

    double slope(double t, double state) {
        for (std::size_t k = 0; k < model_.size(); ++k) {
            const Term& term = model_.term(k);
            delayed_[k] = {read(t, term.tau(t), state), read(t, term.mu(t), state)};
        }
        return mode_ == StateSpace::log ? rhs_log(model_, t, state, delayed_) : rhs(model_, t, state, delayed_);
    }

    const Model& model_;
    StateSpace mode_;
    History history_;
    std::vector<DelayedPair> delayed_;
    double zero_delay_;
    double t_ = 0.0, y_ = 0.0, dy_ = 0.0;
};

}  // namespace

Trajectory integrate(const Model& model, const InitialHistory& history, double t_start, double t_end,
                     const IntegrateOptions& options) {
    if (options.steps_per_period < 64) throw std::invalid_argument("integrate: steps_per_period must be >= 64");
    if (options.record_every < 1) throw std::invalid_argument("integrate: record_every must be >= 1");
    if (!(t_end > t_start)) throw std::invalid_argument("integrate: t_end must exceed t_start");

    const double h = model.period() / options.steps_per_period;
    Trajectory out;
    out.mode = options.mode;
    out.step = h;
    out.steps_per_period = options.steps_per_period;

    Stepper stepper(model, history, options.mode, t_start, h);
    out.times.push_back(t_start);
    out.values.push_back(stepper.state());
    const auto steps = static_cast<long long>(std::ceil((t_end - t_start) / h - 1e-9));
    for (long long i = 1; i <= steps; ++i) {
        const double target = i == steps ? t_end : t_start + static_cast<double>(i) * h;
        stepper.advance(target - stepper.time());
        if (i % options.record_every == 0 || i == steps) {
            out.times.push_back(stepper.time());
            out.values.push_back(stepper.state());
        }
    }
    return out;
}

}  // namespace hema
