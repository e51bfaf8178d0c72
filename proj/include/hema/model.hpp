#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hema/periodic_fn.hpp"

namespace hema {

// One production term  lambda * r(t) * x(t - tau(t))^m / (1 + x(t - mu(t))^n).
struct Term {
    double lambda = 1.0;
    double m = 1.0;
    double n = 1.0;
    PeriodicFn r = PeriodicFn::constant(1.0, 1.0);
    PeriodicFn tau = PeriodicFn::constant(1.0, 0.0);
    PeriodicFn mu = PeriodicFn::constant(1.0, 0.0);
};

/// Nonautonomous multi-delay Mackey-Glass model
///   x'(t) = sum_k lambda_k r_k(t) x(t - tau_k)^m_k / (1 + x(t - mu_k)^n_k) - b(t) x(t).
///
/// Validated and immutable after construction. Averages, extrema and the
/// integrated decay C = int_0^T b are computed once. An empty term list is
/// accepted and describes pure decay.
class Model {
 public:
    Model(std::vector<Term> terms, PeriodicFn decay);

    std::span<const Term> terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    const Term& term(std::size_t k) const { return terms_.at(k); }
    const PeriodicFn& decay() const noexcept { return decay_; }

    double period() const noexcept { return decay_.period(); }
    double decay_mean() const noexcept { return decay_mean_; }
    /// C = T * mean(b), the log-amplitude bound of any periodic solution.
    double decay_integral() const noexcept { return decay_mean_ * period(); }
    double decay_min() const noexcept { return decay_min_; }
    double decay_max() const noexcept { return decay_max_; }

    /// lambda_k * mean(r_k)
    double weight_mean(std::size_t k) const { return weight_mean_.at(k); }
    /// lambda_k * max_t r_k(t) on the validation grid
    double weight_max(std::size_t k) const { return weight_max_.at(k); }
    /// Largest delay over all terms and both delay functions.
    double max_delay() const noexcept { return max_delay_; }

    Model with_decay(PeriodicFn decay) const { return Model(terms_, std::move(decay)); }
    Model with_terms(std::vector<Term> terms) const { return Model(std::move(terms), decay_); }

 private:
    std::vector<Term> terms_;
    PeriodicFn decay_;
    double decay_mean_ = 0.0;
    double decay_min_ = 0.0;
    double decay_max_ = 0.0;
    std::vector<double> weight_mean_;
    std::vector<double> weight_max_;
    double max_delay_ = 0.0;
};

enum class GrowthCase { superlinear, sublinear, asymptotically_linear };

std::string to_string(GrowthCase c);

/// Partition of term indices (0-based) by the exponent pattern:
///   M1: 0 < m < 1,  M2: m = 1,  M3: 1 < m < n + 1,  M4: m = n + 1,  M5: m > n + 1.
struct TermClassification {
    std::array<std::vector<std::size_t>, 5> sets;
    GrowthCase growth = GrowthCase::sublinear;

    /// Set M_i for i in 1..5.
    const std::vector<std::size_t>& set(int i) const { return sets.at(static_cast<std::size_t>(i - 1)); }
    bool has(int i) const { return !set(i).empty(); }
    /// Printable form using 1-based term numbers, e.g. "M1={1} M2={} M3={2,3} M4={} M5={4} case=superlinear".
    std::string describe() const;
};

/// Class index 1..5 of a single term. Equality m == n + 1 is exact.
int exponent_class(double m, double n);

TermClassification classify(const Model& model);

}  // namespace hema
