#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hema {

// Raised for any malformed model input. `field()` names the offending entry,
// e.g. "terms[2].lambda".
class ModelError : public std::invalid_argument {
 public:
    ModelError(std::string field, const std::string& what)
        : std::invalid_argument(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

 private:
    std::string field_;
};

struct Harmonic {
    int multiple = 1;  // j >= 1, frequency j * 2*pi/T
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
};

/// A T-periodic scalar coefficient function.
///
/// Two representations are supported: a trigonometric polynomial
///   a0 + sum_j (c_j cos(2 pi j t / T) + s_j sin(2 pi j t / T))
/// and uniformly spaced samples over one period joined by a periodic cubic
/// spline. Arguments are always reduced modulo T before evaluation.
class PeriodicFn {
 public:
    static constexpr int kDefaultPanels = 1024;
    static constexpr int kValidationGrid = 4096;

    static PeriodicFn constant(double period, double value);
    static PeriodicFn trig(double period, double mean, std::vector<Harmonic> harmonics = {});
    static PeriodicFn sampled(double period, std::vector<double> samples);

    double operator()(double t) const;

    double period() const noexcept { return period_; }
    bool is_trig() const noexcept { return std::holds_alternative<Trig>(form_); }
    bool is_constant() const noexcept;

    /// Average over one period: exact for the trig form, composite Simpson
    /// over the spline for the sampled form.
    double mean(int panels = kDefaultPanels) const;

    double min_on_grid(int points = kValidationGrid) const;
    double max_on_grid(int points = kValidationGrid) const;

    PeriodicFn scaled(double factor) const;
    PeriodicFn shifted(double offset) const;

    // Trig form accessors; throw std::logic_error on the sampled form.
    double trig_mean() const;
    const std::vector<Harmonic>& harmonics() const;
    // Sampled form accessor; throws std::logic_error on the trig form.
    const std::vector<double>& samples() const;

 private:
    struct Trig {
        double mean = 0.0;
        std::vector<Harmonic> harmonics;
    };
    struct Sampled {
        std::vector<double> values;
        std::vector<double> curvature;  // spline second derivatives at the knots
    };

    PeriodicFn(double period, std::variant<Trig, Sampled> form) : period_(period), form_(std::move(form)) {}

    double period_ = 1.0;
    std::variant<Trig, Sampled> form_;
};

// Throw ModelError(name, ...) unless f > 0 (resp. >= 0) on the validation grid.
void require_positive(const PeriodicFn& f, std::string_view name);
void require_nonnegative(const PeriodicFn& f, std::string_view name);

}  // namespace hema
