#include "hema/periodic_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hema/numeric.hpp"

namespace hema {

namespace {

std::vector<double> solve_tridiagonal(double sub, const std::vector<double>& diag, double super,
                                      const std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    std::vector<double> c(n), x(n);
    double denom = diag[0];
    x[0] = rhs[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
        c[i - 1] = super / denom;
        denom = diag[i] - sub * c[i - 1];
        x[i] = (rhs[i] - sub * x[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

// Second derivatives of the periodic cubic spline through equally spaced
// samples: M[i-1] + 4 M[i] + M[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1]) / h^2,
// indices cyclic. Solved with the Sherman-Morrison correction of the corner terms.
std::vector<double> periodic_spline_curvature(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double prev = y[(i + n - 1) % n], next = y[(i + 1) % n];
        rhs[i] = 6.0 * (next - 2.0 * y[i] + prev) / (h * h);
    }
    const double corner = 1.0;
    const double gamma = -4.0;
    std::vector<double> diag(n, 4.0);
    diag[0] -= gamma;
    diag[n - 1] -= corner * corner / gamma;
    std::vector<double> x = solve_tridiagonal(1.0, diag, 1.0, rhs);
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = corner;
    std::vector<double> z = solve_tridiagonal(1.0, diag, 1.0, u);
    const double fact = (x[0] + corner * x[n - 1] / gamma) / (1.0 + z[0] + corner * z[n - 1] / gamma);
    for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
    return x;
}

void check_period(double period) {
    if (!(period > 0.0) || !std::isfinite(period)) throw ModelError("period", "must be finite and > 0");
}

}  // namespace

PeriodicFn PeriodicFn::constant(double period, double value) { return trig(period, value, {}); }

PeriodicFn PeriodicFn::trig(double period, double mean, std::vector<Harmonic> harmonics) {
    check_period(period);
    if (!std::isfinite(mean)) throw ModelError("mean", "must be finite");
    for (std::size_t i = 0; i < harmonics.size(); ++i) {
        const auto& h = harmonics[i];
        const std::string field = "harmonics[" + std::to_string(i) + "]";
        if (h.multiple < 1) throw ModelError(field, "frequency multiple must be >= 1");
        if (!std::isfinite(h.cos_coeff) || !std::isfinite(h.sin_coeff))
            throw ModelError(field, "coefficients must be finite");
    }
    return PeriodicFn(period, Trig{mean, std::move(harmonics)});
}

PeriodicFn PeriodicFn::sampled(double period, std::vector<double> samples) {
    check_period(period);
    if (samples.size() < 3) throw ModelError("samples", "need at least 3 samples per period");
    for (double v : samples)
        if (!std::isfinite(v)) throw ModelError("samples", "values must be finite");
    const double h = period / static_cast<double>(samples.size());
    auto curvature = periodic_spline_curvature(samples, h);
    return PeriodicFn(period, Sampled{std::move(samples), std::move(curvature)});
}

bool PeriodicFn::is_constant() const noexcept {
    if (const auto* f = std::get_if<Trig>(&form_))
        return std::all_of(f->harmonics.begin(), f->harmonics.end(),
                           [](const Harmonic& h) { return h.cos_coeff == 0.0 && h.sin_coeff == 0.0; });
    const auto& v = std::get<Sampled>(form_).values;
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

double PeriodicFn::operator()(double t) const {
    const double s = wrap_time(t, period_);
    if (const auto* f = std::get_if<Trig>(&form_)) {
        const double theta = kTwoPi * s / period_;
        double value = f->mean;
        for (const auto& h : f->harmonics) {
            const double a = h.multiple * theta;
            value += h.cos_coeff * std::cos(a) + h.sin_coeff * std::sin(a);
        }
        return value;
    }
    const auto& sp = std::get<Sampled>(form_);
    const std::size_t n = sp.values.size();
    const double h = period_ / static_cast<double>(n);
    std::size_t i = std::min(static_cast<std::size_t>(s / h), n - 1);
    const std::size_t j = (i + 1) % n;
    const double u = s - static_cast<double>(i) * h;
    const double w = h - u;
    const double mi = sp.curvature[i], mj = sp.curvature[j];
    return mi * w * w * w / (6.0 * h) + mj * u * u * u / (6.0 * h) + (sp.values[i] / h - mi * h / 6.0) * w +
           (sp.values[j] / h - mj * h / 6.0) * u;
}

double PeriodicFn::mean(int panels) const {
    if (const auto* f = std::get_if<Trig>(&form_)) return f->mean;
    return simpson([this](double t) { return (*this)(t); }, 0.0, period_, panels) / period_;
}

double PeriodicFn::min_on_grid(int points) const {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) lo = std::min(lo, (*this)(period_ * i / points));
    return lo;
}

double PeriodicFn::max_on_grid(int points) const {
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) hi = std::max(hi, (*this)(period_ * i / points));
    return hi;
}

PeriodicFn PeriodicFn::scaled(double factor) const {
    if (const auto* f = std::get_if<Trig>(&form_)) {
        Trig out = *f;
        out.mean *= factor;
        for (auto& h : out.harmonics) {
            h.cos_coeff *= factor;
            h.sin_coeff *= factor;
        }
        return PeriodicFn(period_, std::move(out));
    }
    Sampled out = std::get<Sampled>(form_);
    for (auto& v : out.values) v *= factor;
    for (auto& m : out.curvature) m *= factor;
    return PeriodicFn(period_, std::move(out));
}

PeriodicFn PeriodicFn::shifted(double offset) const {
    if (const auto* f = std::get_if<Trig>(&form_)) {
        Trig out = *f;
        out.mean += offset;
        return PeriodicFn(period_, std::move(out));
    }
    Sampled out = std::get<Sampled>(form_);
    for (auto& v : out.values) v += offset;
    return PeriodicFn(period_, std::move(out));
}

double PeriodicFn::trig_mean() const {
    if (const auto* f = std::get_if<Trig>(&form_)) return f->mean;
    throw std::logic_error("PeriodicFn: not in trigonometric form");
}

const std::vector<Harmonic>& PeriodicFn::harmonics() const {
    if (const auto* f = std::get_if<Trig>(&form_)) return f->harmonics;
    throw std::logic_error("PeriodicFn: not in trigonometric form");
}

const std::vector<double>& PeriodicFn::samples() const {
    if (const auto* f = std::get_if<Sampled>(&form_)) return f->values;
    throw std::logic_error("PeriodicFn: not in sampled form");
}

void require_positive(const PeriodicFn& f, std::string_view name) {
    if (!(f.min_on_grid() > 0.0)) throw ModelError(std::string(name), "must be positive over the whole period");
}

void require_nonnegative(const PeriodicFn& f, std::string_view name) {
    if (!(f.min_on_grid() >= 0.0)) throw ModelError(std::string(name), "must be nonnegative over the whole period");
}

}  // namespace hema
