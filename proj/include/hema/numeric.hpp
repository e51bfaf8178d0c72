#pragma once

#include <cmath>
#include <stdexcept>

namespace hema {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// log(1 + e^x) without overflow for large x or underflow loss for very negative x.
inline double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

// Reduces t into [0, period).
inline double wrap_time(double t, double period) {
    double s = std::fmod(t, period);
    if (s < 0.0) s += period;
    if (s >= period) s = 0.0;
    return s;
}

// Composite Simpson rule on [a, b]; `panels` must be even and positive.
template <typename F>
double simpson(F&& f, double a, double b, int panels) {
    if (panels <= 0 || panels % 2 != 0)
        throw std::invalid_argument("simpson: panel count must be positive and even");
    const double h = (b - a) / panels;
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < panels; ++i) {
        const double v = f(a + i * h);
        if (i % 2) odd += v; else even += v;
    }
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace hema
