#include "hema/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hema/analysis.hpp"

namespace hema {

namespace {

std::vector<Term> unit_terms(std::span<const PeriodicFn> r, std::span<const double> m, std::span<const double> n) {
    std::vector<Term> terms;
    const double period = r.front().period();
    for (std::size_t k = 0; k < r.size(); ++k)
        terms.push_back({1.0, m[k], n[k], r[k], PeriodicFn::constant(period, 0.0), PeriodicFn::constant(period, 0.0)});
    return terms;
}

// Location of the maximum of gamma -> beta_factor(m, n, gamma, c) for 1 < m < n + 1.
double beta_hump_peak(double m, double n, double c) {
    const double p = (m - 1.0) / n;
    return c + std::log(p / (1.0 - p)) / n;
}

}  // namespace

Synthesis synthesize_lambdas(std::span<const PeriodicFn> r, const PeriodicFn& b, std::span<const double> m,
                             std::span<const double> n, double gamma1, double epsilon, const SynthesisOptions& options) {
    if (r.empty() || r.size() != m.size() || r.size() != n.size())
        throw std::invalid_argument("synthesize_lambdas: r, m and n must be non-empty and of equal length");
    std::vector<int> cls(r.size());
    bool has3 = false, has5 = false;
    for (std::size_t k = 0; k < r.size(); ++k) {
        cls[k] = exponent_class(m[k], n[k]);
        if (cls[k] <= 2)
            throw std::invalid_argument("synthesize_lambdas: pattern requires m_k > 1 for all k");
        has3 = has3 || cls[k] == 3;
        has5 = has5 || cls[k] == 5;
    }
    if (!has3 || !has5)
        throw std::invalid_argument(
            "synthesize_lambdas: pattern requires 1 < m_j < n_j + 1 for some j and m_i > n_i + 1 for some i");

    const Model unit(unit_terms(r, m, n), b);
    const double b_min = unit.decay_min();
    if (!(epsilon > 0.0) || !(epsilon < b_min))
        throw std::invalid_argument("synthesize_lambdas: epsilon must lie in (0, min b)");
    const double c = unit.decay_integral();
    const TimeSamples samples(unit, options.t_points);
    const std::size_t nk = r.size();

    Synthesis out;
    out.gamma1 = gamma1;
    out.lambdas.assign(nk, 0.0);

    // Step 1: scale the M3 multipliers until their part of alpha dominates b at gamma1.
    std::vector<double> a3(nk, 0.0);
    for (std::size_t k = 0; k < nk; ++k)
        if (cls[k] == 3) a3[k] = alpha_factor(m[k], n[k], gamma1, c);
    double ratio = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double production = samples.value(i, a3, 0.0);
        ratio = std::max(ratio, samples.decay()[i] / production);
    }
    if (!std::isfinite(ratio) || ratio <= 0.0)
        throw std::runtime_error("synthesize_lambdas: M3 production underflows at gamma1; choose a larger gamma1");
    for (std::size_t k = 0; k < nk; ++k)
        if (cls[k] == 3) out.lambdas[k] = options.headroom * ratio;

    // Step 2: R beyond every M3 hump where the M3 part of beta, bounded with max r_k, is below epsilon.
    auto beta3_bound = [&](double gamma) {
        double s = 0.0;
        for (std::size_t k = 0; k < nk; ++k)
            if (cls[k] == 3) s += out.lambdas[k] * unit.weight_max(k) * beta_factor(m[k], n[k], gamma, c);
        return s;
    };
    double start = gamma1;
    for (std::size_t k = 0; k < nk; ++k)
        if (cls[k] == 3) start = std::max(start, beta_hump_peak(m[k], n[k], c));
    double lo = start, hi = start;
    if (beta3_bound(start) >= epsilon) {
        double step = 1.0;
        hi = start + step;
        while (beta3_bound(hi) >= epsilon) {
            lo = hi;
            step *= 2.0;
            hi = start + step;
            if (step > 1e6) throw std::runtime_error("synthesize_lambdas: M3 part of beta does not decay below epsilon");
        }
        while (hi - lo > 1e-9 * std::max(1.0, std::abs(hi))) {
            const double mid = 0.5 * (lo + hi);
            (beta3_bound(mid) >= epsilon ? lo : hi) = mid;
        }
    }
    out.threshold = hi;
    out.gamma2 = hi + options.gamma_gap;

    // Step 3: shrink the M4/M5 multipliers below b_min - 2 epsilon at gamma2. When
    // 2 epsilon >= b_min that target is not positive; (b_min - epsilon)/2 still
    // leaves beta(gamma2, t) < 0 because the M3 part is already below epsilon.
    const double target = b_min - 2.0 * epsilon > 0.0 ? b_min - 2.0 * epsilon : 0.5 * (b_min - epsilon);
    double tail = 0.0;
    for (std::size_t k = 0; k < nk; ++k)
        if (cls[k] >= 4) tail += unit.weight_max(k) * beta_factor(m[k], n[k], out.gamma2, c);
    const double small = 0.9 * target / tail;
    if (!std::isfinite(small) || !(small > 0.0))
        throw std::runtime_error("synthesize_lambdas: cannot size the M4/M5 multipliers at gamma2");
    for (std::size_t k = 0; k < nk; ++k)
        if (cls[k] >= 4) out.lambdas[k] = small;

    const Model result = with_lambdas(unit, out.lambdas);
    const TimeSamples check(result, options.t_points);
    std::vector<double> fa(nk), fb(nk);
    for (std::size_t k = 0; k < nk; ++k) {
        fa[k] = alpha_factor(m[k], n[k], gamma1, c);
        fb[k] = beta_factor(m[k], n[k], out.gamma2, c);
    }
    out.alpha_margin = check.envelope(fa).min;
    out.beta_margin = check.envelope(fb).max;
    if (!(out.alpha_margin > 0.0) || !(out.beta_margin < 0.0))
        throw std::runtime_error("synthesize_lambdas: post-verification of alpha(gamma1) > 0 > beta(gamma2) failed");
    return out;
}

Synthesis synthesize_lambdas(const Model& base, double gamma1, double epsilon, const SynthesisOptions& options) {
    std::vector<PeriodicFn> r;
    std::vector<double> m, n;
    for (const Term& t : base.terms()) {
        r.push_back(t.r);
        m.push_back(t.m);
        n.push_back(t.n);
    }
    return synthesize_lambdas(r, base.decay(), m, n, gamma1, epsilon, options);
}

Model with_lambdas(const Model& base, std::span<const double> lambdas) {
    if (lambdas.size() != base.size()) throw std::invalid_argument("with_lambdas: one multiplier per term required");
    std::vector<Term> terms(base.terms().begin(), base.terms().end());
    for (std::size_t k = 0; k < terms.size(); ++k) terms[k].lambda = lambdas[k];
    return Model(std::move(terms), base.decay());
}

}  // namespace hema
