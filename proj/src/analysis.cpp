#include "hema/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hema/numeric.hpp"
#include "parallel.hpp"

namespace hema {

std::vector<double> GammaGrid::values() const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step))
        throw std::invalid_argument("gamma grid: bounds and step must be finite");
    if (!(step > 0.0)) throw std::invalid_argument("gamma grid: step must be > 0");
    if (!(hi > lo)) throw std::invalid_argument("gamma grid: empty range (need lo < hi)");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + static_cast<double>(i) * step;
    return out;
}

double phi_factor(double m, double n, double gamma) { return std::exp((m - 1.0) * gamma - softplus(n * gamma)); }

double alpha_factor(double m, double n, double gamma, double c) {
    return std::exp((m - 1.0) * gamma - c * m - softplus(n * (gamma + c)));
}

double beta_factor(double m, double n, double gamma, double c) {
    return std::exp((m - 1.0) * gamma + c * m - softplus(n * (gamma - c)));
}

double phi(const Model& model, double gamma) {
    double sum = 0.0;
    for (std::size_t k = 0; k < model.size(); ++k) {
        const Term& t = model.term(k);
        sum += model.weight_mean(k) * phi_factor(t.m, t.n, gamma);
    }
    return sum - model.decay_mean();
}

double phi_component(const Model& model, const TermClassification& cls, int class_index, double gamma) {
    if (class_index < 1 || class_index > 5) throw std::out_of_range("phi_component: class index must be in 1..5");
    double sum = 0.0;
    for (std::size_t k : cls.set(class_index)) {
        const Term& t = model.term(k);
        sum += model.weight_mean(k) * phi_factor(t.m, t.n, gamma);
    }
    return sum;
}

double alpha(const Model& model, double gamma, double t) {
    const double c = model.decay_integral();
    double sum = 0.0;
    for (const Term& term : model.terms()) sum += term.lambda * term.r(t) * alpha_factor(term.m, term.n, gamma, c);
    return sum - model.decay()(t);
}

double beta(const Model& model, double gamma, double t) {
    const double c = model.decay_integral();
    double sum = 0.0;
    for (const Term& term : model.terms()) sum += term.lambda * term.r(t) * beta_factor(term.m, term.n, gamma, c);
    return sum - model.decay()(t);
}

TimeSamples::TimeSamples(const Model& model, int points) {
    if (points < 2) throw std::invalid_argument("time grid needs at least 2 points");
    const double period = model.period();
    times_.resize(static_cast<std::size_t>(points));
    decay_.resize(times_.size());
    weights_.assign(model.size(), std::vector<double>(times_.size()));
    for (std::size_t i = 0; i < times_.size(); ++i) {
        const double t = period * static_cast<double>(i) / points;
        times_[i] = t;
        decay_[i] = model.decay()(t);
        for (std::size_t k = 0; k < model.size(); ++k) {
            const Term& term = model.term(k);
            weights_[k][i] = term.lambda * term.r(t);
        }
    }
}

double TimeSamples::value(std::size_t i, std::span<const double> factors, double decay_scale) const {
    double v = -decay_scale * decay_[i];
    for (std::size_t k = 0; k < weights_.size(); ++k)
        if (factors[k] != 0.0) v += factors[k] * weights_[k][i];
    return v;
}

TimeSamples::Range TimeSamples::envelope(std::span<const double> factors, double decay_scale) const {
    if (factors.size() != weights_.size()) throw std::invalid_argument("TimeSamples::envelope: factor count mismatch");
    Range r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < times_.size(); ++i) {
        const double v = value(i, factors, decay_scale);
        r.min = std::min(r.min, v);
        r.max = std::max(r.max, v);
    }
    return r;
}

EnvelopeGrid scan_envelopes(const Model& model, const GammaGrid& grid, int t_points, bool keep_values) {
    EnvelopeGrid out;
    out.gammas = grid.values();
    const TimeSamples samples(model, t_points);
    out.times = samples.times();
    const std::size_t ng = out.gammas.size(), nt = out.times.size(), nk = model.size();
    out.phi_values.resize(ng);
    out.min_alpha.resize(ng);
    out.max_beta.resize(ng);
    if (keep_values) {
        out.alpha_values.resize(ng * nt);
        out.beta_values.resize(ng * nt);
    }
    const double c = model.decay_integral();

    detail::parallel_for(ng, [&](std::size_t g) {
        const double gamma = out.gammas[g];
        std::vector<double> a(nk), b(nk);
        for (std::size_t k = 0; k < nk; ++k) {
            const Term& term = model.term(k);
            a[k] = alpha_factor(term.m, term.n, gamma, c);
            b[k] = beta_factor(term.m, term.n, gamma, c);
        }
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t i = 0; i < nt; ++i) {
            const double av = samples.value(i, a), bv = samples.value(i, b);
            lo = std::min(lo, av);
            hi = std::max(hi, bv);
            if (keep_values) {
                out.alpha_values[g * nt + i] = av;
                out.beta_values[g * nt + i] = bv;
            }
        }
        out.min_alpha[g] = lo;
        out.max_beta[g] = hi;
        out.phi_values[g] = phi(model, gamma);
    });
    return out;
}

double refine_phi_root(const Model& model, double lo, double hi, double width) {
    double flo = phi(model, lo);
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = phi(model, mid);
        if (fm == 0.0) return mid;
        if (sign_of(fm) == sign_of(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

PhiBracket refine_bracket(const Model& model, double lo, double hi, double width) {
    const bool rising = phi(model, lo) < 0.0;
    double flo = phi(model, lo);
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        const double fm = phi(model, mid);
        if (fm == 0.0) {
            // Exact root: keep a symmetric bracket of the requested width around it.
            return {mid - 0.25 * width, mid + 0.25 * width, rising};
        }
        if (sign_of(fm) == sign_of(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return {lo, hi, rising};
}

}  // namespace

BracketScan find_phi_brackets(const Model& model, const GammaGrid& grid, double width) {
    const std::vector<double> gammas = grid.values();
    BracketScan out;
    std::vector<double> values(gammas.size());
    for (std::size_t i = 0; i < gammas.size(); ++i) values[i] = phi(model, gammas[i]);

    std::ptrdiff_t prev = -1;  // last grid index with nonzero phi
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        if (values[i] == 0.0) continue;
        if (prev >= 0) {
            const auto p = static_cast<std::size_t>(prev);
            const int sp = sign_of(values[p]), si = sign_of(values[i]);
            if (sp != si) {
                out.brackets.push_back(refine_bracket(model, gammas[p], gammas[i], width));
            } else if (i == p + 1) {
                const double mid = 0.5 * (gammas[p] + gammas[i]);
                const double fm = phi(model, mid);
                if (fm != 0.0 && sign_of(fm) != sp) {
                    out.brackets.push_back(refine_bracket(model, gammas[p], mid, width));
                    out.brackets.push_back(refine_bracket(model, mid, gammas[i], width));
                    std::ostringstream os;
                    os << "two sign changes of phi inside one grid step [" << gammas[p] << ", " << gammas[i]
                       << "]; consider a smaller step";
                    out.warnings.push_back(os.str());
                }
            }
        }
        prev = static_cast<std::ptrdiff_t>(i);
    }
    return out;
}

int phi_limit_sign_minus(const Model& model, const TermClassification& cls) {
    if (cls.has(1)) return +1;
    double limit = -model.decay_mean();
    for (std::size_t k : cls.set(2)) limit += model.weight_mean(k);
    return sign_of(limit);
}

int phi_limit_sign_plus(const Model& model, const TermClassification& cls) {
    if (cls.has(5)) return +1;
    double limit = -model.decay_mean();
    for (std::size_t k : cls.set(4)) limit += model.weight_mean(k);
    return sign_of(limit);
}

AlternationChain alternation_chain(const Model& model, const EnvelopeGrid& envelope, double margin_floor) {
    const TermClassification cls = classify(model);
    AlternationChain chain;
    chain.sign_minus = phi_limit_sign_minus(model, cls);
    chain.sign_plus = phi_limit_sign_plus(model, cls);

    for (std::size_t g = 0; g < envelope.gammas.size(); ++g) {
        int s = 0;
        if (envelope.min_alpha[g] >= margin_floor)
            s = +1;
        else if (envelope.max_beta[g] <= -margin_floor)
            s = -1;
        if (s == 0) continue;
        const double gamma = envelope.gammas[g];
        if (!chain.runs.empty() && chain.runs.back().sign == s)
            chain.runs.back().last = gamma;
        else
            chain.runs.push_back({s, gamma, gamma});
    }

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<ChainRun> seq;
    if (chain.sign_minus != 0) seq.push_back({chain.sign_minus, -inf, -inf});
    for (const ChainRun& r : chain.runs) {
        if (!seq.empty() && seq.back().sign == r.sign)
            seq.back().last = r.last;
        else
            seq.push_back(r);
    }
    if (chain.sign_plus != 0) {
        if (!seq.empty() && seq.back().sign == chain.sign_plus)
            seq.back().last = inf;
        else
            seq.push_back({chain.sign_plus, inf, inf});
    }
    for (std::size_t i = 1; i < seq.size(); ++i) chain.intervals.push_back({seq[i - 1].last, seq[i].first});
    return chain;
}

int count_predicted_solutions(const Model& model, const EnvelopeGrid& envelope, double margin_floor) {
    return alternation_chain(model, envelope, margin_floor).alternations();
}

}  // namespace hema
