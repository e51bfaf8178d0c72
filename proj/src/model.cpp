#include "hema/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hema {

namespace {

void require_same_period(const PeriodicFn& f, double period, const std::string& field) {
    if (std::abs(f.period() - period) > 1e-12 * period)
        throw ModelError(field, "period differs from the model period");
}

}  // namespace

Model::Model(std::vector<Term> terms, PeriodicFn decay) : terms_(std::move(terms)), decay_(std::move(decay)) {
    const double period = decay_.period();
    require_positive(decay_, "b");
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const Term& term = terms_[k];
        const std::string base = "terms[" + std::to_string(k) + "]";
        if (!(term.lambda > 0.0) || !std::isfinite(term.lambda)) throw ModelError(base + ".lambda", "must be > 0");
        if (!(term.m > 0.0) || !std::isfinite(term.m)) throw ModelError(base + ".m", "must be > 0");
        if (!(term.n > 0.0) || !std::isfinite(term.n)) throw ModelError(base + ".n", "must be > 0");
        require_same_period(term.r, period, base + ".r");
        require_same_period(term.tau, period, base + ".tau");
        require_same_period(term.mu, period, base + ".mu");
        require_positive(term.r, base + ".r");
        require_nonnegative(term.tau, base + ".tau");
        require_nonnegative(term.mu, base + ".mu");
    }

    decay_mean_ = decay_.mean();
    decay_min_ = decay_.min_on_grid();
    decay_max_ = decay_.max_on_grid();
    weight_mean_.reserve(terms_.size());
    weight_max_.reserve(terms_.size());
    for (const Term& term : terms_) {
        weight_mean_.push_back(term.lambda * term.r.mean());
        weight_max_.push_back(term.lambda * term.r.max_on_grid());
        max_delay_ = std::max({max_delay_, term.tau.max_on_grid(), term.mu.max_on_grid()});
    }
}

std::string to_string(GrowthCase c) {
    switch (c) {
        case GrowthCase::superlinear: return "superlinear";
        case GrowthCase::sublinear: return "sublinear";
        case GrowthCase::asymptotically_linear: return "asymptotically_linear";
    }
    return "unknown";
}

int exponent_class(double m, double n) {
    const double pivot = n + 1.0;
    if (m < 1.0) return 1;
    if (m == 1.0) return 2;
    if (m < pivot) return 3;
    if (m == pivot) return 4;
    return 5;
}

TermClassification classify(const Model& model) {
    TermClassification out;
    for (std::size_t k = 0; k < model.size(); ++k) {
        const Term& t = model.term(k);
        out.sets[static_cast<std::size_t>(exponent_class(t.m, t.n) - 1)].push_back(k);
    }
    if (out.has(5))
        out.growth = GrowthCase::superlinear;
    else if (out.has(4))
        out.growth = GrowthCase::asymptotically_linear;
    else
        out.growth = GrowthCase::sublinear;
    return out;
}

std::string TermClassification::describe() const {
    std::ostringstream os;
    for (int i = 1; i <= 5; ++i) {
        os << 'M' << i << "={";
        const auto& s = set(i);
        for (std::size_t j = 0; j < s.size(); ++j) os << (j ? "," : "") << s[j] + 1;
        os << "} ";
    }
    os << "case=" << to_string(growth);
    return os.str();
}

}  // namespace hema
