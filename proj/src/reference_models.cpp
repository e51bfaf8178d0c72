#include "hema/reference_models.hpp"

namespace hema {

namespace {

constexpr double kPeriod = 0.005;

PeriodicFn cosine(double mean, double amplitude) { return PeriodicFn::trig(kPeriod, mean, {{1, amplitude, 0.0}}); }

std::vector<Term> six_orbit_terms() {
    struct Row {
        double weight, m, n;
        PeriodicFn tau, mu;
    };
    const Row rows[] = {
        {0.04, 0.95, 2.0, cosine(0.002, 0.001), PeriodicFn::constant(kPeriod, 0.001)},
        {1.3, 4.73, 3.74, PeriodicFn::constant(kPeriod, 0.0025), PeriodicFn::constant(kPeriod, 0.004)},
        {0.9, 1.0001, 10.2, PeriodicFn::constant(kPeriod, 0.004), cosine(0.003, 0.0005)},
        {0.06, 1.12, 0.11, PeriodicFn::constant(kPeriod, 0.0015), PeriodicFn::constant(kPeriod, 0.0005)},
    };
    std::vector<Term> terms;
    for (const Row& row : rows) terms.push_back({1.0, row.m, row.n, cosine(row.weight, 0.002), row.tau, row.mu});
    return terms;
}

}  // namespace

Model six_orbit_model() { return Model(six_orbit_terms(), cosine(1.1, 0.02)); }

Model six_orbit_model_with_delay(double delay) {
    auto terms = six_orbit_terms();
    for (Term& t : terms) {
        t.tau = PeriodicFn::constant(kPeriod, delay);
        t.mu = PeriodicFn::constant(kPeriod, delay);
    }
    return Model(std::move(terms), cosine(1.1, 0.02));
}

Model equilibrium_model(double period, double delay) {
    Term term{1.0, 1.0, 2.0, PeriodicFn::constant(period, 2.0), PeriodicFn::constant(period, delay),
              PeriodicFn::constant(period, delay)};
    return Model({term}, PeriodicFn::constant(period, 1.0));
}

Model pure_decay_model(double period, double decay) { return Model({}, PeriodicFn::constant(period, decay)); }

}  // namespace hema
