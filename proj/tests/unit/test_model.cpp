#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "hema/model.hpp"
#include "hema/model_io.hpp"
#include "hema/numeric.hpp"
#include "hema/reference_models.hpp"
#include "oracles.hpp"

using namespace hema;

TEST_SUITE("model") {

TEST_CASE("trig evaluation is exactly periodic") {
    const auto b = PeriodicFn::trig(0.005, 1.1, {{1, 0.02, 0.0}});
    CHECK(b(0.0) == doctest::Approx(1.12).epsilon(1e-15));
    CHECK(b(0.005) == doctest::Approx(1.12).epsilon(1e-15));
    CHECK(b(-0.0025) == doctest::Approx(1.08).epsilon(1e-14));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ut(-3.7, 3.7), uc(-1.0, 1.0);
    std::vector<Harmonic> h;
    for (int j = 1; j <= 8; ++j) h.push_back({j, uc(rng), uc(rng)});
    const auto f = PeriodicFn::trig(0.37, 3.0, h);
    for (int i = 0; i < 1000; ++i) {
        const double t = ut(rng);
        CHECK(std::abs(f(t + 0.37) - f(t)) <= 1e-12);
    }
}

TEST_CASE("sampled form interpolates a cosine") {
    const double T = 0.005;
    std::vector<double> s(64);
    for (int i = 0; i < 64; ++i) s[i] = 1.1 + 0.02 * std::cos(kTwoPi * i / 64);
    const auto f = PeriodicFn::sampled(T, s);
    CHECK(std::abs(f(0.00125) - 1.1) <= 1e-9);
    CHECK(std::abs(f(0.00125 + 3 * T) - 1.1) <= 1e-9);
    CHECK(std::abs(f(0.001) - (1.1 + 0.02 * std::cos(kTwoPi * 0.2))) <= 1e-6);
    CHECK(std::abs(f.mean() - 1.1) <= 1e-10);
    CHECK_THROWS_AS(PeriodicFn::sampled(T, {1.0, 2.0}), ModelError);
}

TEST_CASE("mean") {
    CHECK(PeriodicFn::constant(2.0, 3.5).mean() == 3.5);
    CHECK(PeriodicFn::trig(0.005, 1.1, {{1, 0.02, 0.0}}).mean() == 1.1);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Harmonic> h;
        for (int j = 1; j <= 8; ++j) h.push_back({j, u(rng), u(rng)});
        const double T = 0.5 + u(rng) * 0.4;
        const auto f = PeriodicFn::trig(T, 5.0 + u(rng), h);
        const double quad = simpson([&](double t) { return f(t); }, 0.0, T, 1024) / T;
        CHECK(std::abs(quad - f.trig_mean()) <= 1e-10 * std::abs(f.trig_mean()));
    }
}

TEST_CASE("positivity validation") {
    CHECK_NOTHROW(require_positive(PeriodicFn::trig(1.0, 1.0, {{1, 0.9, 0.0}}), "r"));
    CHECK_THROWS_AS(require_positive(PeriodicFn::trig(1.0, 1.0, {{1, 1.1, 0.0}}), "r"), ModelError);
    CHECK_NOTHROW(require_nonnegative(PeriodicFn::constant(1.0, 0.0), "tau"));
    CHECK_THROWS_AS(require_nonnegative(PeriodicFn::constant(1.0, -1e-3), "tau"), ModelError);
}

TEST_CASE("model validation names the offending field") {
    const auto c = [](double v) { return PeriodicFn::constant(1.0, v); };
    auto field_of = [](auto&& make) -> std::string {
        try {
            make();
        } catch (const ModelError& e) {
            return e.field();
        }
        return "";
    };
    CHECK(field_of([&] { Model({{0.0, 1.0, 1.0, c(1), c(0), c(0)}}, c(1)); }) == "terms[0].lambda");
    CHECK(field_of([&] { Model({{1.0, -1.0, 1.0, c(1), c(0), c(0)}}, c(1)); }) == "terms[0].m");
    CHECK(field_of([&] { Model({{1.0, 1.0, 0.0, c(1), c(0), c(0)}}, c(1)); }) == "terms[0].n");
    CHECK(field_of([&] { Model({{1.0, 1.0, 1.0, c(-1), c(0), c(0)}}, c(1)); }) == "terms[0].r");
    CHECK(field_of([&] { Model({{1.0, 1.0, 1.0, c(1), c(-0.1), c(0)}}, c(1)); }) == "terms[0].tau");
    CHECK(field_of([&] { Model({{1.0, 1.0, 1.0, c(1), c(0), c(0)}}, c(0)); }) == "b");
    CHECK(field_of([&] {
              Model({{1.0, 1.0, 1.0, PeriodicFn::constant(2.0, 1.0), c(0), c(0)}}, c(1));
          }).find("terms[0].r") == 0);
}

TEST_CASE("derived constants") {
    const Model m = six_orbit_model();
    CHECK(m.period() == 0.005);
    CHECK(m.decay_mean() == doctest::Approx(1.1));
    CHECK(m.decay_integral() == doctest::Approx(0.0055).epsilon(1e-14));
    CHECK(m.decay_min() == doctest::Approx(1.08).epsilon(1e-9));
    CHECK(m.decay_max() == doctest::Approx(1.12).epsilon(1e-9));
    CHECK(m.weight_mean(1) == doctest::Approx(1.3));
    CHECK(m.max_delay() == doctest::Approx(0.004));
    const Model empty({}, PeriodicFn::constant(1.0, 2.0));
    CHECK(empty.size() == 0);
    CHECK(empty.decay_integral() == 2.0);
}

TEST_CASE("classification") {
    const auto cls = classify(six_orbit_model());
    CHECK(cls.describe() == "M1={1} M2={} M3={2,3} M4={} M5={4} case=superlinear");

    const auto m2 = classify(fixture::single_term(1.0, 1.0, 1.0, 1.0, 1.0));
    CHECK(m2.has(2));
    CHECK(m2.growth == GrowthCase::sublinear);

    const auto m4 = classify(fixture::single_term(1.0, 1.0, 2.0, 1.0, 1.0));
    CHECK(m4.has(4));
    CHECK(m4.growth == GrowthCase::asymptotically_linear);

    CHECK(exponent_class(1.0 + 1e-15, 3.0) == 3);
    CHECK(exponent_class(4.0 - 1e-12, 3.0) == 3);
    CHECK(exponent_class(4.0, 3.0) == 4);
    CHECK(exponent_class(0.999999, 3.0) == 1);

    const auto none = classify(Model({}, PeriodicFn::constant(1.0, 1.0)));
    CHECK(none.growth == GrowthCase::sublinear);
    CHECK(none.describe() == "M1={} M2={} M3={} M4={} M5={} case=sublinear");
}

TEST_CASE("classification partitions the terms") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> pick(0, 4);
    const double ms[] = {0.5, 1.0, 1.5, 3.0, 4.0};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Term> terms;
        const int k = 1 + trial % 6;
        for (int i = 0; i < k; ++i) {
            Term t;
            t.m = ms[pick(rng)];
            t.n = 2.0;
            terms.push_back(t);
        }
        const auto cls = classify(Model(terms, PeriodicFn::constant(1.0, 1.0)));
        std::vector<int> seen(static_cast<std::size_t>(k), 0);
        for (int i = 1; i <= 5; ++i)
            for (auto idx : cls.set(i)) {
                ++seen[idx];
                CHECK(exponent_class(terms[idx].m, terms[idx].n) == i);
            }
        for (int s : seen) CHECK(s == 1);
        const bool super = cls.has(5), asym = !cls.has(5) && cls.has(4);
        CHECK((cls.growth == GrowthCase::superlinear) == super);
        CHECK((cls.growth == GrowthCase::asymptotically_linear) == asym);
    }
}

TEST_CASE("model file round trip") {
    const Model a = six_orbit_model();
    const std::string text = dump_model(a);
    const Model b = parse_model(text);
    CHECK(dump_model(b) == text);
    for (double t : {0.0, 0.0007, 0.0031})
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(a.term(k).r(t) == b.term(k).r(t));
            CHECK(a.term(k).tau(t) == b.term(k).tau(t));
            CHECK(a.term(k).mu(t) == b.term(k).mu(t));
        }
}

TEST_CASE("bundled six-orbit model file matches the builtin model") {
    const Model file = load_model(fixture::models_dir() / "six_orbit.model");
    CHECK(dump_model(file) == dump_model(six_orbit_model()));
}

TEST_CASE("model file parsing") {
    const Model m = parse_model(R"(
period: 2
b: 1.5
terms:
  - {lambda: 2, m: 1, n: 2, r: {samples: [1, 2, 3, 2]}}
  - {lambda: 1, m: 3, n: 1, r: {mean: 1, harmonics: [[2, 0.5, 0.1]]}, tau: 0.2, mu: {mean: 0.3, harmonics: [[1, 0.1, 0]]}}
)");
    CHECK(m.size() == 2);
    CHECK(m.term(0).tau(0.3) == 0.0);
    CHECK(m.term(0).r(0.5) == doctest::Approx(2.0));
    CHECK(m.term(1).r(0.0) == doctest::Approx(1.5));
    CHECK(m.term(1).tau(1.0) == 0.2);

    const Model j = parse_model(R"({"period": 1, "b": 1, "terms": [{"lambda": 2, "m": 1, "n": 2, "r": 1}]})");
    CHECK(j.term(0).lambda == 2.0);

    auto field_of = [](const char* text) -> std::string {
        try {
            parse_model(text);
        } catch (const ModelError& e) {
            return e.field();
        }
        return "<none>";
    };
    CHECK(field_of("b: 1\nterms: []") == "period");
    CHECK(field_of("period: 1\nterms: []") == "b");
    CHECK(field_of("period: 1\nb: 1") == "terms");
    CHECK(field_of("period: 1\nb: 1\nterms: [{lambda: 0, m: 1, n: 1, r: 1}]") == "terms[0].lambda");
    CHECK(field_of("period: 1\nb: 1\nterms: [{m: 1, n: 1, r: 1}]") == "terms[0].lambda");
    CHECK(field_of("period: 1\nb: 1\nterms: [{lambda: 1, m: x, n: 1, r: 1}]") == "terms[0].m");
    CHECK(field_of("period: 1\nb: {mean: 1, harmonics: [[0, 1, 1]]}\nterms: []") == "b.harmonics[0]");
    CHECK(field_of("period: -1\nb: 1\nterms: []") == "period");
    CHECK(field_of("[1, 2") == "");
    CHECK(parse_model("period: 1\nb: 1\nterms: []").size() == 0);
}

TEST_CASE("missing model file") {
    CHECK_THROWS_AS(load_model("/nonexistent/dir/none.model"), ModelError);
}

}
