#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "hema/analysis.hpp"
#include "hema/numeric.hpp"
#include "hema/reference_models.hpp"
#include "oracles.hpp"

using namespace hema;

namespace {

std::size_t nearest(const std::vector<double>& xs, double x) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (std::abs(xs[i] - x) < std::abs(xs[best] - x)) best = i;
    return best;
}

EnvelopeGrid single_gammas(const Model& model, std::initializer_list<double> gammas, int t_points) {
    EnvelopeGrid out;
    for (double g : gammas) {
        auto e = scan_envelopes(model, {g, g + 1.0, 1.0}, t_points, false);
        out.gammas.push_back(g);
        out.min_alpha.push_back(e.min_alpha.at(0));
        out.max_beta.push_back(e.max_beta.at(0));
    }
    return out;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("phi examples") {
    const Model single = fixture::single_term(1.0, 4.0, 1.0, 2.0, 1.0);
    CHECK(phi(single, 0.0) == doctest::Approx(1.0).epsilon(1e-15));

    const Model superlinear = fixture::single_term(1.0, 3.0, 2.0, 3.0, 1.5);
    CHECK(std::abs(phi(superlinear, -50.0) + 1.5) <= 1e-10);

    const Model six = six_orbit_model();
    CHECK(std::abs(phi(six, -0.3) - oracle::phi(six, -0.3)) <= 1e-10);
}

TEST_CASE("phi components") {
    const Model six = six_orbit_model();
    const auto cls = classify(six);
    CHECK(phi_component(six, cls, 2, 0.7) == 0.0);
    CHECK(phi_component(six, cls, 4, 0.7) == 0.0);
    CHECK(phi_component(six, cls, 3, 0.0) == doctest::Approx(1.1).epsilon(1e-13));

    const Model m4 = fixture::single_term(1.0, 2.0, 2.0, 1.0, 1.0);
    CHECK(std::abs(phi_component(m4, classify(m4), 4, 60.0) - 2.0) <= 1e-10);

    for (double g : {-7.0, -0.3, 0.0, 0.2, 5.0, 34.0}) {
        double sum = -six.decay_mean();
        for (int i = 1; i <= 5; ++i) sum += phi_component(six, cls, i, g);
        CHECK(std::abs(sum - phi(six, g)) <= 1e-12 * oracle::phi_scale(six, g, 100));
    }
}

TEST_CASE("phi limits follow the exponent classes") {
    const Model six = six_orbit_model();
    const auto cls = classify(six);
    CHECK(phi_limit_sign_minus(six, cls) == 1);
    CHECK(phi_limit_sign_plus(six, cls) == 1);
    CHECK(phi(six, -60.0) > 0.0);
    CHECK(phi(six, 400.0) > 0.0);

    const Model sub = fixture::single_term(1.0, 4.0, 1.0, 2.0, 1.0);
    CHECK(phi_limit_sign_minus(sub, classify(sub)) == 1);
    CHECK(phi_limit_sign_plus(sub, classify(sub)) == -1);
    CHECK(phi(sub, -60.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(phi(sub, 60.0) == doctest::Approx(-1.0).epsilon(1e-12));

    const Model decay = pure_decay_model(1.0, 2.0);
    CHECK(phi_limit_sign_minus(decay, classify(decay)) == -1);
    CHECK(phi_limit_sign_plus(decay, classify(decay)) == -1);
}

TEST_CASE("factor shapes") {
    auto sign_changes_of_slope = [](auto f) {
        int changes = 0, last = 0;
        for (double g = -30.0; g < 30.0; g += 0.01) {
            const int s = sign_of(f(g + 0.01) - f(g));
            if (s != 0 && last != 0 && s != last) ++changes;
            if (s != 0) last = s;
        }
        return changes;
    };
    auto monotone = [](auto f, int dir) {
        for (double g = -30.0; g < 30.0; g += 0.01)
            if (dir * (f(g + 0.01) - f(g)) < 0.0) return false;
        return true;
    };
    CHECK(monotone([](double g) { return phi_factor(0.5, 2.0, g); }, -1));
    CHECK(monotone([](double g) { return phi_factor(1.0, 2.0, g); }, -1));
    CHECK(monotone([](double g) { return phi_factor(3.0, 2.0, g); }, +1));
    CHECK(monotone([](double g) { return phi_factor(4.0, 2.0, g); }, +1));
    CHECK(sign_changes_of_slope([](double g) { return phi_factor(2.0, 2.0, g); }) == 1);
    CHECK(sign_changes_of_slope([](double g) { return phi_factor(1.5, 3.0, g); }) == 1);
}

TEST_CASE("no overflow far from the origin") {
    const Model six = six_orbit_model();
    for (double g = -700.0; g <= 700.0; g += 7.0) {
        CHECK(std::isfinite(phi(six, g)));
        CHECK(std::isfinite(alpha(six, g, 0.001)));
        CHECK(std::isfinite(beta(six, g, 0.001)));
    }
    CHECK(phi_factor(2.0, 1.0, 700.0) == doctest::Approx(1.0));
    CHECK(phi_factor(2.0, 1.0, -700.0) == doctest::Approx(std::exp(-700.0)));
    CHECK(phi_factor(0.5, 1.0, 700.0) == 0.0);
}

TEST_CASE("envelopes") {
    const Model decay = pure_decay_model(0.5, 1.3);
    for (double g : {-10.0, 0.0, 10.0}) {
        CHECK(alpha(decay, g, 0.1) == -1.3);
        CHECK(beta(decay, g, 0.1) == -1.3);
    }
    const Model six = six_orbit_model();
    for (double g : {-5.0, -0.3, 0.2, 5.0, 34.0})
        for (double t : {0.0, 0.0011, 0.0037}) {
            const double c = six.decay_integral();
            CHECK(alpha(six, g, t) == doctest::Approx(oracle::alpha(six, g, t, c)).epsilon(1e-12));
            CHECK(beta(six, g, t) == doctest::Approx(oracle::beta(six, g, t, c)).epsilon(1e-12));
            CHECK(alpha(six, g, t) < beta(six, g, t));
        }
}

TEST_CASE("envelope scan of the six-orbit model") {
    const Model six = six_orbit_model();
    const auto grid = scan_envelopes(six, {-6.0, 35.0, 0.05}, 1000);
    REQUIRE(grid.has_values());
    CHECK(grid.gammas.size() == 821);
    CHECK(grid.times.size() == 1000);
    CHECK(grid.alpha_values.size() == 821 * 1000);
    CHECK(grid.min_alpha[nearest(grid.gammas, -0.3)] > 0.09);
    CHECK(grid.min_alpha[nearest(grid.gammas, 5.0)] > 0.1);
    CHECK(grid.max_beta[nearest(grid.gammas, -5.0)] < -0.08);
    CHECK(grid.max_beta[nearest(grid.gammas, 0.2)] < -0.01);
    CHECK(grid.max_beta[nearest(grid.gammas, 34.0)] < -0.01);

    const std::size_t i = nearest(grid.gammas, -0.3);
    CHECK(std::abs(grid.min_alpha[i] - oracle::min_alpha(six, grid.gammas[i])) <= 1e-12);
    for (std::size_t t = 0; t < grid.times.size(); t += 97) {
        CHECK(grid.min_alpha[i] <= grid.alpha_at(i, t));
        CHECK(grid.phi_values[i] == doctest::Approx(phi(six, grid.gammas[i])));
    }
}

TEST_CASE("envelope extrema are converged in the time grid") {
    const Model six = six_orbit_model();
    const auto coarse = single_gammas(six, {-5.0, -0.3, 0.2, 5.0, 34.0}, 1000);
    const auto fine = single_gammas(six, {-5.0, -0.3, 0.2, 5.0, 34.0}, 10000);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(std::abs(coarse.min_alpha[i] - fine.min_alpha[i]) <= 1e-6);
        CHECK(std::abs(coarse.max_beta[i] - fine.max_beta[i]) <= 1e-6);
    }
}

TEST_CASE("pure decay envelope") {
    const Model decay({}, PeriodicFn::trig(1.0, 1.0, {{1, 0.2, 0.0}}));
    const auto grid = scan_envelopes(decay, {-5.0, 5.0, 0.5}, 200, false);
    CHECK_FALSE(grid.has_values());
    for (double v : grid.min_alpha) CHECK(v == doctest::Approx(-1.2).epsilon(1e-12));
    for (double v : grid.max_beta) CHECK(v < 0.0);
}

TEST_CASE("gamma grid") {
    CHECK(GammaGrid{0.0, 1.0, 0.25}.values() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(GammaGrid{-50.0, 50.0, 0.01}.values().size() == 10001);
    CHECK_THROWS_AS(GammaGrid({1.0, 1.0, 0.1}).values(), std::invalid_argument);
    CHECK_THROWS_AS(GammaGrid({1.0, 0.0, 0.1}).values(), std::invalid_argument);
    CHECK_THROWS_AS(GammaGrid({0.0, 1.0, 0.0}).values(), std::invalid_argument);
    CHECK_THROWS_AS(scan_envelopes(six_orbit_model(), {2.0, 1.0, 0.1}, 10), std::invalid_argument);
}

TEST_CASE("phi brackets") {
    const Model single = fixture::single_term(1.0, 4.0, 1.0, 2.0, 1.0);
    const auto scan = find_phi_brackets(single, {-10.0, 10.0, 0.01});
    REQUIRE(scan.brackets.size() == 1);
    CHECK(scan.brackets[0].lo < std::log(3.0) / 2.0);
    CHECK(std::log(3.0) / 2.0 < scan.brackets[0].hi);
    CHECK_FALSE(scan.brackets[0].rising);
    CHECK(refine_phi_root(single, -10.0, 10.0) == doctest::Approx(std::log(3.0) / 2.0).epsilon(1e-11));

    const auto six = find_phi_brackets(six_orbit_model(), {-40.0, 40.0, 0.01});
    CHECK(six.brackets.size() >= 5);
    for (std::size_t i = 1; i < six.brackets.size(); ++i) CHECK(six.brackets[i].rising != six.brackets[i - 1].rising);

    const Model tiny = fixture::single_term(1.0, 0.01, 2.0, 3.0, 1.0);
    double phi_max = -INFINITY;
    for (double g = -50.0; g <= 50.0; g += 0.001) phi_max = std::max(phi_max, oracle::phi(tiny, g, 2));
    REQUIRE(phi_max < 0.0);
    CHECK(find_phi_brackets(tiny, {-50.0, 50.0, 0.01}).brackets.empty());
}

TEST_CASE("predicted solution counts") {
    const GammaGrid grid{-50.0, 50.0, 0.01};
    const Model six = six_orbit_model();
    const auto env = scan_envelopes(six, grid, 1000, false);
    const auto chain = alternation_chain(six, env);
    CHECK(count_predicted_solutions(six, env) == 6);
    CHECK(chain.alternations() == 6);
    CHECK(chain.sign_minus == 1);
    CHECK(chain.sign_plus == 1);
    for (std::size_t i = 1; i < chain.runs.size(); ++i) CHECK(chain.runs[i].sign != chain.runs[i - 1].sign);
    REQUIRE(chain.intervals.size() == 6);
    CHECK(chain.intervals.front().lo < -32.36);
    CHECK(chain.intervals.front().hi > -32.35);
    CHECK(std::isinf(chain.intervals.back().hi));
    for (std::size_t i = 1; i < 6; ++i) CHECK(chain.intervals[i].lo >= chain.intervals[i - 1].hi);

    const Model decay = pure_decay_model();
    CHECK(count_predicted_solutions(decay, scan_envelopes(decay, grid, 100, false)) == 0);

    const Model sub = fixture::single_term(1.0, 4.0, 1.0, 2.0, 1.0);
    int changes = 0;
    for (double g = -50.0; g < 50.0; g += 0.001) changes += sign_of(oracle::phi(sub, g, 2)) != sign_of(oracle::phi(sub, g + 0.001, 2));
    REQUIRE(changes == 1);
    CHECK(count_predicted_solutions(sub, scan_envelopes(sub, grid, 100, false)) == 1);
}

TEST_CASE("averaging identity on random models") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ug(-5.0, 5.0), u01(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const Model model = oracle::random_model(rng);
        for (int j = 0; j < 5; ++j) {
            const double g = ug(rng);
            CHECK(std::abs(phi(model, g) - oracle::phi(model, g)) <= 1e-9 * oracle::phi_scale(model, g));
            const double t = u01(rng) * model.period();
            const double c = oracle::decay_integral(model);
            CHECK(alpha(model, g, t) == doctest::Approx(oracle::alpha(model, g, t, c)).epsilon(1e-9));
            CHECK(beta(model, g, t) == doctest::Approx(oracle::beta(model, g, t, c)).epsilon(1e-9));
            CHECK(alpha(model, g, t) <= beta(model, g, t));
        }
    }
}

}
