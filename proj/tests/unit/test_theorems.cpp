#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "hema/reference_models.hpp"
#include "hema/theorems.hpp"
#include "oracles.hpp"

using namespace hema;

namespace {

const CaseReport* find_case(const TheoremReport& r, const std::string& label) {
    for (const auto& c : r.cases)
        if (c.label == label) return &c;
    return nullptr;
}

// max_t of sum_k lambda_k r_k(t) e^((m_k-1)g) e^(m_k C) / (1 + e^(n_k g)) - b(t), directly.
double case3_sum_margin(const Model& model, double g) {
    const double c = oracle::decay_integral(model);
    double worst = -INFINITY;
    for (int i = 0; i < 1000; ++i) {
        const double t = model.period() * i / 1000;
        double s = -model.decay()(t);
        for (const auto& term : model.terms())
            s += term.lambda * term.r(t) * std::exp((term.m - 1.0) * g) * std::exp(term.m * c) / (1.0 + std::exp(term.n * g));
        worst = std::max(worst, s);
    }
    return worst;
}

}  // namespace

TEST_SUITE("theorems") {

TEST_CASE("existence for the six-orbit model") {
    const Model six = six_orbit_model();
    const auto report = check_existence(six);
    CHECK(report.theorem == "existence-superlinear");
    CHECK_FALSE(report.multiplicity);
    CHECK(report.growth == GrowthCase::superlinear);
    CHECK(report.verdict == Verdict::satisfied);
    const auto* c3 = find_case(report, "3");
    REQUIRE(c3 != nullptr);
    CHECK(c3->pattern_matches);
    CHECK(c3->verdict == Verdict::satisfied);
    for (const auto& h : c3->hypotheses) {
        CHECK(h.status == Verdict::satisfied);
        if (h.witness) CHECK(case3_sum_margin(six, *h.witness) < 0.0);
    }
    CHECK(case3_sum_margin(six, -5.0) < 0.0);
}

TEST_CASE("sublinear existence with an M2 term") {
    const Model model = fixture::single_term(1.0, 4.0, 1.0, 2.0, 1.0);
    const auto report = check_existence(model);
    CHECK(report.theorem == "existence-sublinear");
    CHECK(report.verdict == Verdict::satisfied);
    REQUIRE(report.best_case() != nullptr);
    CHECK(report.best_case()->label == "2");
    REQUIRE(report.best_case()->hypotheses.size() == 1);
    CHECK(report.best_case()->hypotheses[0].margin == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(report.predicted_solution_count == 1);
}

TEST_CASE("asymptotically linear case 1 fails when e^(-2C) < 1") {
    const Model model = fixture::single_term(1.0, 1.0, 2.0, 1.0, 1.0);
    const auto report = check_existence(model);
    CHECK(report.growth == GrowthCase::asymptotically_linear);
    const auto* c1 = find_case(report, "1");
    REQUIRE(c1 != nullptr);
    CHECK(c1->pattern_matches);
    CHECK(c1->verdict == Verdict::violated);
    REQUIRE(c1->hypotheses.size() == 1);
    CHECK(c1->hypotheses[0].margin == doctest::Approx(std::exp(-2.0) - 1.0).epsilon(1e-12));
    CHECK(find_case(report, "2'") != nullptr);
    CHECK(report.verdict == Verdict::violated);
}

TEST_CASE("multiplicity for the six-orbit model") {
    const Model six = six_orbit_model();
    const std::vector<double> gammas{-5.0, -0.3, 0.2};
    const auto report = check_multiplicity(six, gammas);
    CHECK(report.theorem == "multiplicity-superlinear");
    CHECK(report.multiplicity);
    CHECK(report.verdict == Verdict::satisfied);
    CHECK(report.predicted_solution_count == 4);
    REQUIRE(report.best_case() != nullptr);
    CHECK(report.best_case()->label == "5");
    const auto* c5 = find_case(report, "5");
    REQUIRE(c5->hypotheses.size() == 3);
    CHECK(c5->gammas == gammas);
    CHECK(c5->hypotheses[0].margin == doctest::Approx(oracle::max_beta(six, -5.0)).epsilon(1e-10));
    CHECK(c5->hypotheses[1].margin == doctest::Approx(oracle::min_alpha(six, -0.3)).epsilon(1e-10));
    CHECK(c5->hypotheses[2].margin == doctest::Approx(oracle::max_beta(six, 0.2)).epsilon(1e-10));
    for (const auto& c : report.cases)
        if (c.label != "5") CHECK_FALSE(c.pattern_matches);

    const std::vector<double> more{-5.0, -0.3, 0.2, 5.0, 34.0};
    CHECK(check_multiplicity(six, more).verdict == Verdict::satisfied);

    const std::vector<double> too_few{-5.0, -0.3};
    const auto short_report = check_multiplicity(six, too_few);
    CHECK(short_report.verdict == Verdict::violated);
    CHECK(short_report.predicted_solution_count == 0);
}

TEST_CASE("multiplicity rejects bad gamma lists") {
    const Model six = six_orbit_model();
    CHECK_THROWS_AS(check_multiplicity(six, std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(check_multiplicity(six, std::vector<double>{0.2, -0.3, -5.0}), std::invalid_argument);
    CHECK_THROWS_AS(check_multiplicity(six, std::vector<double>{-5.0, -5.0}), std::invalid_argument);
}

TEST_CASE("pure decay violates every theorem") {
    const Model decay = pure_decay_model();
    CHECK(check_existence(decay).verdict == Verdict::violated);
    CHECK(check_multiplicity(decay, std::vector<double>{-1.0, 0.0, 1.0}).verdict == Verdict::violated);
    for (const auto& c : check_existence(decay).cases) CHECK_FALSE(c.pattern_matches);
}

TEST_CASE("margin floor") {
    const Model model = fixture::single_term(1.0, 4.0, 1.0, 2.0, 1.0);
    CheckOptions opts;
    opts.margin_floor = 2.9;
    CHECK(check_existence(model, opts).verdict == Verdict::satisfied);
    opts.margin_floor = 3.1;
    CHECK(check_existence(model, opts).verdict == Verdict::violated);
}

TEST_CASE("report text") {
    const auto report = check_multiplicity(six_orbit_model(), std::vector<double>{-5.0, -0.3, 0.2});
    const std::string text = format_report(report);
    CHECK(text.find("theorem: multiplicity-superlinear\n") == 0);
    CHECK(text.find("verdict: satisfied\n") != std::string::npos);
    CHECK(text.find("case: 5\n") != std::string::npos);
    CHECK(text.find("predicted_solution_count: 4\n") != std::string::npos);
    CHECK(text.find("gammas=-5,-0.3,0.2") != std::string::npos);
    CHECK(text.find("| gamma: -0.3 | verdict: satisfied") != std::string::npos);
    CHECK(text == format_report(check_multiplicity(six_orbit_model(), std::vector<double>{-5.0, -0.3, 0.2})));
}

}
