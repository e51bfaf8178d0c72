#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hema/analysis.hpp"
#include "hema/model.hpp"

namespace hema {

struct CheckOptions {
    GammaGrid gamma;           // witness search range for "some constant gamma" hypotheses
    int t_points = 1000;       // grid standing in for "for all t"
    double margin_floor = 1e-9;
};

enum class Verdict { satisfied, violated, no_witness };

std::string to_string(Verdict v);

struct Hypothesis {
    std::string description;
    int required_sign = +1;  // margin must be > 0 (+1) or < 0 (-1)
    double margin = 0.0;     // worst case over the t grid
    Verdict status = Verdict::violated;
    std::optional<double> witness;  // gamma used, when the hypothesis involves one
};

struct CaseReport {
    std::string label;    // "1", "2", "3", "2'", ...
    std::string pattern;  // structural requirement on the exponents
    bool pattern_matches = false;
    std::vector<Hypothesis> hypotheses;
    std::vector<double> gammas;  // gammas the hypotheses were evaluated at
    Verdict verdict = Verdict::violated;
    int predicted = 0;  // solutions guaranteed when satisfied
};

/// Outcome of checking one existence or multiplicity theorem. Sub-cases whose
/// exponent pattern matches are all evaluated; the report is satisfied when
/// at least one of them is.
struct TheoremReport {
    std::string theorem;  // "existence-<growth>" or "multiplicity-<growth>"
    bool multiplicity = false;
    GrowthCase growth = GrowthCase::sublinear;
    std::vector<CaseReport> cases;  // every sub-case, matching or not
    Verdict verdict = Verdict::violated;
    int predicted_solution_count = 0;
    double margin_floor = 1e-9;

    /// The satisfied case with the largest predicted count, if any.
    const CaseReport* best_case() const;
};

/// Existence conditions for the growth case of the model; the asymptotically
/// linear case also carries the alternative sub-case 2'.
TheoremReport check_existence(const Model& model, const CheckOptions& options = {});

/// Multiplicity conditions for the growth case at the supplied gammas. Cases that
/// need k gammas use the increasing k-subsequence of `gammas` that satisfies
/// them (or, failing that, the one with the largest worst-case slack).
/// Throws std::invalid_argument when `gammas` is empty or not strictly increasing.
TheoremReport check_multiplicity(const Model& model, std::span<const double> gammas, const CheckOptions& options = {});

/// Key-value text form, one line per hypothesis.
std::string format_report(const TheoremReport& report);

}  // namespace hema
