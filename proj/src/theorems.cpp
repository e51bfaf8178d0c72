#include "hema/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hema/csv.hpp"
#include "hema/numeric.hpp"

namespace hema {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::satisfied: return "satisfied";
        case Verdict::violated: return "violated";
        case Verdict::no_witness: return "no witness found in range";
    }
    return "unknown";
}

const CaseReport* TheoremReport::best_case() const {
    const CaseReport* best = nullptr;
    for (const auto& c : cases)
        if (c.pattern_matches && c.verdict == Verdict::satisfied && (!best || c.predicted > best->predicted)) best = &c;
    return best;
}

namespace {

enum class Envelope { alpha, beta };

// A pointwise hypothesis at one gamma: which envelope and which gamma slot.
struct EnvelopeRole {
    Envelope kind;
    std::size_t slot;
};

class Checker {
 public:
    Checker(const Model& model, const CheckOptions& options)
        : model_(model), cls_(classify(model)), options_(options), samples_(model, options.t_points),
          c_(model.decay_integral()) {}

    const TermClassification& cls() const { return cls_; }
    bool all_gt1() const { return model_.size() > 0 && !cls_.has(1) && !cls_.has(2); }
    bool all_ge1() const { return model_.size() > 0 && !cls_.has(1); }

    Verdict judge(int required_sign, double margin) const {
        return required_sign * margin >= options_.margin_floor ? Verdict::satisfied : Verdict::violated;
    }

    Hypothesis pointwise(std::string description, const std::vector<double>& factors, int required_sign) const {
        const auto range = samples_.envelope(factors);
        Hypothesis h;
        h.description = std::move(description);
        h.required_sign = required_sign;
        h.margin = required_sign > 0 ? range.min : range.max;
        h.status = judge(required_sign, h.margin);
        return h;
    }

    // sum_{k in M_i} lambda_k r_k(t) * weight(k)  vs  b(t)
    template <typename W>
    Hypothesis subset_sum(int class_index, W weight, std::string description, int required_sign) const {
        std::vector<double> f(model_.size(), 0.0);
        for (std::size_t k : cls_.set(class_index)) f[k] = weight(model_.term(k));
        return pointwise(std::move(description), f, required_sign);
    }

    std::vector<double> envelope_factors(Envelope kind, double gamma) const {
        std::vector<double> f(model_.size());
        for (std::size_t k = 0; k < model_.size(); ++k) {
            const Term& t = model_.term(k);
            f[k] = kind == Envelope::alpha ? alpha_factor(t.m, t.n, gamma, c_) : beta_factor(t.m, t.n, gamma, c_);
        }
        return f;
    }

    Hypothesis envelope(Envelope kind, double gamma, std::size_t slot) const {
        std::ostringstream os;
        os << (kind == Envelope::alpha ? "alpha(gamma" : "beta(gamma") << slot + 1 << ",t) "
           << (kind == Envelope::alpha ? "> 0" : "< 0") << " for all t";
        Hypothesis h = pointwise(os.str(), envelope_factors(kind, gamma), kind == Envelope::alpha ? +1 : -1);
        h.witness = gamma;
        return h;
    }

    // "for all t and some constant gamma1": best witness over the search grid.
    template <typename FactorAt>
    Hypothesis witness_search(std::string description, FactorAt factor_at, int required_sign) const {
        Hypothesis best;
        best.description = std::move(description);
        best.required_sign = required_sign;
        double best_score = -std::numeric_limits<double>::infinity();
        for (double gamma : options_.gamma.values()) {
            std::vector<double> f(model_.size());
            for (std::size_t k = 0; k < model_.size(); ++k) f[k] = factor_at(model_.term(k), gamma);
            const auto range = samples_.envelope(f);
            const double margin = required_sign > 0 ? range.min : range.max;
            if (std::isfinite(margin) && required_sign * margin > best_score) {
                best_score = required_sign * margin;
                best.margin = margin;
                best.witness = gamma;
            }
        }
        best.status = judge(required_sign, best.margin) == Verdict::satisfied ? Verdict::satisfied : Verdict::no_witness;
        return best;
    }

    double c() const { return c_; }

 private:
    const Model& model_;
    TermClassification cls_;
    CheckOptions options_;
    TimeSamples samples_;
    double c_;
};

Verdict combine(const std::vector<Hypothesis>& hs) {
    Verdict v = Verdict::satisfied;
    for (const auto& h : hs) {
        if (h.status == Verdict::violated) return Verdict::violated;
        if (h.status == Verdict::no_witness) v = Verdict::no_witness;
    }
    return v;
}

CaseReport make_case(std::string label, std::string pattern, bool matches, int predicted) {
    CaseReport c;
    c.label = std::move(label);
    c.pattern = std::move(pattern);
    c.pattern_matches = matches;
    c.predicted = predicted;
    return c;
}

void finish(TheoremReport& report) {
    bool any_no_witness = false;
    report.verdict = Verdict::violated;
    report.predicted_solution_count = 0;
    for (auto& c : report.cases) {
        if (!c.pattern_matches) continue;
        c.verdict = combine(c.hypotheses);
        if (c.verdict == Verdict::satisfied) {
            report.verdict = Verdict::satisfied;
            report.predicted_solution_count = std::max(report.predicted_solution_count, c.predicted);
        } else if (c.verdict == Verdict::no_witness) {
            any_no_witness = true;
        }
    }
    if (report.verdict != Verdict::satisfied && any_no_witness) report.verdict = Verdict::no_witness;
}

const char* kAllGt1 = "m_k > 1 for all k";
const char* kGe1Eq1 = "m_k >= 1 for all k, m_i = 1 for some i";
const char* kSomeLt1 = "0 < m_i < 1 for some i";

}  // namespace

TheoremReport check_existence(const Model& model, const CheckOptions& options) {
    const Checker ck(model, options);
    const auto& cls = ck.cls();
    const double c = ck.c();
    TheoremReport report;
    report.growth = cls.growth;
    report.margin_floor = options.margin_floor;

    auto m2_sum = [&](double scale, int sign, const std::string& desc) {
        return ck.subset_sum(2, [scale](const Term&) { return scale; }, desc, sign);
    };
    auto m4_sum = [&](bool with_decay_exp, int sign, const std::string& desc) {
        return ck.subset_sum(
            4, [&](const Term& t) { return with_decay_exp ? std::exp(-c * t.m) : std::exp(c * t.n); }, desc, sign);
    };

    switch (cls.growth) {
        case GrowthCase::superlinear: {
            report.theorem = "existence-superlinear";
            report.cases.push_back(make_case("1", kAllGt1, ck.all_gt1(), 1));
            auto c2 = make_case("2", kGe1Eq1, ck.all_ge1() && cls.has(2), 1);
            c2.hypotheses.push_back(m2_sum(std::exp(c), -1, "sum_{M2} lambda_k r_k(t) e^C - b(t) < 0 for all t"));
            report.cases.push_back(std::move(c2));
            auto c3 = make_case("3", "m_i < 1 for some i", cls.has(1), 1);
            if (c3.pattern_matches) c3.hypotheses.push_back(ck.witness_search(
                "sum_k lambda_k r_k(t) e^((m_k-1)gamma1) e^(m_k C) / (1 + e^(n_k gamma1)) - b(t) < 0 for all t",
                [c](const Term& t, double g) { return std::exp((t.m - 1.0) * g + t.m * c - softplus(t.n * g)); }, -1));
            if (c3.pattern_matches && c3.hypotheses.back().witness) c3.gammas = {*c3.hypotheses.back().witness};
            report.cases.push_back(std::move(c3));
            break;
        }
        case GrowthCase::sublinear: {
            report.theorem = "existence-sublinear";
            report.cases.push_back(make_case("1", kSomeLt1, cls.has(1), 1));
            auto c2 = make_case("2", kGe1Eq1, ck.all_ge1() && cls.has(2), 1);
            c2.hypotheses.push_back(m2_sum(1.0, +1, "sum_{M2} lambda_k r_k(t) - b(t) > 0 for all t"));
            report.cases.push_back(std::move(c2));
            auto c3 = make_case("3", kAllGt1, ck.all_gt1(), 1);
            if (c3.pattern_matches) c3.hypotheses.push_back(ck.witness_search(
                "sum_k lambda_k r_k(t) e^((m_k-1)gamma1) / (1 + e^(n_k (gamma1 + C))) - b(t) > 0 for all t",
                [c](const Term& t, double g) { return std::exp((t.m - 1.0) * g - softplus(t.n * (g + c))); }, +1));
            if (c3.pattern_matches && c3.hypotheses.back().witness) c3.gammas = {*c3.hypotheses.back().witness};
            report.cases.push_back(std::move(c3));
            break;
        }
        case GrowthCase::asymptotically_linear: {
            report.theorem = "existence-asymptotically-linear";
            const std::string m4_low = "sum_{M4} lambda_k r_k(t) e^(-C m_k) - b(t) > 0 for all t";
            const std::string m4_high = "sum_{M4} lambda_k r_k(t) e^(C n_k) - b(t) < 0 for all t";
            auto c1 = make_case("1", kAllGt1, ck.all_gt1(), 1);
            c1.hypotheses.push_back(m4_sum(true, +1, m4_low));
            report.cases.push_back(std::move(c1));
            auto c2 = make_case("2", kGe1Eq1, ck.all_ge1() && cls.has(2), 1);
            c2.hypotheses.push_back(m4_sum(true, +1, m4_low));
            c2.hypotheses.push_back(m2_sum(std::exp(c), -1, "sum_{M2} lambda_k r_k(t) e^C - b(t) < 0 for all t"));
            report.cases.push_back(std::move(c2));
            auto c3 = make_case("3", kSomeLt1, cls.has(1), 1);
            c3.hypotheses.push_back(m4_sum(false, -1, m4_high));
            report.cases.push_back(std::move(c3));
            auto c2p = make_case("2'", kGe1Eq1, ck.all_ge1() && cls.has(2), 1);
            c2p.hypotheses.push_back(m4_sum(false, -1, m4_high));
            c2p.hypotheses.push_back(m2_sum(1.0, +1, "sum_{M2} lambda_k r_k(t) - b(t) > 0 for all t"));
            report.cases.push_back(std::move(c2p));
            break;
        }
    }
    finish(report);
    return report;
}

namespace {

// Evaluates the envelope roles of a case at the best increasing subsequence of gammas.
void assign_gammas(const Checker& ck, CaseReport& report, std::span<const double> gammas,
                   const std::vector<EnvelopeRole>& roles, double margin_floor) {
    std::size_t slots = 0;
    for (const auto& r : roles) slots = std::max(slots, r.slot + 1);
    if (gammas.size() < slots) {
        Hypothesis h;
        h.description = "requires " + std::to_string(slots) + " increasing gammas, got " + std::to_string(gammas.size());
        h.required_sign = +1;
        h.margin = static_cast<double>(gammas.size()) - static_cast<double>(slots);
        h.status = Verdict::violated;
        report.hypotheses.push_back(h);
        return;
    }

    std::vector<std::size_t> idx(slots);
    for (std::size_t i = 0; i < slots; ++i) idx[i] = i;
    std::vector<Hypothesis> best;
    double best_score = -std::numeric_limits<double>::infinity();
    std::vector<double> best_gammas;
    while (true) {
        std::vector<Hypothesis> hs;
        double score = std::numeric_limits<double>::infinity();
        for (const auto& role : roles) {
            hs.push_back(ck.envelope(role.kind, gammas[idx[role.slot]], role.slot));
            score = std::min(score, hs.back().required_sign * hs.back().margin);
        }
        if (score > best_score) {
            best_score = score;
            best = std::move(hs);
            best_gammas.clear();
            for (std::size_t i : idx) best_gammas.push_back(gammas[i]);
        }
        if (best_score >= margin_floor) break;
        // next combination in lexicographic order
        std::size_t i = slots;
        while (i > 0 && idx[i - 1] == gammas.size() - slots + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < slots; ++j) idx[j] = idx[j - 1] + 1;
    }
    report.gammas = best_gammas;
    for (auto& h : best) report.hypotheses.push_back(std::move(h));
}

}  // namespace

TheoremReport check_multiplicity(const Model& model, std::span<const double> gammas, const CheckOptions& options) {
    if (gammas.empty()) throw std::invalid_argument("check_multiplicity: at least one gamma is required");
    for (std::size_t i = 1; i < gammas.size(); ++i)
        if (!(gammas[i] > gammas[i - 1])) throw std::invalid_argument("check_multiplicity: gammas must be strictly increasing");
    for (double g : gammas)
        if (!std::isfinite(g)) throw std::invalid_argument("check_multiplicity: gammas must be finite");

    const Checker ck(model, options);
    const auto& cls = ck.cls();
    const double c = ck.c();
    const double floor = options.margin_floor;
    TheoremReport report;
    report.multiplicity = true;
    report.growth = cls.growth;
    report.margin_floor = floor;

    const bool m3 = cls.has(3);
    const std::vector<EnvelopeRole> a1 = {{Envelope::alpha, 0}};
    const std::vector<EnvelopeRole> b1 = {{Envelope::beta, 0}};
    const std::vector<EnvelopeRole> a1b2 = {{Envelope::alpha, 0}, {Envelope::beta, 1}};
    const std::vector<EnvelopeRole> b1a2 = {{Envelope::beta, 0}, {Envelope::alpha, 1}};
    const std::vector<EnvelopeRole> b1a2b3 = {{Envelope::beta, 0}, {Envelope::alpha, 1}, {Envelope::beta, 2}};

    auto add = [&](std::string label, std::string pattern, bool matches, int predicted, std::vector<Hypothesis> fixed,
                   const std::vector<EnvelopeRole>& roles) {
        CaseReport cr = make_case(std::move(label), std::move(pattern), matches, predicted);
        cr.hypotheses = std::move(fixed);
        if (matches) assign_gammas(ck, cr, gammas, roles, floor);
        report.cases.push_back(std::move(cr));
    };
    auto m2 = [&](double scale, int sign, std::string desc) {
        return ck.subset_sum(2, [scale](const Term&) { return scale; }, std::move(desc), sign);
    };
    auto m4 = [&](bool low, int sign, std::string desc) {
        return ck.subset_sum(4, [&](const Term& t) { return low ? std::exp(-c * t.m) : std::exp(c * t.n); },
                             std::move(desc), sign);
    };
    const std::string m2_gt = "sum_{M2} lambda_k r_k(t) - b(t) > 0 for all t";
    const std::string m2_lt = "sum_{M2} lambda_k r_k(t) e^C - b(t) < 0 for all t";
    const std::string m4_high = "sum_{M4} lambda_k r_k(t) e^(C n_k) - b(t) < 0 for all t";
    const std::string m4_low = "sum_{M4} lambda_k r_k(t) e^(-C m_k) - b(t) > 0 for all t";

    switch (cls.growth) {
        case GrowthCase::superlinear:
            report.theorem = "multiplicity-superlinear";
            add("1", "m_k > 1 for all k, 1 < m_i < n_i + 1 for some i", ck.all_gt1() && m3, 3, {}, a1b2);
            add("2", "m_k >= 1 for all k, m_i = 1 for some i, no m_k in (1, n_k + 1)",
                ck.all_ge1() && cls.has(2) && !m3, 2, {m2(1.0, +1, m2_gt)}, b1);
            add("3", "m_k >= 1 for all k, m_i = 1 for some i, 1 < m_s < n_s + 1 for some s",
                ck.all_ge1() && cls.has(2) && m3, 3, {m2(std::exp(c), -1, m2_lt)}, a1b2);
            add("4", "m_i < 1 for some i, no m_k in (1, n_k + 1)", cls.has(1) && !m3, 2, {}, b1);
            add("5", "m_i < 1 for some i, 1 < m_s < n_s + 1 for some s", cls.has(1) && m3, 4, {}, b1a2b3);
            break;
        case GrowthCase::sublinear:
            report.theorem = "multiplicity-sublinear";
            add("1", kAllGt1, ck.all_gt1(), 2, {}, a1);
            add("2", "m_k >= 1 for all k, m_i = 1 and m_j > 1 for some i, j", ck.all_ge1() && cls.has(2) && m3, 2,
                {m2(std::exp(c), -1, m2_lt)}, a1);
            add("3", "0 < m_i < 1 and m_j > 1 for some i, j", cls.has(1) && m3, 3, {}, b1a2);
            break;
        case GrowthCase::asymptotically_linear:
            report.theorem = "multiplicity-asymptotically-linear";
            add("1", "m_k > 1 for all k, 1 < m_i < n_i + 1 for some i", ck.all_gt1() && m3, 2,
                {m4(false, -1, m4_high)}, a1);
            add("2", "0 < m_i < 1 for some i, no m_k in (1, n_k + 1)", cls.has(1) && !m3, 2, {m4(true, +1, m4_low)}, b1);
            add("3", "0 < m_i < 1 and 1 < m_s < n_s + 1 for some i, s", cls.has(1) && m3, 3, {m4(false, -1, m4_high)},
                b1a2);
            break;
    }
    finish(report);
    return report;
}

std::string format_report(const TheoremReport& report) {
    std::ostringstream os;
    os << "theorem: " << report.theorem << '\n';
    os << "kind: " << (report.multiplicity ? "multiplicity" : "existence") << '\n';
    os << "growth_case: " << to_string(report.growth) << '\n';
    os << "margin_floor: " << format_number(report.margin_floor) << '\n';
    os << "verdict: " << to_string(report.verdict) << '\n';
    if (const CaseReport* best = report.best_case()) os << "case: " << best->label << '\n';
    os << "predicted_solution_count: " << report.predicted_solution_count << '\n';
    for (const auto& c : report.cases) {
        os << "case " << c.label << ": pattern=" << (c.pattern_matches ? "matched" : "not matched") << " (" << c.pattern
           << ")";
        if (!c.pattern_matches) {
            os << '\n';
            continue;
        }
        os << "; gammas=";
        for (std::size_t i = 0; i < c.gammas.size(); ++i) os << (i ? "," : "") << format_number(c.gammas[i]);
        os << "; verdict=" << to_string(c.verdict) << "; predicted=" << (c.verdict == Verdict::satisfied ? c.predicted : 0)
           << '\n';
        for (const auto& h : c.hypotheses) {
            os << "  hypothesis: " << h.description << " | required: " << (h.required_sign > 0 ? "> 0" : "< 0")
               << " | margin: " << format_number(h.margin);
            if (h.witness) os << " | gamma: " << format_number(*h.witness);
            os << " | verdict: " << to_string(h.status) << '\n';
        }
    }
    return os.str();
}

}  // namespace hema
