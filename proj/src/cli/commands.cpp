#include "hema/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "hema/analysis.hpp"
#include "hema/csv.hpp"
#include "hema/dde.hpp"
#include "hema/model_io.hpp"
#include "hema/orbits.hpp"
#include "hema/reference_models.hpp"
#include "hema/synthesis.hpp"
#include "hema/theorems.hpp"

namespace hema::cli {

namespace {

namespace fs = std::filesystem;

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Config {
    std::string model_path;
    std::string gamma;
    int t_points = 1000;
    int harmonics = 16;
    int max_iter = 100;
    int seeds_per_bracket = 5;
    double margin_floor = 1e-9;
    double residual_tolerance = 1e-10;
    double amplitude_tolerance = 1e-6;
    double dedup_tol = 1e-4;
    std::string out = ".";
};

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
        throw InputError(what + ": '" + s + "' is not a finite number");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

GammaGrid parse_gamma(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw InputError("--gamma: expected lo:step:hi, got '" + text + "'");
    GammaGrid g{parse_double(parts[0], "--gamma"), parse_double(parts[2], "--gamma"), parse_double(parts[1], "--gamma")};
    try {
        (void)g.values();
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("--gamma: ") + e.what());
    }
    return g;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> v;
    for (const auto& p : split(text, ',')) v.push_back(parse_double(p, what));
    return v;
}

Model load(const Config& cfg) { return load_model(cfg.model_path); }

fs::path out_dir(const Config& cfg) {
    fs::path dir(cfg.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("--out: cannot create directory " + dir.string() + ": " + ec.message());
    return dir;
}

template <class Fn>
void write_file(const fs::path& path, Fn&& body) {
    std::ofstream os(path);
    if (!os) throw InputError("cannot write " + path.string());
    body(os);
}

std::string fixed(double v, int precision = 6) {
    if (!std::isfinite(v)) return format_number(v);
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

std::string band_text(const std::optional<Band>& b) {
    if (!b) return "none";
    return "(" + fixed(b->lo) + ", " + fixed(b->hi) + ")";
}

CheckOptions check_options(const Config& cfg, const GammaGrid& grid) {
    CheckOptions o;
    o.gamma = grid;
    o.t_points = cfg.t_points;
    o.margin_floor = cfg.margin_floor;
    return o;
}

OrbitSearchOptions search_options(const Config& cfg) {
    OrbitSearchOptions o;
    o.solve.harmonics = cfg.harmonics;
    o.solve.max_iter = cfg.max_iter;
    o.solve.residual_tolerance = cfg.residual_tolerance;
    o.solve.amplitude_tolerance = cfg.amplitude_tolerance;
    o.seeds_per_bracket = cfg.seeds_per_bracket;
    o.dedup_tol = cfg.dedup_tol;
    o.margin_floor = cfg.margin_floor;
    return o;
}

struct OrbitReport {
    OrbitSearch search;
    std::vector<OrbitValidation> validations;
};

OrbitReport search_orbits(const Model& model, const Config& cfg, const GammaGrid& grid, const fs::path& dir,
                          std::ostream& out, std::ostream& err) {
    OrbitReport rep;
    const EnvelopeGrid env = scan_envelopes(model, grid, cfg.t_points, false);
    rep.search = find_all_orbits(model, env, search_options(cfg));
    ValidateOptions vo;
    vo.amplitude_tolerance = cfg.amplitude_tolerance;
    for (const auto& o : rep.search.orbits) rep.validations.push_back(validate_orbit(model, o, vo));

    write_file(dir / "manifest.csv", [&](std::ostream& os) { write_manifest_csv(os, rep.search.orbits); });
    for (std::size_t i = 0; i < rep.search.orbits.size(); ++i)
        write_file(dir / ("orbit_" + std::to_string(i + 1) + ".csv"),
                   [&](std::ostream& os) { write_orbit_csv(os, rep.search.orbits[i]); });

    out << "predicted: " << rep.search.predicted << '\n';
    out << "found: " << rep.search.orbits.size() << '\n';
    for (std::size_t i = 0; i < rep.search.orbits.size(); ++i) {
        const auto& o = rep.search.orbits[i];
        const auto& v = rep.validations[i];
        out << "orbit " << i + 1 << ": mean=" << fixed(o.y.mean(), 8) << " y_range=[" << fixed(o.y_min, 8) << ", "
            << fixed(o.y_max, 8) << "] amplitude=" << fixed(o.amplitude(), 4) << " residual=" << fixed(o.residual_norm, 3)
            << " period_map=" << fixed(v.period_map_error, 3) << " band=" << band_text(o.bracket)
            << " validation=" << (v.passed() ? "PASS" : "FAIL") << '\n';
        for (const auto& f : v.failures) err << "orbit " << i + 1 << ": " << f << '\n';
    }
    for (const auto& w : rep.search.warnings) err << "warning: " << w << '\n';
    return rep;
}

int cmd_classify(const Config& cfg, std::ostream& out) {
    const Model model = load(cfg);
    const auto cls = classify(model);
    out << cls.describe() << '\n';
    for (std::size_t k = 0; k < model.size(); ++k) {
        const Term& t = model.term(k);
        out << "term " << k + 1 << ": m=" << format_number(t.m) << " n=" << format_number(t.n)
            << " class=M" << exponent_class(t.m, t.n) << '\n';
    }
    out << "C: " << format_number(model.decay_integral()) << '\n';
    return ok;
}

int cmd_scan(const Config& cfg, std::ostream& out) {
    const Model model = load(cfg);
    const GammaGrid grid = parse_gamma(cfg.gamma);
    const fs::path dir = out_dir(cfg);
    const EnvelopeGrid env = scan_envelopes(model, grid, cfg.t_points, true);
    write_file(dir / "envelope.csv", [&](std::ostream& os) { write_envelope_csv(os, env); });
    write_file(dir / "envelope_summary.csv", [&](std::ostream& os) { write_envelope_summary_csv(os, env); });
    out << "gammas: " << env.gammas.size() << "\ntimes: " << env.times.size() << '\n';
    out << "predicted: " << count_predicted_solutions(model, env, cfg.margin_floor) << '\n';
    out << "wrote " << (dir / "envelope.csv").string() << " and " << (dir / "envelope_summary.csv").string() << '\n';
    return ok;
}

int cmd_check(const Config& cfg, const std::string& selector, const std::string& gammas_text, bool out_given,
              std::ostream& out) {
    const Model model = load(cfg);
    const GammaGrid grid = parse_gamma(cfg.gamma);
    const bool existence = selector == "existence" || selector == "all" || (selector.empty() && gammas_text.empty());
    const bool multiplicity = selector == "multiplicity" || selector == "all" || (selector.empty() && !gammas_text.empty());
    std::vector<double> gammas;
    if (multiplicity) {
        if (gammas_text.empty()) throw InputError("--gammas is required for the multiplicity check");
        gammas = parse_list(gammas_text, "--gammas");
    }
    const CheckOptions opts = check_options(cfg, grid);
    std::vector<TheoremReport> reports;
    if (existence) reports.push_back(check_existence(model, opts));
    if (multiplicity) {
        try {
            reports.push_back(check_multiplicity(model, gammas, opts));
        } catch (const std::invalid_argument& e) {
            throw InputError(std::string("--gammas: ") + e.what());
        }
    }
    std::string text;
    for (const auto& r : reports) text += format_report(r) + "\n";
    out << text;
    if (out_given) {
        const fs::path dir = out_dir(cfg);
        write_file(dir / "check_report.txt", [&](std::ostream& os) { os << text; });
    }
    const bool all = std::all_of(reports.begin(), reports.end(), [](const TheoremReport& r) { return r.verdict == Verdict::satisfied; });
    return all ? ok : failed;
}

int cmd_find_orbits(const Config& cfg, std::ostream& out, std::ostream& err) {
    const Model model = load(cfg);
    const GammaGrid grid = parse_gamma(cfg.gamma);
    const fs::path dir = out_dir(cfg);
    const OrbitReport rep = search_orbits(model, cfg, grid, dir, out, err);
    return static_cast<int>(rep.search.orbits.size()) >= rep.search.predicted ? ok : failed;
}

struct SimulateConfig {
    double periods = 10.0;
    std::optional<double> t_end;
    int steps_per_period = 512;
    std::string mode = "log";
    double history = 1.0;
    int record_every = 1;
};

int cmd_simulate(const Config& cfg, const SimulateConfig& sim, std::ostream& out) {
    const Model model = load(cfg);
    const fs::path dir = out_dir(cfg);
    IntegrateOptions io;
    io.steps_per_period = sim.steps_per_period;
    io.mode = sim.mode == "linear" ? StateSpace::linear : StateSpace::log;
    io.record_every = sim.record_every;
    const double t_end = sim.t_end ? *sim.t_end : sim.periods * model.period();
    if (!(t_end > 0.0)) throw InputError("simulation end time must be > 0");
    const Trajectory traj = integrate(model, InitialHistory::constant(sim.history), 0.0, t_end, io);
    write_file(dir / "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, traj); });
    const double last = traj.values.back();
    const double x = io.mode == StateSpace::log ? std::exp(last) : last;
    out << "t_end: " << format_number(traj.times.back()) << "\nx_end: " << format_number(x) << "\nsamples: "
        << traj.times.size() << "\nwrote " << (dir / "trajectory.csv").string() << '\n';
    return ok;
}

int cmd_synthesize(const Config& cfg, double gamma1, double epsilon, const SynthesisOptions& so, std::ostream& out) {
    const Model base = load(cfg);
    Synthesis s;
    try {
        s = synthesize_lambdas(base, gamma1, epsilon, so);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    const Model result = with_lambdas(base, s.lambdas);
    const fs::path dir = out_dir(cfg);
    save_model(result, dir / "synthesized.model");
    for (std::size_t k = 0; k < s.lambdas.size(); ++k) out << "lambda_" << k + 1 << ": " << format_number(s.lambdas[k]) << '\n';
    out << "gamma1: " << format_number(s.gamma1) << "\nR: " << format_number(s.threshold) << "\ngamma2: "
        << format_number(s.gamma2) << "\nmin_t alpha(gamma1, t): " << format_number(s.alpha_margin)
        << "\nmax_t beta(gamma2, t): " << format_number(s.beta_margin) << "\nwrote "
        << (dir / "synthesized.model").string() << '\n';
    return ok;
}

struct Inequality {
    const char* name;
    bool is_alpha;
    double gamma;
    double bound;
};

constexpr Inequality kInequalities[] = {
    {"min_t alpha(-0.3, t) > 0.09", true, -0.3, 0.09}, {"min_t alpha(5, t) > 0.1", true, 5.0, 0.1},
    {"max_t beta(-5, t) < -0.08", false, -5.0, -0.08}, {"max_t beta(0.2, t) < -0.01", false, 0.2, -0.01},
    {"max_t beta(34, t) < -0.01", false, 34.0, -0.01},
};
constexpr double kRequiredSlack = 1e-4;

int cmd_reproduce(const Config& cfg, double b_scale, std::ostream& out, std::ostream& err) {
    Model model = cfg.model_path.empty() ? six_orbit_model() : load(cfg);
    if (!(b_scale > 0.0)) throw InputError("--b-scale must be > 0");
    if (b_scale != 1.0) model = model.with_decay(model.decay().scaled(b_scale));
    const GammaGrid grid = parse_gamma(cfg.gamma);
    const fs::path dir = out_dir(cfg);

    std::ostringstream summary;
    const TimeSamples samples(model, cfg.t_points);
    const double c = model.decay_integral();
    bool rows_pass = true;
    summary << std::left << std::setw(30) << "inequality" << std::setw(14) << "achieved" << std::setw(14) << "slack"
            << "status\n";
    for (const auto& q : kInequalities) {
        std::vector<double> f(model.size());
        for (std::size_t k = 0; k < model.size(); ++k) {
            const Term& t = model.term(k);
            f[k] = q.is_alpha ? alpha_factor(t.m, t.n, q.gamma, c) : beta_factor(t.m, t.n, q.gamma, c);
        }
        const auto range = samples.envelope(f);
        const double achieved = q.is_alpha ? range.min : range.max;
        const double slack = q.is_alpha ? achieved - q.bound : q.bound - achieved;
        const bool pass = slack >= kRequiredSlack;
        rows_pass = rows_pass && pass;
        summary << std::setw(30) << q.name << std::setw(14) << fixed(achieved) << std::setw(14) << fixed(slack, 3)
                << (pass ? "PASS" : "FAIL") << '\n';
    }

    const EnvelopeGrid env = scan_envelopes(model, grid, cfg.t_points, true);
    write_file(dir / "envelope.csv", [&](std::ostream& os) { write_envelope_csv(os, env); });
    write_file(dir / "envelope_summary.csv", [&](std::ostream& os) { write_envelope_summary_csv(os, env); });

    const CheckOptions opts = check_options(cfg, GammaGrid{});
    const std::vector<double> gammas = {-5.0, -0.3, 0.2, 5.0, 34.0};
    const TheoremReport existence = check_existence(model, opts);
    const TheoremReport multiplicity = check_multiplicity(model, gammas, opts);
    write_file(dir / "check_report.txt", [&](std::ostream& os) { os << format_report(existence) << '\n' << format_report(multiplicity); });
    summary << "growth: " << to_string(classify(model).growth) << '\n';
    summary << "existence check: " << to_string(existence.verdict) << '\n';
    summary << "multiplicity check at -5,-0.3,0.2,5,34: " << to_string(multiplicity.verdict)
            << " (guaranteed " << multiplicity.predicted_solution_count << ")\n";

    std::ostringstream orbit_text;
    const OrbitReport rep = search_orbits(model, cfg, grid, dir, orbit_text, err);
    summary << orbit_text.str();
    const bool orbits_pass = static_cast<int>(rep.search.orbits.size()) >= rep.search.predicted &&
                             std::all_of(rep.validations.begin(), rep.validations.end(),
                                         [](const OrbitValidation& v) { return v.passed(); });
    const bool pass = rows_pass && orbits_pass;
    summary << "result: " << (pass ? "PASS" : "FAIL") << '\n';
    write_file(dir / "summary.txt", [&](std::ostream& os) { os << summary.str(); });
    out << summary.str();
    return pass ? ok : failed;
}

// Joins "--gamma -6:0.05:35" into "--gamma=-6:0.05:35" so values with a leading
// minus sign are never mistaken for options.
std::vector<std::string> join_signed_values(const std::vector<std::string>& args) {
    static const char* const kValued[] = {"--gamma", "--gammas", "--gamma1", "--epsilon", "--t-end", "--b-scale"};
    std::vector<std::string> outv;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const bool valued = std::find(std::begin(kValued), std::end(kValued), args[i]) != std::end(kValued);
        if (valued && i + 1 < args.size()) {
            outv.push_back(args[i] + "=" + args[i + 1]);
            ++i;
        } else {
            outv.push_back(args[i]);
        }
    }
    return outv;
}

void add_common(CLI::App* sub, Config& cfg, bool model_required = true) {
    auto* m = sub->add_option("model", cfg.model_path, "Model file (YAML or JSON)");
    if (model_required) m->required();
    sub->add_option("--t-points", cfg.t_points, "Time grid size per period")->check(CLI::Range(2, 1 << 24));
    sub->add_option("--margin-floor", cfg.margin_floor, "Slack required for strict inequalities")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "Output directory");
}

void add_orbit_options(CLI::App* sub, Config& cfg) {
    sub->add_option("--harmonics", cfg.harmonics, "Fourier harmonics K")->check(CLI::Range(1, 4096));
    sub->add_option("--max-iter", cfg.max_iter, "Newton iteration limit")->check(CLI::Range(1, 1000000));
    sub->add_option("--seeds-per-bracket", cfg.seeds_per_bracket, "Newton seeds per band")->check(CLI::Range(1, 10000));
    sub->add_option("--residual-tol", cfg.residual_tolerance, "Collocation residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--amplitude-tol", cfg.amplitude_tolerance, "Tolerance on the bound y_max - y_min <= C")->check(CLI::PositiveNumber);
    sub->add_option("--dedup-tol", cfg.dedup_tol, "L-infinity distance below which orbits coincide")->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Periodic solutions of the nonautonomous Mackey-Glass equation with several delays", "hemaperiod"};
    app.require_subcommand(1);

    Config cfg;
    std::string selector;
    std::string gammas_text;
    SimulateConfig sim;
    double gamma1 = 0.0, epsilon = 0.0, b_scale = 1.0;
    SynthesisOptions so;

    auto* classify_cmd = app.add_subcommand("classify", "Exponent classes M1..M5 and growth case");
    add_common(classify_cmd, cfg);

    auto* scan_cmd = app.add_subcommand("scan", "alpha/beta/phi over a (gamma, t) grid");
    add_common(scan_cmd, cfg);
    scan_cmd->add_option("--gamma", cfg.gamma, "lo:step:hi")->default_str("-50:0.5:50");

    auto* check_cmd = app.add_subcommand("check", "Existence and multiplicity hypotheses");
    add_common(check_cmd, cfg);
    check_cmd->add_option("--gamma", cfg.gamma, "Witness search range lo:step:hi")->default_str("-50:0.01:50");
    check_cmd->add_option("--theorem", selector, "existence | multiplicity | all")
        ->check(CLI::IsMember({"existence", "multiplicity", "all"}));
    auto* ex_flag = check_cmd->add_flag("--existence", "Check the existence conditions");
    auto* mu_flag = check_cmd->add_flag("--multiplicity", "Check the multiplicity conditions");
    check_cmd->add_option("--gammas", gammas_text, "Comma-separated increasing gammas");

    auto* find_cmd = app.add_subcommand("find-orbits", "Locate and validate periodic orbits");
    add_common(find_cmd, cfg);
    add_orbit_options(find_cmd, cfg);
    find_cmd->add_option("--gamma", cfg.gamma, "Chain grid lo:step:hi")->default_str("-50:0.01:50");

    auto* sim_cmd = app.add_subcommand("simulate", "Integrate from a constant history");
    add_common(sim_cmd, cfg);
    sim_cmd->add_option("--periods", sim.periods, "Integration length in periods")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--t-end", sim.t_end, "Integration end time (overrides --periods)");
    sim_cmd->add_option("--steps-per-period", sim.steps_per_period, "RK4 steps per period")->check(CLI::Range(64, 1 << 24));
    sim_cmd->add_option("--mode", sim.mode, "log | linear")->check(CLI::IsMember({"log", "linear"}));
    sim_cmd->add_option("--history", sim.history, "Constant initial history x0")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--record-every", sim.record_every, "Keep every n-th step")->check(CLI::Range(1, 1 << 24));

    auto* syn_cmd = app.add_subcommand("synthesize", "Multipliers lambda_k giving alpha(gamma1) > 0 > beta(gamma2)");
    add_common(syn_cmd, cfg);
    syn_cmd->add_option("--gamma1", gamma1, "Lower gamma");
    syn_cmd->add_option("--epsilon", epsilon, "epsilon in (0, min b)")->required();
    syn_cmd->add_option("--headroom", so.headroom, "Factor applied to the M3 multipliers")->check(CLI::Range(1.0, 1e6));
    syn_cmd->add_option("--gamma-gap", so.gamma_gap, "gamma2 - R")->check(CLI::PositiveNumber);

    auto* rep_cmd = app.add_subcommand("reproduce-example", "Six-orbit example: inequalities, checks, orbits");
    add_common(rep_cmd, cfg, false);
    add_orbit_options(rep_cmd, cfg);
    rep_cmd->add_option("--gamma", cfg.gamma, "Scan and chain grid lo:step:hi")->default_str("-6:0.05:35");
    rep_cmd->add_option("--b-scale", b_scale, "Multiply b(t) by this factor");

    std::vector<std::string> args = join_signed_values(raw_args);
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : input_error;
    }

    auto gamma_default = [&](CLI::App* sub, const char* value) {
        if (cfg.gamma.empty() && sub->parsed()) cfg.gamma = value;
    };
    gamma_default(scan_cmd, "-50:0.5:50");
    gamma_default(check_cmd, "-50:0.01:50");
    gamma_default(find_cmd, "-50:0.01:50");
    gamma_default(rep_cmd, "-6:0.05:35");

    try {
        if (classify_cmd->parsed()) return cmd_classify(cfg, out);
        if (scan_cmd->parsed()) return cmd_scan(cfg, out);
        if (check_cmd->parsed()) {
            if (ex_flag->count() && mu_flag->count()) selector = "all";
            else if (ex_flag->count()) selector = selector.empty() || selector == "existence" ? "existence" : "all";
            else if (mu_flag->count()) selector = selector.empty() || selector == "multiplicity" ? "multiplicity" : "all";
            return cmd_check(cfg, selector, gammas_text, check_cmd->count("--out") > 0, out);
        }
        if (find_cmd->parsed()) return cmd_find_orbits(cfg, out, err);
        if (sim_cmd->parsed()) return cmd_simulate(cfg, sim, out);
        if (syn_cmd->parsed()) return cmd_synthesize(cfg, gamma1, epsilon, so, out);
        if (rep_cmd->parsed()) return cmd_reproduce(cfg, b_scale, out, err);
    } catch (const ModelError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return failed;
    }
    return input_error;
}

}  // namespace hema::cli
