#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "hema/analysis.hpp"
#include "hema/cli.hpp"
#include "hema/dde.hpp"
#include "hema/model_io.hpp"
#include "hema/orbits.hpp"
#include "hema/reference_models.hpp"
#include "hema/synthesis.hpp"
#include "hema/theorems.hpp"

namespace py = pybind11;
using namespace hema;

namespace {

py::dict envelope_dict(const EnvelopeGrid& g) {
    py::dict d;
    d["gamma"] = g.gammas;
    d["phi"] = g.phi_values;
    d["min_alpha"] = g.min_alpha;
    d["max_beta"] = g.max_beta;
    return d;
}

py::dict report_dict(const TheoremReport& r) {
    py::dict d;
    d["theorem"] = r.theorem;
    d["verdict"] = to_string(r.verdict);
    d["satisfied"] = r.verdict == Verdict::satisfied;
    d["predicted_solution_count"] = r.predicted_solution_count;
    d["case"] = r.best_case() ? py::cast(r.best_case()->label) : py::none();
    d["text"] = format_report(r);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Periodic solutions of the nonautonomous multi-delay Mackey-Glass equation.";

    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);

    py::class_<Model>(m, "Model")
        .def_property_readonly("period", &Model::period)
        .def_property_readonly("decay_mean", &Model::decay_mean)
        .def_property_readonly("decay_integral", &Model::decay_integral)
        .def("__len__", &Model::size)
        .def("classify", [](const Model& model) { return classify(model).describe(); })
        .def("growth", [](const Model& model) { return to_string(classify(model).growth); })
        .def("dump", &dump_model);

    m.def("parse_model", [](const std::string& text) { return parse_model(text); }, py::arg("text"));
    m.def("load_model", &load_model, py::arg("path"));
    m.def("six_orbit_model", &six_orbit_model);
    m.def("equilibrium_model", &equilibrium_model, py::arg("period") = 1.0, py::arg("delay") = 0.1);
    m.def("pure_decay_model", &pure_decay_model, py::arg("period") = 1.0, py::arg("decay") = 1.0);

    m.def("phi", &phi, py::arg("model"), py::arg("gamma"));
    m.def("alpha", &alpha, py::arg("model"), py::arg("gamma"), py::arg("t"));
    m.def("beta", &beta, py::arg("model"), py::arg("gamma"), py::arg("t"));

    m.def(
        "scan_envelopes",
        [](const Model& model, double lo, double hi, double step, int t_points) {
            return envelope_dict(scan_envelopes(model, {lo, hi, step}, t_points, false));
        },
        py::arg("model"), py::arg("lo") = -50.0, py::arg("hi") = 50.0, py::arg("step") = 0.01, py::arg("t_points") = 1000);
    m.def(
        "predicted_solutions",
        [](const Model& model, double lo, double hi, double step, int t_points) {
            return count_predicted_solutions(model, scan_envelopes(model, {lo, hi, step}, t_points, false));
        },
        py::arg("model"), py::arg("lo") = -50.0, py::arg("hi") = 50.0, py::arg("step") = 0.01, py::arg("t_points") = 1000);

    m.def("check_existence", [](const Model& model) { return report_dict(check_existence(model)); }, py::arg("model"));
    m.def(
        "check_multiplicity",
        [](const Model& model, const std::vector<double>& gammas) { return report_dict(check_multiplicity(model, gammas)); },
        py::arg("model"), py::arg("gammas"));

    py::class_<PeriodicOrbit>(m, "PeriodicOrbit")
        .def_property_readonly("mean", [](const PeriodicOrbit& o) { return o.y.mean(); })
        .def_readonly("y_min", &PeriodicOrbit::y_min)
        .def_readonly("y_max", &PeriodicOrbit::y_max)
        .def_readonly("residual", &PeriodicOrbit::residual_norm)
        .def_property_readonly("amplitude", &PeriodicOrbit::amplitude)
        .def_property_readonly("coefficients", [](const PeriodicOrbit& o) { return o.y.pack(); })
        .def("__call__", [](const PeriodicOrbit& o, double t) { return o.y(t); }, py::arg("t"))
        .def("__repr__", [](const PeriodicOrbit& o) {
            std::ostringstream s;
            s << "PeriodicOrbit(mean=" << o.y.mean() << ", amplitude=" << o.amplitude() << ")";
            return s.str();
        });

    m.def(
        "solve_orbit",
        [](const Model& model, double seed, int harmonics, int max_iter) -> std::optional<PeriodicOrbit> {
            SolveOptions o;
            o.harmonics = harmonics;
            o.max_iter = max_iter;
            return solve_orbit(model, seed, o).orbit;
        },
        py::arg("model"), py::arg("seed_mean"), py::arg("harmonics") = 16, py::arg("max_iter") = 100);
    m.def(
        "find_all_orbits",
        [](const Model& model, double lo, double hi, double step) {
            const auto search = find_all_orbits(model, scan_envelopes(model, {lo, hi, step}, 1000, false));
            return py::make_tuple(search.orbits, search.predicted);
        },
        py::arg("model"), py::arg("lo") = -50.0, py::arg("hi") = 50.0, py::arg("step") = 0.01);
    m.def(
        "validate_orbit", [](const Model& model, const PeriodicOrbit& orbit) { return validate_orbit(model, orbit).failures; },
        py::arg("model"), py::arg("orbit"));

    m.def(
        "integrate",
        [](const Model& model, double x0, double t_end, int steps_per_period, bool log_space) {
            IntegrateOptions o;
            o.steps_per_period = steps_per_period;
            o.mode = log_space ? StateSpace::log : StateSpace::linear;
            const auto traj = integrate(model, InitialHistory::constant(x0), 0.0, t_end, o);
            return py::make_tuple(traj.times, traj.values);
        },
        py::arg("model"), py::arg("x0"), py::arg("t_end"), py::arg("steps_per_period") = 512, py::arg("log_space") = true);

    m.def(
        "synthesize",
        [](const Model& base, double gamma1, double epsilon) {
            const auto s = synthesize_lambdas(base, gamma1, epsilon);
            return py::make_tuple(with_lambdas(base, s.lambdas), s.gamma2);
        },
        py::arg("base"), py::arg("gamma1"), py::arg("epsilon"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
