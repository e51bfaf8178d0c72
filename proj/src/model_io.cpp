#include "hema/model_io.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

namespace hema {

namespace {

double read_number(const YAML::Node& node, const std::string& field) {
    if (!node || node.IsNull()) throw ModelError(field, "missing");
    if (!node.IsScalar()) throw ModelError(field, "expected a number");
    try {
        return node.as<double>();
    } catch (const YAML::Exception&) {
        throw ModelError(field, "expected a number, got '" + node.Scalar() + "'");
    }
}

PeriodicFn read_periodic(const YAML::Node& node, double period, const std::string& field) {
    if (!node || node.IsNull()) throw ModelError(field, "missing");
    try {
        if (node.IsScalar()) return PeriodicFn::constant(period, read_number(node, field));
        if (!node.IsMap()) throw ModelError(field, "expected a number or a map");
        if (node["samples"]) {
            const YAML::Node s = node["samples"];
            if (!s.IsSequence()) throw ModelError(field + ".samples", "expected a list");
            std::vector<double> values;
            for (std::size_t i = 0; i < s.size(); ++i)
                values.push_back(read_number(s[i], field + ".samples[" + std::to_string(i) + "]"));
            return PeriodicFn::sampled(period, std::move(values));
        }
        const double mean = read_number(node["mean"], field + ".mean");
        std::vector<Harmonic> harmonics;
        if (const YAML::Node h = node["harmonics"]) {
            if (!h.IsSequence()) throw ModelError(field + ".harmonics", "expected a list");
            for (std::size_t i = 0; i < h.size(); ++i) {
                const std::string hf = field + ".harmonics[" + std::to_string(i) + "]";
                if (!h[i].IsSequence() || h[i].size() != 3) throw ModelError(hf, "expected [j, cos, sin]");
                const double j = read_number(h[i][0], hf);
                if (j != static_cast<double>(static_cast<int>(j)) || j < 1)
                    throw ModelError(hf, "frequency multiple must be an integer >= 1");
                harmonics.push_back({static_cast<int>(j), read_number(h[i][1], hf), read_number(h[i][2], hf)});
            }
        }
        return PeriodicFn::trig(period, mean, std::move(harmonics));
    } catch (const ModelError& e) {
        if (e.field().rfind(field, 0) == 0) throw;
        throw ModelError(field + (e.field().empty() ? "" : "." + e.field()), e.what());
    }
}

Model build(const YAML::Node& root) {
    if (!root.IsMap()) throw ModelError("", "model document must be a map");
    const double period = read_number(root["period"], "period");
    if (!(period > 0.0)) throw ModelError("period", "must be > 0");
    PeriodicFn b = read_periodic(root["b"], period, "b");
    const YAML::Node terms_node = root["terms"];
    if (!terms_node) throw ModelError("terms", "missing");
    if (!terms_node.IsSequence()) throw ModelError("terms", "expected a list");
    std::vector<Term> terms;
    for (std::size_t k = 0; k < terms_node.size(); ++k) {
        const YAML::Node t = terms_node[k];
        const std::string base = "terms[" + std::to_string(k) + "]";
        if (!t.IsMap()) throw ModelError(base, "expected a map");
        Term term;
        term.lambda = read_number(t["lambda"], base + ".lambda");
        term.m = read_number(t["m"], base + ".m");
        term.n = read_number(t["n"], base + ".n");
        term.r = read_periodic(t["r"], period, base + ".r");
        term.tau = t["tau"] ? read_periodic(t["tau"], period, base + ".tau") : PeriodicFn::constant(period, 0.0);
        term.mu = t["mu"] ? read_periodic(t["mu"], period, base + ".mu") : PeriodicFn::constant(period, 0.0);
        terms.push_back(std::move(term));
    }
    return Model(std::move(terms), std::move(b));
}

void emit_periodic(YAML::Emitter& out, const PeriodicFn& f) {
    if (f.is_trig() && f.harmonics().empty()) {
        out << f.trig_mean();
        return;
    }
    out << YAML::Flow << YAML::BeginMap;
    if (f.is_trig()) {
        out << YAML::Key << "mean" << YAML::Value << f.trig_mean();
        out << YAML::Key << "harmonics" << YAML::Value << YAML::BeginSeq;
        for (const auto& h : f.harmonics())
            out << YAML::Flow << YAML::BeginSeq << h.multiple << h.cos_coeff << h.sin_coeff << YAML::EndSeq;
        out << YAML::EndSeq;
    } else {
        out << YAML::Key << "samples" << YAML::Value << YAML::Flow << f.samples();
    }
    out << YAML::EndMap;
}

}  // namespace

Model parse_model(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ModelError("", std::string("malformed model document: ") + e.what());
    }
    return build(root);
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("", "cannot open model file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string dump_model(const Model& model) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "period" << YAML::Value << model.period();
    out << YAML::Key << "b" << YAML::Value;
    emit_periodic(out, model.decay());
    out << YAML::Key << "terms" << YAML::Value << YAML::BeginSeq;
    for (const Term& t : model.terms()) {
        out << YAML::BeginMap;
        out << YAML::Key << "lambda" << YAML::Value << t.lambda;
        out << YAML::Key << "m" << YAML::Value << t.m;
        out << YAML::Key << "n" << YAML::Value << t.n;
        out << YAML::Key << "r" << YAML::Value;
        emit_periodic(out, t.r);
        out << YAML::Key << "tau" << YAML::Value;
        emit_periodic(out, t.tau);
        out << YAML::Key << "mu" << YAML::Value;
        emit_periodic(out, t.mu);
        out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

void save_model(const Model& model, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << dump_model(model);
}

}  // namespace hema
