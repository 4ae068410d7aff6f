#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fanoeit/cli.hpp"

namespace fanoeit {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Strict reader: every key must be consumed, types are checked.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_.empty() ? "document" : path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    double number(const std::string& key, double def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_number()) fail(join(path_, key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(join(path_, key), "must be finite");
        return d;
    }

    std::size_t count(const std::string& key, std::size_t def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (v.is_number_unsigned()) return v.get<std::size_t>();
        if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::size_t>(v.get<long long>());
        fail(join(path_, key), "expected a non-negative integer");
    }

    int integer(const std::string& key, int def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) fail(join(path_, key), "expected an integer");
        return v.get<int>();
    }

    bool boolean(const std::string& key, bool def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_boolean()) fail(join(path_, key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key, const std::string& def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_string()) fail(join(path_, key), "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key, const std::vector<double>& def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_array()) fail(join(path_, key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) fail(join(path_, key) + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back(v[i].get<double>());
            if (!std::isfinite(out.back())) fail(join(path_, key) + "[" + std::to_string(i) + "]", "must be finite");
        }
        return out;
    }

    const json* object(const std::string& key) {
        if (!take(key)) return nullptr;
        return &j_.at(key);
    }

    std::string path(const std::string& key) const { return join(path_, key); }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) fail(join(path_, it.key()), "unknown key");
        }
    }

    [[noreturn]] static void fail(const std::string& path, const std::string& what) {
        throw ConfigError(path + ": " + what);
    }

private:
    bool take(const std::string& key) {
        if (!j_.contains(key)) return false;
        seen_.insert(key);
        return true;
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

SystemParams read_system(const json* j) {
    SystemParams p;
    if (!j) return p;
    Reader r(*j, "system");
    if (const json* e = r.object("effective")) {
        for (const char* k : {"gamma1", "gamma2", "q1b", "q2b", "q1c", "q2c"})
            if (r.has(k)) Reader::fail(r.path(k), "not allowed together with system.effective");
        Reader er(*e, "system.effective");
        EffectiveParams eff = effective_params(p);
        eff.Gamma = er.number("Gamma", eff.Gamma);
        eff.Gamma21 = er.number("Gamma21", eff.Gamma21);
        eff.Qb = er.number("Qb", eff.Qb);
        eff.Qc = er.number("Qc", eff.Qc);
        eff.Qb21 = er.number("Qb21", eff.Qb21);
        eff.Qc21 = er.number("Qc21", eff.Qc21);
        er.finish();
        if (!(eff.Gamma > 0)) Reader::fail("system.effective.Gamma", "must be > 0");
        if (!(std::abs(eff.Gamma21) < 1)) Reader::fail("system.effective.Gamma21", "must satisfy |Gamma21| < 1");
        p = system_from_effective(eff, p);
    } else {
        p.gamma1 = r.number("gamma1", p.gamma1);
        p.gamma2 = r.number("gamma2", p.gamma2);
        p.q1b = r.number("q1b", p.q1b);
        p.q2b = r.number("q2b", p.q2b);
        p.q1c = r.number("q1c", p.q1c);
        p.q2c = r.number("q2c", p.q2c);
    }
    p.Db = r.number("Db", p.Db);
    p.Dc = r.number("Dc", p.Dc);
    p.density_N = r.number("density_N", p.density_N);
    p.gamma_cb = r.number("gamma_cb", 1e-3 * (p.gamma1 + p.gamma2));
    r.finish();
    p.validate();
    return p;
}

FieldParams read_field(const json* j) {
    FieldParams f;
    if (!j) return f;
    Reader r(*j, "field");
    f.eps2 = r.number("eps2", f.eps2);
    f.delta_c = r.number("delta_c", f.delta_c);
    f.eps1 = r.number("eps1", f.eps1);
    r.finish();
    f.validate();
    return f;
}

GridSpec read_grid(const json* j) {
    GridSpec g;
    if (!j) return g;
    Reader r(*j, "grid");
    g.min_over_gamma = r.number("min", g.min_over_gamma);
    g.max_over_gamma = r.number("max", g.max_over_gamma);
    g.count = r.count("count", g.count);
    g.exclusion_over_gamma = r.number("exclusion", g.exclusion_over_gamma);
    r.finish();
    if (!(g.max_over_gamma > g.min_over_gamma)) Reader::fail("grid.max", "must exceed grid.min");
    if (g.count < 100) Reader::fail("grid.count", "must be >= 100");
    if (!(g.exclusion_over_gamma >= 0)) Reader::fail("grid.exclusion", "must be >= 0");
    return g;
}

void check_label(const std::string& path, const std::string& label) {
    const auto& labels = parameter_labels();
    if (std::find(labels.begin(), labels.end(), label) == labels.end())
        Reader::fail(path, "unknown parameter label '" + label + "'");
}

OracleConfig read_oracle(const json* j) {
    OracleConfig o;
    if (!j) return o;
    Reader r(*j, "oracle");
    o.delta_e_ladder = r.numbers("delta_e_ladder", o.delta_e_ladder);
    o.ladder_omega_fraction = r.number("ladder_omega_fraction", o.ladder_omega_fraction);
    o.truncation_L = r.number("truncation_L", o.truncation_L);
    o.abs_tol = r.number("abs_tol", o.abs_tol);
    o.rel_tol = r.number("rel_tol", o.rel_tol);
    o.refinement_floor = r.number("refinement_floor", o.refinement_floor);
    o.richardson_order = r.integer("richardson_order", o.richardson_order);
    o.max_segments = r.count("max_segments", o.max_segments);
    const std::string order = r.string("limit_order", "plemelj_first");
    if (order == "plemelj_first") {
        o.limit_order = LimitOrder::plemelj_first;
    } else if (order == "finite_eta") {
        o.limit_order = LimitOrder::finite_eta;
    } else {
        Reader::fail("oracle.limit_order", "expected \"plemelj_first\" or \"finite_eta\"");
    }
    o.eta_ladder = r.numbers("eta_ladder", o.eta_ladder);
    r.finish();
    try {
        o.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(e.what());
    }
    return o;
}

DynamicsSpec read_dynamics(const json* j) {
    DynamicsSpec d;
    if (!j) return d;
    Reader r(*j, "dynamics");
    d.enabled = r.boolean("enabled", d.enabled);
    auto& c = d.config;
    c.W_over_gamma = r.number("W", c.W_over_gamma);
    c.n_bins = r.count("n_bins", c.n_bins);
    c.eta_over_spacing = r.number("eta_over_spacing", c.eta_over_spacing);
    c.dt_gamma = r.number("dt", c.dt_gamma);
    c.ramp_over_eta = r.number("ramp_over_eta", c.ramp_over_eta);
    c.check_interval_gamma = r.number("check_interval", c.check_interval_gamma);
    c.tolerance = r.number("tolerance", c.tolerance);
    c.max_time_over_eta = r.number("max_time_over_eta", c.max_time_over_eta);
    c.eta_extrapolation = r.boolean("eta_extrapolation", c.eta_extrapolation);
    if (const json* l = r.object("layout")) {
        Reader lr(*l, "dynamics.layout");
        const std::string mode = lr.string("mode", "densified");
        if (mode == "densified") {
            c.layout.mode = GridMode::densified;
        } else if (mode == "uniform") {
            c.layout.mode = GridMode::uniform;
        } else {
            Reader::fail("dynamics.layout.mode", "expected \"densified\" or \"uniform\"");
        }
        c.layout.core_half_width = lr.number("core_half_width", c.layout.core_half_width);
        c.layout.core_fraction = lr.number("core_fraction", c.layout.core_fraction);
        c.layout.max_growth = lr.number("max_growth", c.layout.max_growth);
        lr.finish();
    }
    d.omegas_over_gamma = r.numbers("omegas", d.omegas_over_gamma);
    d.convergence_doublings = r.integer("convergence_doublings", d.convergence_doublings);
    d.compare_without_bound_state = r.boolean("compare_without_bound_state", d.compare_without_bound_state);
    r.finish();
    c.validate();
    if (d.convergence_doublings < 0 || d.convergence_doublings > 6)
        Reader::fail("dynamics.convergence_doublings", "must lie in [0, 6]");
    if ((c.n_bins >> d.convergence_doublings) < 1000)
        Reader::fail("dynamics.n_bins", "coarsest convergence level falls below 1000 bins");
    return d;
}

bool filename_safe(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.';
    });
}

}  // namespace

DetuningGrid GridSpec::build(double Gamma) const {
    return DetuningGrid::uniform(min_over_gamma, max_over_gamma, count, exclusion_over_gamma, Gamma);
}

const std::vector<std::string>& parameter_labels() {
    static const std::vector<std::string> labels = {
        "eps2", "delta_c", "eps1", "gamma_cb", "density_N", "Db", "Dc", "gamma1", "gamma2", "q1b", "q2b",
        "q1c", "q2c", "Gamma", "Gamma21", "Qb", "Qc", "Qb21", "Qc21"};
    return labels;
}

void apply_parameter(SystemParams& p, FieldParams& f, const std::string& label, double value) {
    if (label == "eps2") f.eps2 = value;
    else if (label == "delta_c") f.delta_c = value;
    else if (label == "eps1") f.eps1 = value;
    else if (label == "gamma_cb") p.gamma_cb = value;
    else if (label == "density_N") p.density_N = value;
    else if (label == "Db") p.Db = value;
    else if (label == "Dc") p.Dc = value;
    else if (label == "gamma1") p.gamma1 = value;
    else if (label == "gamma2") p.gamma2 = value;
    else if (label == "q1b") p.q1b = value;
    else if (label == "q2b") p.q2b = value;
    else if (label == "q1c") p.q1c = value;
    else if (label == "q2c") p.q2c = value;
    else {
        EffectiveParams e = effective_params(p);
        if (label == "Gamma") e.Gamma = value;
        else if (label == "Gamma21") e.Gamma21 = value;
        else if (label == "Qb") e.Qb = value;
        else if (label == "Qc") e.Qc = value;
        else if (label == "Qb21") e.Qb21 = value;
        else if (label == "Qc21") e.Qc21 = value;
        else throw ConfigError("unknown parameter label '" + label + "'");
        p = system_from_effective(e, p);
    }
}

RunConfig load_config(const json& doc) {
    RunConfig cfg;
    Reader r(doc, "");
    cfg.name = r.string("name", cfg.name);
    if (!filename_safe(cfg.name)) Reader::fail("name", "must be a non-empty file-name-safe string");
    cfg.system = read_system(r.object("system"));
    cfg.field = read_field(r.object("field"));
    cfg.grid = read_grid(r.object("grid"));

    if (const json* s = r.object("sweep")) {
        Reader sr(*s, "sweep");
        SweepSpec sw;
        sw.parameter = sr.string("parameter", "");
        check_label("sweep.parameter", sw.parameter);
        sw.values = sr.numbers("values", {});
        sr.finish();
        if (sw.values.empty()) Reader::fail("sweep.values", "must not be empty");
        bool up = true, down = true;
        for (std::size_t i = 1; i < sw.values.size(); ++i) {
            up = up && sw.values[i] > sw.values[i - 1];
            down = down && sw.values[i] < sw.values[i - 1];
        }
        if (!up && !down) Reader::fail("sweep.values", "must be strictly ordered");
        cfg.sweep = sw;
    }
    if (const json* v = r.object("variants")) {
        if (!v->is_array()) Reader::fail("variants", "expected an array");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < v->size(); ++i) {
            const std::string path = "variants[" + std::to_string(i) + "]";
            Reader vr((*v)[i], path);
            Variant var;
            var.label = vr.string("label", "");
            if (!filename_safe(var.label)) Reader::fail(path + ".label", "must be a non-empty file-name-safe string");
            if (!seen.insert(var.label).second) Reader::fail(path + ".label", "duplicate label");
            if (const json* set = vr.object("set")) {
                if (!set->is_object()) Reader::fail(path + ".set", "expected an object");
                for (auto it = set->begin(); it != set->end(); ++it) {
                    check_label(path + ".set." + it.key(), it.key());
                    if (!it->is_number()) Reader::fail(path + ".set." + it.key(), "expected a number");
                    var.set[it.key()] = it->get<double>();
                }
            }
            vr.finish();
            cfg.variants.push_back(var);
        }
    }
    if (cfg.sweep && !cfg.variants.empty()) Reader::fail("variants", "not allowed together with sweep");

    if (const json* o = r.object("outputs")) {
        Reader orr(*o, "outputs");
        cfg.outputs.spectrum = orr.string("spectrum", cfg.outputs.spectrum);
        cfg.outputs.windows = orr.string("windows", cfg.outputs.windows);
        cfg.outputs.certification = orr.string("certification", cfg.outputs.certification);
        cfg.outputs.dynamics = orr.string("dynamics", cfg.outputs.dynamics);
        orr.finish();
    }
    {
        const std::set<std::string> paths = {cfg.outputs.spectrum, cfg.outputs.windows, cfg.outputs.certification,
                                             cfg.outputs.dynamics};
        if (paths.size() != 4) Reader::fail("outputs", "paths must be distinct");
        for (const auto& p : paths)
            if (p.empty()) Reader::fail("outputs", "paths must not be empty");
    }
    cfg.oracle = read_oracle(r.object("oracle"));
    if (const json* c = r.object("certify")) {
        Reader cr(*c, "certify");
        cfg.certify.enabled = cr.boolean("enabled", cfg.certify.enabled);
        cfg.certify.threshold = cr.number("threshold", cfg.certify.threshold);
        cfg.certify.exclusion_over_gamma = cr.number("exclusion", cfg.certify.exclusion_over_gamma);
        cfg.certify.residue = cr.boolean("residue", cfg.certify.residue);
        cr.finish();
        if (!(cfg.certify.threshold > 0)) Reader::fail("certify.threshold", "must be > 0");
        if (!(cfg.certify.exclusion_over_gamma >= 0)) Reader::fail("certify.exclusion", "must be >= 0");
    }
    cfg.dynamics = read_dynamics(r.object("dynamics"));
    if (const json* a = r.object("analysis")) {
        Reader ar(*a, "analysis");
        cfg.analysis.depth_fraction = ar.number("depth_fraction", cfg.analysis.depth_fraction);
        cfg.analysis.trend = ar.boolean("trend", cfg.analysis.trend);
        cfg.analysis.trend_tolerance = ar.number("trend_tolerance", cfg.analysis.trend_tolerance);
        ar.finish();
        if (!(cfg.analysis.depth_fraction > 0 && cfg.analysis.depth_fraction < 1))
            Reader::fail("analysis.depth_fraction", "must lie in (0, 1)");
        if (!(cfg.analysis.trend_tolerance > 0)) Reader::fail("analysis.trend_tolerance", "must be > 0");
    }
    r.finish();

    // Every curve must be a valid parameter set.
    std::vector<Curve> curves;
    try {
        curves = expand_curves(cfg);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("curve parameters: ") + e.what());
    }
    for (const auto& c : curves) {
        try {
            c.system.validate();
            c.field.validate();
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("curve '") + c.label + "': " + e.what());
        }
    }
    return cfg;
}

RunConfig load_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("document: malformed JSON: ") + e.what());
    }
    return load_config(doc);
}

RunConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config_text(ss.str());
}

json to_json(const RunConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    const auto& p = cfg.system;
    j["system"] = {{"gamma1", p.gamma1}, {"gamma2", p.gamma2}, {"q1b", p.q1b},       {"q2b", p.q2b},
                   {"q1c", p.q1c},       {"q2c", p.q2c},       {"Db", p.Db},         {"Dc", p.Dc},
                   {"gamma_cb", p.gamma_cb}, {"density_N", p.density_N}};
    j["field"] = {{"eps2", cfg.field.eps2}, {"delta_c", cfg.field.delta_c}, {"eps1", cfg.field.eps1}};
    j["grid"] = {{"min", cfg.grid.min_over_gamma},
                 {"max", cfg.grid.max_over_gamma},
                 {"count", cfg.grid.count},
                 {"exclusion", cfg.grid.exclusion_over_gamma}};
    if (cfg.sweep) j["sweep"] = {{"parameter", cfg.sweep->parameter}, {"values", cfg.sweep->values}};
    if (!cfg.variants.empty()) {
        json arr = json::array();
        for (const auto& v : cfg.variants) {
            json set = json::object();
            for (const auto& [k, val] : v.set) set[k] = val;
            arr.push_back({{"label", v.label}, {"set", set}});
        }
        j["variants"] = arr;
    }
    j["outputs"] = {{"spectrum", cfg.outputs.spectrum},
                    {"windows", cfg.outputs.windows},
                    {"certification", cfg.outputs.certification},
                    {"dynamics", cfg.outputs.dynamics}};
    const auto& o = cfg.oracle;
    j["oracle"] = {{"delta_e_ladder", o.delta_e_ladder},
                   {"ladder_omega_fraction", o.ladder_omega_fraction},
                   {"truncation_L", o.truncation_L},
                   {"abs_tol", o.abs_tol},
                   {"rel_tol", o.rel_tol},
                   {"refinement_floor", o.refinement_floor},
                   {"richardson_order", o.richardson_order},
                   {"max_segments", o.max_segments},
                   {"limit_order", o.limit_order == LimitOrder::plemelj_first ? "plemelj_first" : "finite_eta"},
                   {"eta_ladder", o.eta_ladder}};
    j["certify"] = {{"enabled", cfg.certify.enabled},
                    {"threshold", cfg.certify.threshold},
                    {"exclusion", cfg.certify.exclusion_over_gamma},
                    {"residue", cfg.certify.residue}};
    const auto& d = cfg.dynamics.config;
    j["dynamics"] = {{"enabled", cfg.dynamics.enabled},
                     {"W", d.W_over_gamma},
                     {"n_bins", d.n_bins},
                     {"eta_over_spacing", d.eta_over_spacing},
                     {"dt", d.dt_gamma},
                     {"ramp_over_eta", d.ramp_over_eta},
                     {"check_interval", d.check_interval_gamma},
                     {"tolerance", d.tolerance},
                     {"max_time_over_eta", d.max_time_over_eta},
                     {"eta_extrapolation", d.eta_extrapolation},
                     {"layout",
                      {{"mode", d.layout.mode == GridMode::densified ? "densified" : "uniform"},
                       {"core_half_width", d.layout.core_half_width},
                       {"core_fraction", d.layout.core_fraction},
                       {"max_growth", d.layout.max_growth}}},
                     {"omegas", cfg.dynamics.omegas_over_gamma},
                     {"convergence_doublings", cfg.dynamics.convergence_doublings},
                     {"compare_without_bound_state", cfg.dynamics.compare_without_bound_state}};
    j["analysis"] = {{"depth_fraction", cfg.analysis.depth_fraction},
                     {"trend", cfg.analysis.trend},
                     {"trend_tolerance", cfg.analysis.trend_tolerance}};
    return j;
}

std::vector<Curve> expand_curves(const RunConfig& cfg) {
    std::vector<Curve> out;
    if (cfg.sweep) {
        for (std::size_t i = 0; i < cfg.sweep->values.size(); ++i) {
            Curve c{cfg.sweep->parameter + "_" + std::to_string(i), {{cfg.sweep->parameter, cfg.sweep->values[i]}},
                    cfg.system, cfg.field};
            apply_parameter(c.system, c.field, cfg.sweep->parameter, cfg.sweep->values[i]);
            out.push_back(c);
        }
    } else if (!cfg.variants.empty()) {
        for (const auto& v : cfg.variants) {
            Curve c{v.label, v.set, cfg.system, cfg.field};
            for (const auto& [k, val] : v.set) apply_parameter(c.system, c.field, k, val);
            out.push_back(c);
        }
    } else {
        out.push_back(Curve{"base", {}, cfg.system, cfg.field});
    }
    return out;
}

}  // namespace fanoeit
