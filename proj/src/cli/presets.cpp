#include "fanoeit/cli.hpp"

namespace fanoeit {

namespace {

SystemParams effective_base(double Qb, double Qc) {
    EffectiveParams e;
    e.Gamma = units::default_Gamma;
    e.Qb = Qb;
    e.Qc = Qc;
    return system_from_effective(e, SystemParams{});
}

Variant variant(std::string label, double Qb21, double Qc21, double Gamma21 = 0.0) {
    return Variant{std::move(label), {{"Qb21", Qb21}, {"Qc21", Qc21}, {"Gamma21", Gamma21}}};
}

std::vector<Variant> fig2_variants() {
    return {variant("solid", 0, 0), variant("dashed", 1, 2), variant("dashdot", 1, 8)};
}

// The fig5 labels quote Gamma21 as (gamma1 - gamma2)/Gamma, the opposite
// sign of EffectiveParams (see docs/conventions.md), hence the negated values.
std::vector<Variant> fig5_variants() {
    return {variant("fig5_solid", 0, 0, 0.0), variant("fig5_g0.1", 1, 6, -0.1), variant("fig5_g0.4", 1, 6, -0.4)};
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"fig2", "fig3", "fig4", "fig5", "certify"};
    return names;
}

RunConfig make_preset(const std::string& name) {
    RunConfig cfg;
    cfg.name = name;
    if (name == "fig2") {
        cfg.system = effective_base(20, 20);
        cfg.variants = fig2_variants();
    } else if (name == "fig3") {
        EffectiveParams e = effective_params(effective_base(20, 20));
        e.Qb21 = 1;
        e.Qc21 = 8;
        cfg.system = system_from_effective(e, SystemParams{});
        cfg.sweep = SweepSpec{"eps2", {2e-7, 4e-7, 8e-7}};
        cfg.analysis.trend = true;
    } else if (name == "fig4") {
        cfg.system = effective_base(15, 20);
        cfg.sweep = SweepSpec{"Gamma21", {0.0, 0.2, 0.4}};
        cfg.analysis.trend = true;
    } else if (name == "fig5") {
        cfg.system = effective_base(15, 20);
        cfg.variants = fig5_variants();
    } else if (name == "certify") {
        cfg.system = effective_base(20, 20);
        cfg.variants = fig2_variants();
        for (auto v : fig5_variants()) {
            v.set["Qb"] = 15;
            cfg.variants.push_back(v);
        }
        cfg.certify.enabled = true;
    } else {
        throw ConfigError("preset: unknown name '" + name + "'");
    }
    return cfg;
}

}  // namespace fanoeit
