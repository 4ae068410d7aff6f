#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>

#include <fmt/format.h>
#include <fmt/os.h>

#include "fanoeit/cli.hpp"

namespace fanoeit {

namespace {

double parse_double(std::string_view s, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError(fmt::format("spectrum csv line {}: bad number '{}'", line, s));
    return v;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::string level_pair(Level j, Level k) {
    return std::string(to_string(j)) + std::string(to_string(k));
}

}  // namespace

void write_spectrum_csv(const Spectrum& s, const std::filesystem::path& path) {
    const double G = s.system.Gamma();
    auto out = fmt::output_file(path.string());
    out.print("omega_over_gamma,re_chi,im_chi\n");
    for (const auto& pt : s.points) out.print("{},{},{}\n", pt.omega / G, pt.chi.real(), pt.chi.imag());
}

SpectrumTable read_spectrum_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    SpectrumTable t;
    std::string line;
    std::size_t n = 0;
    if (!std::getline(in, line) || line != "omega_over_gamma,re_chi,im_chi")
        throw ConfigError("spectrum csv: unexpected header in " + path.string());
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        const auto a = line.find(',');
        const auto b = line.find(',', a + 1);
        if (a == std::string::npos || b == std::string::npos)
            throw ConfigError(fmt::format("spectrum csv line {}: expected three columns", n));
        const std::string_view sv(line);
        t.omega_over_gamma.push_back(parse_double(sv.substr(0, a), n));
        const double re = parse_double(sv.substr(a + 1, b - a - 1), n);
        const double im = parse_double(sv.substr(b + 1), n);
        t.chi.emplace_back(re, im);
    }
    return t;
}

Spectrum to_spectrum(const SpectrumTable& t, const SystemParams& p, const FieldParams& f) {
    Spectrum s{{}, p, f};
    s.points.reserve(t.chi.size());
    for (std::size_t i = 0; i < t.chi.size(); ++i) s.points.push_back({t.omega_over_gamma[i] * p.Gamma(), t.chi[i]});
    return s;
}

json to_json(const WindowReport& r, double Gamma) {
    json ws = json::array();
    for (const auto& w : r.windows) {
        ws.push_back({{"center", w.center / Gamma},
                      {"width", w.width / Gamma},
                      {"left_edge", w.left_edge / Gamma},
                      {"right_edge", w.right_edge / Gamma},
                      {"depth", w.depth},
                      {"minimum", w.minimum},
                      {"reference", w.reference},
                      {"points", w.points},
                      {"coalesced_with_next", w.coalesced_with_next}});
    }
    json iv = json::array();
    for (const auto& i : r.anomalous_intervals) iv.push_back(json::array({i.lo / Gamma, i.hi / Gamma}));
    return {{"windows", ws},
            {"anomalous_dispersion", iv},
            {"background", r.background},
            {"depth_fraction", r.depth_fraction}};
}

json to_json(const TrendReport& r) {
    json vs = json::object();
    for (const auto& v : r.verdicts)
        vs[v.observable] = {{"trend", std::string(to_string(v.trend))}, {"values", v.values}, {"spread", v.spread}};
    return {{"key", r.key}, {"counts", r.counts}, {"structural_change", r.structural_change}, {"verdicts", vs}};
}

json to_json(const CertificationReport& r, double Gamma) {
    json entries = json::array();
    for (const auto& e : r.entries) {
        json x = {{"pair", level_pair(e.j, e.k)}, {"omega_over_gamma", e.omega / Gamma}, {"skipped", e.skipped}};
        if (!e.skipped) {
            x["analytic"] = complex_json(e.analytic);
            x["quadrature"] = complex_json(e.quadrature);
            x["residue"] = e.residue ? complex_json(*e.residue) : json(nullptr);
            x["deviation"] = e.deviation;
            x["deviation_quadrature"] = e.deviation_quadrature;
            x["deviation_residue"] = e.deviation_residue ? json(*e.deviation_residue) : json(nullptr);
            x["residual"] = e.residual;
            x["ladder_monotone"] = e.ladder_monotone;
        }
        entries.push_back(std::move(x));
    }
    return {{"pass", r.pass},
            {"threshold", r.threshold},
            {"max_deviation", r.max_deviation},
            {"max_at_omega_over_gamma", r.max_at_omega / Gamma},
            {"max_pair", level_pair(r.max_j, r.max_k)},
            {"skipped", r.skipped},
            {"residue_unavailable", r.residue_unavailable},
            {"ladder_flags", r.ladder_flags},
            {"entries", entries}};
}

json to_json(const DynamicsComparison& d, const std::vector<ConvergenceStudy>& studies, double Gamma) {
    json pts = json::array();
    for (const auto& p : d.points) {
        pts.push_back({{"omega_over_gamma", p.omega / Gamma},
                       {"analytic", complex_json(p.analytic)},
                       {"dynamics", complex_json(p.dynamics)},
                       {"relative_error", p.relative_error},
                       {"analytic_no_bound_state", complex_json(p.analytic_no_bound)},
                       {"dynamics_no_bound_state", complex_json(p.dynamics_no_bound)},
                       {"relative_error_no_bound_state", p.relative_error_no_bound}});
    }
    json conv = json::array();
    for (const auto& s : studies) {
        json chi = json::array();
        for (const auto& c : s.chi) chi.push_back(complex_json(c));
        conv.push_back({{"omega_over_gamma", s.omega / Gamma},
                        {"n_bins", s.n_bins},
                        {"chi", chi},
                        {"successive_change", s.successive_change},
                        {"monotone", s.monotone},
                        {"analytic", complex_json(s.analytic)},
                        {"relative_error", s.relative_error}});
    }
    return {{"pass", d.pass},
            {"tolerance", d.tolerance},
            {"max_relative_error", d.max_relative_error},
            {"points", pts},
            {"convergence", conv}};
}

}  // namespace fanoeit
