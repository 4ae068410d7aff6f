#include <atomic>
#include <fstream>
#include <mutex>
#include <thread>

#include "fanoeit/cli.hpp"

namespace fanoeit {

namespace {

// Runs f(i) for i in [0, n) on up to `threads` workers; rethrows the first error.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F f) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex m;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(m);
                    if (!error) error = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::filesystem::path curve_path(const std::string& base, const std::string& label, bool single) {
    if (single) return base;
    std::filesystem::path p(base);
    return p.parent_path() / (p.stem().string() + "_" + label + p.extension().string());
}

json curve_header(const Curve& c) {
    json set = json::object();
    for (const auto& [k, v] : c.set) set[k] = v;
    const auto e = effective_params(c.system);
    return {{"label", c.label},
            {"set", set},
            {"effective",
             {{"Gamma", e.Gamma}, {"Gamma21", e.Gamma21}, {"Qb", e.Qb}, {"Qc", e.Qc}, {"Qb21", e.Qb21}, {"Qc21", e.Qc21}}},
            {"eps2", c.field.eps2}};
}

void write_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw Error("write failed: " + path.string());
}

}  // namespace

RunResult compute(const RunConfig& cfg, const RunOptions& opt) {
    const double frac = opt.depth_fraction.value_or(cfg.analysis.depth_fraction);
    if (!(frac > 0 && frac < 1)) throw ConfigError("depth_fraction: must lie in (0, 1)");
    RunResult res;
    for (const auto& c : expand_curves(cfg)) {
        CurveResult cr{c, {}, {}, {}, {}, {}};
        const DetuningGrid grid = cfg.grid.build(c.system.Gamma());
        cr.spectrum = spectrum(grid, c.system, c.field);
        cr.windows = find_windows(cr.spectrum, frac);
        if (cfg.certify.enabled) {
            CertifyOptions co;
            co.threshold = cfg.certify.threshold;
            co.exclusion_over_gamma = cfg.certify.exclusion_over_gamma;
            co.use_residue = cfg.certify.residue;
            co.threads = opt.threads;
            cr.certification = certify_analytic(grid, c.system, cfg.oracle, co);
        }
        if (cfg.dynamics.enabled) {
            std::vector<double> omegas;
            for (double w : cfg.dynamics.omegas_over_gamma) omegas.push_back(w * c.system.Gamma());
            cr.dynamics = compare_dynamics(omegas, c.system, c.field, cfg.dynamics.config,
                                           cfg.dynamics.compare_without_bound_state, opt.threads);
            if (cfg.dynamics.convergence_doublings > 0) {
                cr.convergence.resize(omegas.size());
                parallel_for(omegas.size(), opt.threads, [&](std::size_t i) {
                    cr.convergence[i] = convergence_study(omegas[i], c.system, c.field, cfg.dynamics.config,
                                                          cfg.dynamics.convergence_doublings);
                });
            }
        }
        res.curves.push_back(std::move(cr));
    }
    if ((cfg.sweep || cfg.analysis.trend) && res.curves.size() >= 2) {
        std::vector<WindowReport> reports;
        for (const auto& c : res.curves) reports.push_back(c.windows);
        res.trend = window_trend(reports, cfg.sweep ? cfg.sweep->parameter : "variant", cfg.analysis.trend_tolerance);
    }
    return res;
}

RunResult run(const RunConfig& cfg, const RunOptions& opt) {
    RunResult res = compute(cfg, opt);
    const bool single = res.curves.size() == 1;
    try {
        std::filesystem::create_directories(opt.out_dir);
        auto target = [&](const std::filesystem::path& rel) {
            const auto p = opt.out_dir / rel;
            if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
            res.files.push_back(p);
            return p;
        };
        json windows = {{"name", cfg.name}, {"curves", json::array()}};
        json cert = {{"name", cfg.name}, {"pass", true}, {"curves", json::array()}};
        json dyn = {{"name", cfg.name}, {"pass", true}, {"curves", json::array()}};
        for (const auto& c : res.curves) {
            const double G = c.curve.system.Gamma();
            write_spectrum_csv(c.spectrum, target(curve_path(cfg.outputs.spectrum, c.curve.label, single)));
            json w = curve_header(c.curve);
            w["report"] = to_json(c.windows, G);
            windows["curves"].push_back(std::move(w));
            if (c.certification) {
                json x = curve_header(c.curve);
                x["report"] = to_json(*c.certification, G);
                cert["pass"] = cert["pass"].get<bool>() && c.certification->pass;
                cert["curves"].push_back(std::move(x));
            }
            if (c.dynamics) {
                json x = curve_header(c.curve);
                x["report"] = to_json(*c.dynamics, c.convergence, G);
                dyn["pass"] = dyn["pass"].get<bool>() && c.dynamics->pass;
                dyn["curves"].push_back(std::move(x));
            }
        }
        windows["trend"] = res.trend ? to_json(*res.trend) : json(nullptr);
        write_json(windows, target(cfg.outputs.windows));
        if (cfg.certify.enabled) write_json(cert, target(cfg.outputs.certification));
        if (cfg.dynamics.enabled) write_json(dyn, target(cfg.outputs.dynamics));
    } catch (...) {
        for (const auto& f : res.files) {
            std::error_code ec;
            std::filesystem::remove(f, ec);
        }
        throw;
    }
    return res;
}

}  // namespace fanoeit
