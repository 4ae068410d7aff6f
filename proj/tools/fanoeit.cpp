// fanoeit: spectra, window reports, certification and dynamics cross-checks.
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "fanoeit/cli.hpp"

namespace {

using namespace fanoeit;

json summary(const RunConfig& cfg, const RunResult& r) {
    json curves = json::array();
    for (const auto& c : r.curves) {
        json x = {{"label", c.curve.label}, {"points", c.spectrum.points.size()}, {"windows", c.windows.windows.size()}};
        if (c.certification) {
            x["certification_pass"] = c.certification->pass;
            x["max_deviation"] = c.certification->max_deviation;
        }
        if (c.dynamics) {
            x["dynamics_pass"] = c.dynamics->pass;
            x["dynamics_max_relative_error"] = c.dynamics->max_relative_error;
        }
        curves.push_back(std::move(x));
    }
    json files = json::array();
    for (const auto& f : r.files) files.push_back(f.string());
    json out = {{"name", cfg.name}, {"curves", curves}, {"files", files}};
    if (r.trend) out["trend"] = to_json(*r.trend);
    return out;
}

int fail(const char* kind, const std::string& message, int code) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fano-EIT susceptibility spectra and checks"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir = ".", preset;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    double depth_fraction = 0.0;
    bool dynamics = false, print_config = false;

    app.add_option("--out-dir", out_dir, "Output directory");
    app.add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    auto* depth_opt = app.add_option("--depth-fraction", depth_fraction, "Window threshold relative to the flanking maxima")
                          ->check(CLI::Range(0.0, 1.0));
    app.add_flag("--dynamics", dynamics, "Also run the dynamics cross-check");
    app.add_flag("--print-config", print_config, "Print the resolved config and exit");

    auto* run_cmd = app.add_subcommand("run", "Run a JSON config");
    run_cmd->add_option("--config", config_path, "Config file")->required();
    auto* preset_cmd = app.add_subcommand("preset", "Run a built-in preset");
    preset_cmd->add_option("name", preset, "fig2, fig3, fig4, fig5 or certify")->required();
    auto* certify_cmd = app.add_subcommand("certify", "Certify the closed form against the oracles");
    certify_cmd->add_option("--config", config_path, "Config file (default: the certify preset)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return fail("config", e.what(), 2);
    }

    try {
        RunConfig cfg;
        if (*run_cmd) {
            cfg = load_config_file(config_path);
        } else if (*preset_cmd) {
            cfg = make_preset(preset);
        } else {
            cfg = config_path.empty() ? make_preset("certify") : load_config_file(config_path);
            cfg.certify.enabled = true;
        }
        if (dynamics) cfg.dynamics.enabled = true;
        if (print_config) {
            std::cout << to_json(cfg).dump(2) << '\n';
            return 0;
        }
        RunOptions opt;
        opt.out_dir = out_dir;
        opt.threads = threads;
        if (*depth_opt) opt.depth_fraction = depth_fraction;
        const RunResult r = run(cfg, opt);
        std::cout << summary(cfg, r).dump(2) << '\n';
        if (*certify_cmd) {
            for (const auto& c : r.curves)
                if (c.certification && !c.certification->pass) return 1;
        }
        return 0;
    } catch (const ConfigError& e) {
        return fail("config", e.what(), 2);
    } catch (const NumericalError& e) {
        return fail("numerical", e.what(), 3);
    } catch (const std::exception& e) {
        return fail("io", e.what(), 1);
    }
}
