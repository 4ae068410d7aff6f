#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fanoeit/cli.hpp"

using namespace fanoeit;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("fanoeit_test_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string error_of(const std::string& text) {
    try {
        load_config_text(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FANOEIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("config defaults") {
    const auto c = load_config_text("{}");
    CHECK(c.system == SystemParams{});
    CHECK(c.system.Gamma() == 1e-9);
    CHECK(c.system.gamma_cb == doctest::Approx(1e-12));
    CHECK(c.field.eps2 == 4e-7);
    CHECK(c.field.delta_c == 0.0);
    CHECK(c.grid.min_over_gamma == -10);
    CHECK(c.grid.count == 4001);
    CHECK(c.grid.exclusion_over_gamma == 1e-3);
    CHECK_FALSE(c.sweep.has_value());
    CHECK(expand_curves(c).size() == 1);
}

TEST_CASE("config errors carry the field path") {
    CHECK(error_of(R"({"system": {"gamma1": -1}})").find("system.gamma1") != std::string::npos);
    CHECK(error_of(R"({"system": {"bogus": 1}})").find("system.bogus: unknown key") != std::string::npos);
    CHECK(error_of(R"({"colour": 1})").find("colour: unknown key") != std::string::npos);
    CHECK(error_of(R"({"grid": {"count": 50}})").find("grid.count") != std::string::npos);
    CHECK(error_of(R"({"grid": {"count": 1.5}})").find("grid.count") != std::string::npos);
    CHECK(error_of(R"({"sweep": {"parameter": "eps2", "values": [1e-7, 3e-7, 2e-7]}})").find("sweep.values") !=
          std::string::npos);
    CHECK(error_of(R"({"sweep": {"parameter": "nope", "values": [1]}})").find("sweep.parameter") != std::string::npos);
    CHECK(error_of(R"({"outputs": {"windows": "a.csv", "spectrum": "a.csv"}})").find("outputs") != std::string::npos);
    CHECK(error_of(R"({"oracle": {"limit_order": "sideways"}})").find("oracle.limit_order") != std::string::npos);
    CHECK(error_of(R"({"dynamics": {"n_bins": 2000}})").find("dynamics.n_bins") != std::string::npos);
    CHECK(error_of(R"({"system": {"effective": {"Qb": 3}, "q1b": 2}})").find("system.q1b") != std::string::npos);
    CHECK(error_of(R"({"variants": [{"label": "a"}, {"label": "a"}]})").find("variants[1].label") != std::string::npos);
    CHECK(error_of(R"({"variants": [{"label": "a", "set": {"Gamma21": 1.5}}]})").find("curve") !=
          std::string::npos);
    CHECK(error_of("{ not json").find("malformed") != std::string::npos);
    CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("effective parameter block") {
    const auto c = load_config_text(R"({"system": {"effective": {"Qb": 15, "Qc": 20, "Qb21": 1, "Qc21": 6,
                                        "Gamma21": 0.2, "Gamma": 2e-9}}})");
    const auto e = effective_params(c.system);
    CHECK(e.Qb == doctest::Approx(15));
    CHECK(e.Qc21 == doctest::Approx(6));
    CHECK(e.Gamma21 == doctest::Approx(0.2));
    CHECK(c.system.gamma_cb == doctest::Approx(2e-12));
}

TEST_CASE("config round trip") {
    for (const auto& name : preset_names()) {
        auto c = make_preset(name);
        c.dynamics.enabled = true;
        c.oracle.limit_order = LimitOrder::finite_eta;
        const auto back = load_config(to_json(c));
        CHECK(back == c);
        CHECK(to_json(back).dump() == to_json(c).dump());
    }
}

TEST_CASE("presets") {
    CHECK(preset_names() == std::vector<std::string>{"fig2", "fig3", "fig4", "fig5", "certify"});
    CHECK_THROWS_AS(make_preset("fig9"), ConfigError);
    const auto fig2 = expand_curves(make_preset("fig2"));
    REQUIRE(fig2.size() == 3);
    CHECK(effective_params(fig2[2].system).Qc21 == doctest::Approx(8));
    const auto fig3 = expand_curves(make_preset("fig3"));
    REQUIRE(fig3.size() == 3);
    CHECK(fig3[2].field.eps2 == 8e-7);
    const auto fig4 = expand_curves(make_preset("fig4"));
    CHECK(effective_params(fig4[2].system).Gamma21 == doctest::Approx(0.4));
    CHECK(effective_params(fig4[2].system).Qb == doctest::Approx(15));
    CHECK(make_preset("certify").certify.enabled);
}

TEST_CASE("apply_parameter") {
    SystemParams p;
    FieldParams f;
    apply_parameter(p, f, "Gamma21", 0.3);
    const auto e = effective_params(p);
    CHECK(e.Gamma21 == doctest::Approx(0.3));
    CHECK(e.Qb == doctest::Approx(20));
    CHECK(e.Qc21 == doctest::Approx(8));
    apply_parameter(p, f, "delta_c", 2e-10);
    CHECK(f.delta_c == 2e-10);
    CHECK_THROWS_AS(apply_parameter(p, f, "colour", 1), ConfigError);
}

TEST_CASE("spectrum csv round trip is exact") {
    const auto dir = scratch("csv");
    const SystemParams p;
    const FieldParams f;
    const auto s = spectrum(DetuningGrid::uniform(-10, 10, 1001, 1e-3, p.Gamma()), p, f);
    write_spectrum_csv(s, dir / "s.csv");
    const std::string text = slurp(dir / "s.csv");
    CHECK(text.rfind("omega_over_gamma,re_chi,im_chi\n", 0) == 0);
    CHECK(text.back() == '\n');
    const auto t = read_spectrum_csv(dir / "s.csv");
    REQUIRE(t.chi.size() == s.points.size());
    const auto back = to_spectrum(t, p, f);
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        CHECK(back.points[i].chi == s.points[i].chi);
        CHECK(t.omega_over_gamma[i] == s.points[i].omega / p.Gamma());
    }
    write_spectrum_csv(back, dir / "t.csv");
    CHECK(slurp(dir / "t.csv") == text);
}

TEST_CASE("json reports round trip") {
    const auto s = spectrum(DetuningGrid::uniform(-10, 10, 4001, 1e-3, 1e-9), SystemParams{}, FieldParams{});
    const auto r = find_windows(s);
    const json j = to_json(r, 1e-9);
    const json back = json::parse(j.dump());
    CHECK(back == j);
    REQUIRE(back["windows"].size() == r.windows.size());
    CHECK(back["windows"][0]["width"].get<double>() == r.windows[0].width / 1e-9);
}

TEST_CASE("runs are deterministic and write the requested files") {
    auto c = make_preset("fig2");
    c.grid.count = 2001;
    const auto a = scratch("det_a"), b = scratch("det_b");
    RunOptions o;
    o.threads = 2;
    o.out_dir = a;
    const auto ra = run(c, o);
    o.out_dir = b;
    run(c, o);
    CHECK(ra.files.size() == 4);
    for (const auto& f : ra.files) {
        REQUIRE(fs::exists(f));
        CHECK(slurp(f) == slurp(b / fs::relative(f, a)));
    }
    const auto w = json::parse(slurp(a / "windows.json"));
    CHECK(w["curves"].size() == 3);
    CHECK(w["curves"][0]["report"]["windows"].size() == 1);
}

TEST_CASE("failed runs leave nothing behind") {
    auto c = make_preset("fig2");
    c.grid.count = 101;  // too coarse for the narrow windows
    const auto dir = scratch("fail");
    RunOptions o;
    o.out_dir = dir;
    CHECK_THROWS_AS(run(c, o), NumericalError);
    CHECK(fs::is_empty(dir));
}

TEST_CASE("command line exit codes") {
    const auto dir = scratch("exe");
    {
        std::ofstream(dir / "bad.json") << R"({"grid": {"count": 10}})";
        std::ofstream(dir / "coarse.json") << R"({"grid": {"count": 101}})";
        std::ofstream(dir / "ok.json") << R"({"name": "small", "grid": {"count": 2001}})";
    }
    const std::string out = " --out-dir " + (dir / "out").string();
    CHECK(run_cli("run --config " + (dir / "bad.json").string() + out) == 2);
    CHECK(run_cli("preset fig9" + out) == 2);
    CHECK(run_cli("run --config " + (dir / "missing.json").string() + out) == 2);
    CHECK(run_cli("--threads 0 run --config " + (dir / "ok.json").string() + out) == 2);
    CHECK(run_cli("run --config " + (dir / "coarse.json").string() + out) == 3);
    CHECK(run_cli("run --config " + (dir / "ok.json").string() + out) == 0);
    CHECK(fs::exists(dir / "out" / "spectrum.csv"));
    CHECK(fs::exists(dir / "out" / "windows.json"));
}
