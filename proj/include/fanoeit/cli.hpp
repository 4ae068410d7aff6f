#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fanoeit/analysis.hpp"
#include "fanoeit/core.hpp"
#include "fanoeit/dynamics.hpp"
#include "fanoeit/oracle.hpp"

namespace fanoeit {

using json = nlohmann::json;

struct GridSpec {
    double min_over_gamma = -10.0;
    double max_over_gamma = 10.0;
    std::size_t count = 4001;
    double exclusion_over_gamma = 1e-3;

    DetuningGrid build(double Gamma) const;
    bool operator==(const GridSpec&) const = default;
};

// Parameter labels usable in sweeps and variants. Effective-parameter labels
// (Gamma21, Qb, Qc, Qb21, Qc21) keep the other effective parameters fixed.
const std::vector<std::string>& parameter_labels();
void apply_parameter(SystemParams& p, FieldParams& f, const std::string& label, double value);

struct SweepSpec {
    std::string parameter;
    std::vector<double> values;
    bool operator==(const SweepSpec&) const = default;
};

struct Variant {
    std::string label;
    std::map<std::string, double> set;
    bool operator==(const Variant&) const = default;
};

struct OutputPaths {
    std::string spectrum = "spectrum.csv";
    std::string windows = "windows.json";
    std::string certification = "certification.json";
    std::string dynamics = "dynamics.json";
    bool operator==(const OutputPaths&) const = default;
};

struct CertifySpec {
    bool enabled = false;
    double threshold = 1e-4;
    double exclusion_over_gamma = 1e-2;
    bool residue = true;
    bool operator==(const CertifySpec&) const = default;
};

struct DynamicsSpec {
    bool enabled = false;
    DynamicsConfig config;
    std::vector<double> omegas_over_gamma = {-2.0, -0.7, -0.25, 0.3, 1.2};
    int convergence_doublings = 3;
    bool compare_without_bound_state = true;
    bool operator==(const DynamicsSpec&) const = default;
};

struct AnalysisSpec {
    double depth_fraction = 0.1;
    bool trend = false;  // trend verdicts across curves (always on for sweeps)
    double trend_tolerance = 0.02;
    bool operator==(const AnalysisSpec&) const = default;
};

struct RunConfig {
    std::string name = "run";
    SystemParams system;
    FieldParams field;
    GridSpec grid;
    std::optional<SweepSpec> sweep;
    std::vector<Variant> variants;
    OutputPaths outputs;
    OracleConfig oracle;
    CertifySpec certify;
    DynamicsSpec dynamics;
    AnalysisSpec analysis;

    bool operator==(const RunConfig&) const = default;
};

// Throws ConfigError with the JSON path of the offending field.
RunConfig load_config(const json& doc);
RunConfig load_config_text(const std::string& text);
RunConfig load_config_file(const std::filesystem::path& path);
json to_json(const RunConfig& cfg);

// One spectrum to compute: the base parameters with a sweep value or a
// variant applied.
struct Curve {
    std::string label;
    std::map<std::string, double> set;
    SystemParams system;
    FieldParams field;
};

std::vector<Curve> expand_curves(const RunConfig& cfg);

const std::vector<std::string>& preset_names();
RunConfig make_preset(const std::string& name);

struct RunOptions {
    std::filesystem::path out_dir = ".";
    unsigned threads = 1;
    std::optional<double> depth_fraction;
};

struct CurveResult {
    Curve curve;
    Spectrum spectrum;
    WindowReport windows;
    std::optional<CertificationReport> certification;
    std::optional<DynamicsComparison> dynamics;
    std::vector<ConvergenceStudy> convergence;
};

struct RunResult {
    std::vector<CurveResult> curves;
    std::optional<TrendReport> trend;
    std::vector<std::filesystem::path> files;
};

// Computes everything the config asks for, without touching the filesystem.
RunResult compute(const RunConfig& cfg, const RunOptions& opt = {});

// compute() plus writing the outputs. On any error, files written so far
// are removed and the error rethrown.
RunResult run(const RunConfig& cfg, const RunOptions& opt = {});

void write_spectrum_csv(const Spectrum& s, const std::filesystem::path& path);

struct SpectrumTable {
    std::vector<double> omega_over_gamma;
    std::vector<cplx> chi;
};

SpectrumTable read_spectrum_csv(const std::filesystem::path& path);
// Rebuilds a Spectrum (omega in a.u.) from a table.
Spectrum to_spectrum(const SpectrumTable& t, const SystemParams& p, const FieldParams& f);

json to_json(const WindowReport& r, double Gamma);
json to_json(const TrendReport& r);
json to_json(const CertificationReport& r, double Gamma);
json to_json(const DynamicsComparison& d, const std::vector<ConvergenceStudy>& studies, double Gamma);

}  // namespace fanoeit
