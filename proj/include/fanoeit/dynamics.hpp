#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fanoeit/core.hpp"

namespace fanoeit {

enum class GridMode { densified, uniform };

// Sizes in units of Gamma.
struct GridLayout {
    GridMode mode = GridMode::densified;
    double core_half_width = 8.0;  // uniform fine spacing inside |x| <= this
    double core_fraction = 0.8;    // share of bins in the core
    double max_growth = 1.25;      // largest allowed ratio of neighbouring wing bins

    bool operator==(const GridLayout&) const = default;
};

struct ContinuumGrid {
    std::vector<double> bin_centers;  // a.u., offsets from the resonance
    std::vector<double> bin_weights;  // a.u.
    double span_lo = 0.0, span_hi = 0.0;
    double core_spacing = 0.0;  // bin width at the resonance, a.u.
    double core_half_width = 0.0;
};

ContinuumGrid build_grid(double W, std::size_t n_bins, const SystemParams& p, const GridLayout& layout = {});

struct DynamicsConfig {
    double W_over_gamma = 100.0;
    std::size_t n_bins = 8000;
    GridLayout layout;
    double eta_over_spacing = 2.0;  // bin damping, multiples of the core spacing
    double dt_gamma = 0.05;         // step, units of 1/Gamma
    double ramp_over_eta = 5.0;     // probe switch-on duration, units of 1/eta
    double check_interval_gamma = 6.283185307179586;
    double tolerance = 1e-6;
    double max_time_over_eta = 400.0;
    bool bound_state = true;  // explicit bound-state channel at the resonance
    // Combine runs at eta and 2 eta as 2 chi(eta) - chi(2 eta): removes the
    // leading O(eta) bias of the finite regulator.
    bool eta_extrapolation = true;
    bool trace = false;

    void validate() const;
    bool operator==(const DynamicsConfig&) const = default;
};

struct TracePoint {
    double time;
    cplx polarization;
    cplx rho_cb;
};

struct DynamicsState {
    std::vector<cplx> rho_Eb;  // per bin
    std::optional<cplx> rho_bound;
    cplx rho_cb{};
    double time = 0.0;
    double eta = 0.0;
    double dt = 0.0;
    std::size_t steps = 0;
    bool converged = false;
    std::vector<TracePoint> trace;
};

DynamicsState integrate_steady(const ContinuumGrid& grid, double omega, const SystemParams& p, const FieldParams& f,
                               const DynamicsConfig& cfg = {});

SusceptibilityPoint chi_from_dynamics(const DynamicsState& state, const ContinuumGrid& grid, const SystemParams& p,
                                      const FieldParams& f);

// Analytic susceptibility with the bound-state term dropped, for comparison
// against runs without the bound-state channel.
cplx chi_without_bound_state(double omega, const SystemParams& p, const FieldParams& f);

// One dynamics estimate at omega on the grid implied by cfg.
struct DynamicsEstimate {
    double omega = 0.0;
    cplx chi{};      // extrapolated when enabled, else raw
    cplx chi_raw{};  // at eta
    std::optional<cplx> chi_double_eta;
    double time = 0.0;
    std::size_t steps = 0;
    double eta = 0.0;
};

DynamicsEstimate estimate_chi(double omega, const SystemParams& p, const FieldParams& f, const DynamicsConfig& cfg);

struct ConvergenceStudy {
    double omega = 0.0;
    std::vector<std::size_t> n_bins;
    std::vector<cplx> chi;
    std::vector<double> successive_change;  // |chi_i+1 - chi_i| / |chi_i+1|
    bool monotone = false;
    cplx analytic{};
    double relative_error = 0.0;  // finest level vs analytic
};

// n_bins = cfg.n_bins * 2^-(doublings) ... cfg.n_bins.
ConvergenceStudy convergence_study(double omega, const SystemParams& p, const FieldParams& f,
                                   const DynamicsConfig& cfg, int doublings = 3);

struct DynamicsComparisonPoint {
    double omega = 0.0;
    cplx analytic{};
    cplx dynamics{};
    double relative_error = 0.0;
    cplx analytic_no_bound{};
    cplx dynamics_no_bound{};
    double relative_error_no_bound = 0.0;
};

struct DynamicsComparison {
    std::vector<DynamicsComparisonPoint> points;
    double max_relative_error = 0.0;
    double tolerance = 0.02;
    bool pass = false;
};

DynamicsComparison compare_dynamics(const std::vector<double>& omegas, const SystemParams& p, const FieldParams& f,
                                    const DynamicsConfig& cfg, bool with_no_bound = true, unsigned threads = 1);

}  // namespace fanoeit
