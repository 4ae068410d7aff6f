#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fanoeit/core.hpp"

namespace fanoeit {

enum class LimitOrder {
    plemelj_first,  // eta -> 0 exactly at every splitting, then splitting -> 0
    finite_eta      // splitting -> 0 at fixed eta, then eta -> 0
};

enum class Profile {
    double_fano,
    flat  // both ratios replaced by 1; diagnostic only
};

// Splittings, truncation and the refinement floor are in units of Gamma.
struct OracleConfig {
    std::vector<double> delta_e_ladder = {1.0, 0.5, 0.25, 0.125, 0.0625};
    // Rungs are multiplied by min(1, ladder_omega_fraction * |omega| / Gamma);
    // the bound-state pole sits within ~splitting of omega = 0. 0 disables.
    double ladder_omega_fraction = 0.1;
    double truncation_L = 1e4;
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    double refinement_floor = 1e-12;
    int richardson_order = 2;
    std::size_t max_segments = 50000;
    LimitOrder limit_order = LimitOrder::plemelj_first;
    // finite_eta only: eta_i = eta_ladder[i] * min(1, |omega| / Gamma) * Gamma.
    std::vector<double> eta_ladder = {0.04, 0.02, 0.01};
    Profile profile = Profile::double_fano;

    void validate() const;
    bool operator==(const OracleConfig&) const = default;
};

struct ExtrapolationReport {
    std::vector<double> ladder;  // splittings actually used, a.u.
    std::vector<cplx> values_at_ladder;
    cplx extrapolated{};
    double residual = 0.0;
};

struct OracleResult {
    RValue r;
    ExtrapolationReport report;
    double quadrature_error = 0.0;  // worst rung, absolute
    double tail_bound = 0.0;        // leading 2|c1|/L estimate of the truncated tail
};

// Splittings used at this omega (a.u.).
std::vector<double> ladder_for(double omega, double Gamma, const OracleConfig& cfg);

// Finite-splitting value, eta -> 0 taken through the Plemelj split.
RValue r_jk_quadrature_rung(Level j, Level k, double omega, const SystemParams& p, double delta_e,
                            const OracleConfig& cfg = {});

// Quadrature oracle with the degenerate limit extrapolated.
OracleResult r_jk_quadrature(Level j, Level k, double omega, const SystemParams& p, const OracleConfig& cfg = {});

// All four pairs in the order bb, bc, cb, cc, sharing integrand evaluations.
std::array<OracleResult, 4> r_quadrature_all(double omega, const SystemParams& p, const OracleConfig& cfg = {});

enum class ContourSide { lower, upper };

struct ResidueOptions {
    ContourSide side = ContourSide::lower;
    Profile profile = Profile::double_fano;
    double min_separation = 1e-6;  // units of Gamma
};

// Residue-sum value of the same finite-splitting integral.
RValue r_jk_residue(Level j, Level k, double omega, const SystemParams& p, double delta_e,
                    const ResidueOptions& opt = {});

// Residue values on the ladder of cfg, extrapolated like the quadrature.
OracleResult r_jk_residue_ladder(Level j, Level k, double omega, const SystemParams& p, const OracleConfig& cfg = {});

struct CertifyOptions {
    double threshold = 1e-4;
    double exclusion_over_gamma = 1e-2;
    BoundStateSign sign = BoundStateSign::standard;
    bool use_residue = true;
    unsigned threads = 1;
};

struct CertificationEntry {
    Level j = Level::b, k = Level::b;
    double omega = 0.0;
    bool skipped = false;
    cplx analytic{};
    cplx quadrature{};
    std::optional<cplx> residue;
    double deviation_quadrature = 0.0;
    std::optional<double> deviation_residue;
    double deviation = 0.0;  // the larger of the two
    double residual = 0.0;   // quadrature extrapolation residual, relative
    bool ladder_monotone = true;
};

struct CertificationReport {
    std::vector<CertificationEntry> entries;
    double max_deviation = 0.0;
    double max_at_omega = 0.0;
    Level max_j = Level::b, max_k = Level::b;
    std::size_t skipped = 0;
    std::size_t residue_unavailable = 0;
    std::size_t ladder_flags = 0;
    double threshold = 1e-4;
    bool pass = false;
};

CertificationReport certify_analytic(const DetuningGrid& grid, const SystemParams& p, const OracleConfig& cfg = {},
                                     const CertifyOptions& opt = {});

}  // namespace fanoeit
