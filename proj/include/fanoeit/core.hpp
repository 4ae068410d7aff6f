#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include "fanoeit/errors.hpp"
#include "fanoeit/units.hpp"

namespace fanoeit {

using cplx = std::complex<double>;

enum class Level { b, c };

std::string_view to_string(Level level);

// Microscopic inputs. Energies and dipoles in atomic units.
struct SystemParams {
    double gamma1 = 0.5 * units::default_Gamma;
    double gamma2 = 0.5 * units::default_Gamma;
    double q1b = 19.0;
    double q2b = 21.0;
    double q1c = 12.0;
    double q2c = 28.0;
    double Db = 2.0;
    double Dc = 3.0;
    double gamma_cb = 1e-3 * units::default_Gamma;
    double density_N = units::default_density;

    double dipole(Level level) const { return level == Level::b ? Db : Dc; }
    double Gamma() const { return gamma1 + gamma2; }

    // Throws ConfigError naming the offending field.
    void validate() const;

    bool operator==(const SystemParams&) const = default;
};

struct FieldParams {
    double eps2 = 4e-7;
    double delta_c = 0.0;
    double eps1 = 1e-10;  // probe, dynamics only

    void validate() const;

    bool operator==(const FieldParams&) const = default;
};

struct EffectiveParams {
    double Qb = 0.0;
    double Qc = 0.0;
    double Qb21 = 0.0;
    double Qc21 = 0.0;
    double Gamma = 0.0;
    double Gamma21 = 0.0;

    double Q(Level level) const { return level == Level::b ? Qb : Qc; }
    double Q21(Level level) const { return level == Level::b ? Qb21 : Qc21; }

    bool operator==(const EffectiveParams&) const = default;
};

EffectiveParams effective_params(const SystemParams& p);

// Inverse of effective_params: picks gamma1, gamma2 and q's realizing eff.
// Dipoles, gamma_cb and density are copied from `base`.
SystemParams system_from_effective(const EffectiveParams& eff, const SystemParams& base = {});

enum class FanoForm {
    automatic,  // cancelled single-pole form when E1 == E2
    naive       // always the two-level expression, even when it is 0/0
};

// Ratio between structured- and flat-continuum dipole elements for lower
// level j, two autoionizing levels at E1 and E2 with widths gamma1, gamma2.
cplx fano_ratio(double E, double E1, double E2, double gamma1, double gamma2, double q1, double q2,
                FanoForm form = FanoForm::automatic);

enum class Method { analytic, quadrature, residue, dynamics };

std::string_view to_string(Method method);

struct RValue {
    cplx value{};
    Method method = Method::analytic;
    double error_estimate = 0.0;  // absolute
};

// Sign of the Gamma21 cross term in the bound-state (1/omega) numerator.
// `standard` is (Qj21 - Gamma21 Qj)(Qk21 - Gamma21 Qk), which is what the
// integral definition produces for Gamma21 = (gamma2 - gamma1)/Gamma.
// `flipped` is the same expression with Gamma21 -> -Gamma21, kept for
// comparisons against that transcription.
enum class BoundStateSign { standard, flipped };

// Closed-form R_jk(omega) in the degenerate limit, flat-continuum dipoles
// Dj, Dk. Throws PoleError at omega = 0 when the 1/omega term is present.
RValue r_jk_analytic(Level j, Level k, double omega, const EffectiveParams& eff, double Dj, double Dk,
                     BoundStateSign sign = BoundStateSign::standard);

// The four-term single-resonance expression (no bound-state term).
RValue r_jk_reduced(Level j, Level k, double omega, const EffectiveParams& eff, double Dj, double Dk);

// Numerator of the bound-state term, without the 1/((1 - Gamma21^2) omega) factor.
double bound_state_numerator(Level j, Level k, const EffectiveParams& eff,
                             BoundStateSign sign = BoundStateSign::standard);

struct SusceptibilityPoint {
    double omega = 0.0;
    cplx chi{};

    bool operator==(const SusceptibilityPoint&) const = default;
};

struct DetuningGrid {
    std::vector<double> omega_values;  // a.u., strictly increasing
    double omega_min_exclusion = 0.0;

    // count points spanning [lo, hi] (units of Gamma), minus the excluded band.
    static DetuningGrid uniform(double lo_over_gamma, double hi_over_gamma, std::size_t count,
                                double exclusion_over_gamma, double Gamma);

    void validate() const;
};

struct Spectrum {
    std::vector<SusceptibilityPoint> points;
    SystemParams system;
    FieldParams field;
};

SusceptibilityPoint susceptibility(double omega, const SystemParams& p, const FieldParams& f);

// Same, from precomputed R_bb, R_bc, R_cb, R_cc.
cplx chi_from_r(double omega, cplx Rbb, cplx Rbc, cplx Rcb, cplx Rcc, const SystemParams& p,
                const FieldParams& f);

Spectrum spectrum(const DetuningGrid& grid, const SystemParams& p, const FieldParams& f);

}  // namespace fanoeit
