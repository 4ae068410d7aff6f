#include <cmath>
#include <string>

#include "fanoeit/core.hpp"

namespace fanoeit {

namespace {

void require(bool ok, const char* field, const char* what, double got) {
    if (!ok) {
        throw ConfigError(std::string(field) + ": " + what + " (got " + std::to_string(got) + ")");
    }
}

void require_finite(const char* field, double v) { require(std::isfinite(v), field, "must be finite", v); }

}  // namespace

std::string_view to_string(Level level) { return level == Level::b ? "b" : "c"; }

std::string_view to_string(Method method) {
    switch (method) {
        case Method::analytic: return "analytic";
        case Method::quadrature: return "quadrature";
        case Method::residue: return "residue";
        case Method::dynamics: return "dynamics";
    }
    return "unknown";
}

void SystemParams::validate() const {
    require_finite("system.gamma1", gamma1);
    require_finite("system.gamma2", gamma2);
    require(gamma1 > 0, "system.gamma1", "must be > 0", gamma1);
    require(gamma2 > 0, "system.gamma2", "must be > 0", gamma2);
    require_finite("system.q1b", q1b);
    require_finite("system.q2b", q2b);
    require_finite("system.q1c", q1c);
    require_finite("system.q2c", q2c);
    require_finite("system.Db", Db);
    require_finite("system.Dc", Dc);
    require_finite("system.gamma_cb", gamma_cb);
    require(gamma_cb >= 0, "system.gamma_cb", "must be >= 0", gamma_cb);
    require_finite("system.density_N", density_N);
    require(density_N >= 0, "system.density_N", "must be >= 0", density_N);
}

void FieldParams::validate() const {
    require_finite("field.eps2", eps2);
    require(eps2 >= 0, "field.eps2", "must be >= 0", eps2);
    require_finite("field.delta_c", delta_c);
    require_finite("field.eps1", eps1);
    require(eps1 >= 0, "field.eps1", "must be >= 0", eps1);
}

EffectiveParams effective_params(const SystemParams& p) {
    const double G = p.gamma1 + p.gamma2;
    if (G == 0.0) throw ConfigError("system: gamma1 + gamma2 must be nonzero");
    EffectiveParams e;
    e.Gamma = G;
    e.Gamma21 = (p.gamma2 - p.gamma1) / G;
    e.Qb = (p.q1b * p.gamma1 + p.q2b * p.gamma2) / G;
    e.Qc = (p.q1c * p.gamma1 + p.q2c * p.gamma2) / G;
    e.Qb21 = (p.q2b * p.gamma2 - p.q1b * p.gamma1) / G;
    e.Qc21 = (p.q2c * p.gamma2 - p.q1c * p.gamma1) / G;
    return e;
}

SystemParams system_from_effective(const EffectiveParams& eff, const SystemParams& base) {
    if (!(eff.Gamma > 0)) throw ConfigError("effective.Gamma: must be > 0");
    if (!(std::abs(eff.Gamma21) < 1)) throw ConfigError("effective.Gamma21: must satisfy |Gamma21| < 1");
    SystemParams p = base;
    const double lo = 1.0 - eff.Gamma21;
    const double hi = 1.0 + eff.Gamma21;
    p.gamma1 = 0.5 * eff.Gamma * lo;
    p.gamma2 = 0.5 * eff.Gamma * hi;
    p.q1b = (eff.Qb - eff.Qb21) / lo;
    p.q2b = (eff.Qb + eff.Qb21) / hi;
    p.q1c = (eff.Qc - eff.Qc21) / lo;
    p.q2c = (eff.Qc + eff.Qc21) / hi;
    return p;
}

DetuningGrid DetuningGrid::uniform(double lo, double hi, std::size_t count, double exclusion, double Gamma) {
    if (count < 2) throw ConfigError("grid.count: must be >= 2");
    if (!(hi > lo)) throw ConfigError("grid: max must exceed min");
    if (!(exclusion >= 0)) throw ConfigError("grid.exclusion: must be >= 0");
    DetuningGrid g;
    g.omega_min_exclusion = exclusion * Gamma;
    g.omega_values.reserve(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        // Symmetric grids hit 0 exactly.
        const double t = (i + 1 == count) ? hi : lo + step * static_cast<double>(i);
        if (std::abs(t) < exclusion) continue;
        g.omega_values.push_back(t * Gamma);
    }
    return g;
}

void DetuningGrid::validate() const {
    for (std::size_t i = 0; i < omega_values.size(); ++i) {
        if (!std::isfinite(omega_values[i])) throw ConfigError("grid: non-finite omega");
        if (std::abs(omega_values[i]) < omega_min_exclusion)
            throw ConfigError("grid: point inside the excluded band around omega = 0");
        if (i > 0 && !(omega_values[i] > omega_values[i - 1]))
            throw ConfigError("grid: omega values must be strictly increasing");
    }
}

}  // namespace fanoeit
