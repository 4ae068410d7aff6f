#include "fanoeit/core.hpp"

namespace fanoeit {

cplx chi_from_r(double omega, cplx Rbb, cplx Rbc, cplx Rcb, cplx Rcc, const SystemParams& p, const FieldParams& f) {
    const double scale = -p.density_N / units::eps0;
    const double c = 0.25 * f.eps2 * f.eps2;
    if (c == 0.0) return scale * Rbb;
    // Control-coherence decay enters with +i: the steady state of the driven
    // coherence under the same +i0 prescription as the continuum integrals.
    const cplx den = cplx(omega - f.delta_c, p.gamma_cb) - c * Rcc;
    return scale * (Rbb + c * Rbc * Rcb / den);
}

SusceptibilityPoint susceptibility(double omega, const SystemParams& p, const FieldParams& f) {
    const EffectiveParams eff = effective_params(p);
    const RValue bb = r_jk_analytic(Level::b, Level::b, omega, eff, p.Db, p.Db);
    const RValue bc = r_jk_analytic(Level::b, Level::c, omega, eff, p.Db, p.Dc);
    const RValue cb = r_jk_analytic(Level::c, Level::b, omega, eff, p.Dc, p.Db);
    const RValue cc = r_jk_analytic(Level::c, Level::c, omega, eff, p.Dc, p.Dc);
    return {omega, chi_from_r(omega, bb.value, bc.value, cb.value, cc.value, p, f)};
}

Spectrum spectrum(const DetuningGrid& grid, const SystemParams& p, const FieldParams& f) {
    Spectrum s;
    s.system = p;
    s.field = f;
    s.points.reserve(grid.omega_values.size());
    for (double w : grid.omega_values) s.points.push_back(susceptibility(w, p, f));
    return s;
}

}  // namespace fanoeit
