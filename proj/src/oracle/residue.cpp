#include <cmath>
#include <limits>
#include <sstream>

#include "fanoeit/detail/polynomial.hpp"
#include "fanoeit/detail/richardson.hpp"
#include "fanoeit/oracle.hpp"

namespace fanoeit {

namespace {

constexpr cplx I{0.0, 1.0};
using detail::Poly;

// Numerator of the two-resonance ratio for one lower level, resonances at
// t = 0 and t = dE (units of Gamma).
Poly numerator(double q1, double q2, double g1, double g2, double dE) {
    return Poly({cplx(-dE * q1 * g1), cplx(q1 * g1 + q2 * g2 - dE), cplx(1.0)});
}

Poly denominator(double g1, double g2, double dE) {
    return Poly({I * (g1 * dE), -(dE + I * (g1 + g2)), cplx(1.0)});
}

}  // namespace

RValue r_jk_residue(Level j, Level k, double omega, const SystemParams& p, double delta_e, const ResidueOptions& opt) {
    p.validate();
    if (!(delta_e > 0)) throw ConfigError("residue: splitting must be > 0");
    const double s = p.dipole(j) * p.dipole(k);
    if (opt.profile == Profile::flat) return RValue{s * (-I * units::pi), Method::residue, 0.0};

    const double G = p.Gamma();
    const double g1 = p.gamma1 / G, g2 = p.gamma2 / G, dE = delta_e / G, w = omega / G;
    const double q1j = j == Level::b ? p.q1b : p.q1c, q2j = j == Level::b ? p.q2b : p.q2c;
    const double q1k = k == Level::b ? p.q1b : p.q1c, q2k = k == Level::b ? p.q2b : p.q2c;

    // On the real axis conj(F_k) = N_k / conj(D): the integrand minus one is
    // (N_j N_k - D conj(D)) / (D conj(D)).
    const Poly D = denominator(g1, g2, dE);
    const Poly den = D * D.conj();
    const Poly num = numerator(q1j, q2j, g1, g2, dE) * numerator(q1k, q2k, g1, g2, dE) - den;
    const Poly dden = den.derivative();

    const auto rts = detail::roots(den);
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < rts.size(); ++a)
        for (std::size_t b = a + 1; b < rts.size(); ++b) sep = std::min(sep, std::abs(rts[a] - rts[b]));
    if (sep < opt.min_separation) {
        std::ostringstream os;
        os << "residue: near-degenerate roots (separation " << sep << " Gamma); use the quadrature path";
        throw ConvergenceError(os.str());
    }

    cplx sum{};
    double mag = units::pi;
    for (const cplx& r : rts) {
        const bool lower = r.imag() < 0;
        if (lower != (opt.side == ContourSide::lower)) continue;
        const cplx term = num(r) / (dden(r) * (w - r));
        sum += term;
        mag += 2 * units::pi * std::abs(term);
    }
    cplx value;
    if (opt.side == ContourSide::lower) {
        value = -I * units::pi - 2.0 * I * units::pi * sum;
    } else {
        // Counter-clockwise closure also picks up the probe pole at w + i0.
        const cplx hw = num(cplx(w)) / den(cplx(w));
        value = -I * units::pi + 2.0 * I * units::pi * (sum - hw);
        mag += 2 * units::pi * std::abs(hw);
    }
    const double err = 64 * std::numeric_limits<double>::epsilon() * mag * std::max(1.0, 1.0 / sep);
    return RValue{s * value, Method::residue, std::abs(s) * err};
}

OracleResult r_jk_residue_ladder(Level j, Level k, double omega, const SystemParams& p, const OracleConfig& cfg) {
    cfg.validate();
    const double G = p.Gamma();
    if (omega == 0.0) throw PoleError("residue: omega = 0 is excluded");
    OracleResult out;
    out.report.ladder = ladder_for(omega, G, cfg);
    ResidueOptions opt;
    opt.profile = cfg.profile;
    std::vector<double> xs;
    double err = 0;
    for (double dE : out.report.ladder) {
        const RValue v = r_jk_residue(j, k, omega, p, dE, opt);
        out.report.values_at_ladder.push_back(v.value);
        xs.push_back(dE / G);
        err = std::max(err, v.error_estimate);
    }
    const int order = std::min<int>(cfg.richardson_order, static_cast<int>(xs.size()) - 1);
    if (order >= 1) {
        const auto ex = detail::richardson(xs, out.report.values_at_ladder, order);
        out.report.extrapolated = ex.value;
        out.report.residual = ex.residual;
    } else {
        out.report.extrapolated = out.report.values_at_ladder.back();
    }
    out.quadrature_error = err;
    out.r = RValue{out.report.extrapolated, Method::residue, err + out.report.residual};
    return out;
}

}  // namespace fanoeit
