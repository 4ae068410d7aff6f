#include <cmath>

#include "fanoeit/core.hpp"

namespace fanoeit {

cplx fano_ratio(double E, double E1, double E2, double gamma1, double gamma2, double q1, double q2,
                FanoForm form) {
    constexpr cplx I{0.0, 1.0};
    if (form == FanoForm::automatic && E1 == E2) {
        const double G = gamma1 + gamma2;
        const double x = E - E1;
        const double QG = q1 * gamma1 + q2 * gamma2;
        return cplx(x + QG, 0.0) / cplx(x, -G);
    }
    // Written in differences so that only offsets from the levels matter.
    const double a = E - E1;
    const double b = E - E2;
    const double num = a * b + q1 * gamma1 * b + q2 * gamma2 * a;
    const cplx den = a * b - I * (gamma1 * b + gamma2 * a);
    if (den == cplx(0.0, 0.0)) {
        if (E1 == E2) throw PoleError("fano_ratio: removable singularity; use cancelled form");
        throw PoleError("fano_ratio: denominator vanishes");
    }
    return num / den;
}

double bound_state_numerator(Level j, Level k, const EffectiveParams& eff, BoundStateSign sign) {
    const double g = sign == BoundStateSign::standard ? eff.Gamma21 : -eff.Gamma21;
    return (eff.Q21(j) - g * eff.Q(j)) * (eff.Q21(k) - g * eff.Q(k));
}

namespace {

constexpr cplx I{0.0, 1.0};

cplx four_terms(double Qj, double Qk, double omega, double G) {
    const cplx pre = (Qj + I) * (Qk - I);
    return -I / pre - 2.0 * I * G / ((Qj + I) * (omega + I * G)) - 2.0 * I * G * G / (omega * omega + G * G) +
           G / (omega - I * G);
}

RValue finish(cplx braces, double Qj, double Qk, double Dj, double Dk) {
    const cplx pre = (Qj + I) * (Qk - I);
    return RValue{Dj * Dk * (pre * (units::pi * braces)), Method::analytic, 0.0};
}

}  // namespace

RValue r_jk_reduced(Level j, Level k, double omega, const EffectiveParams& eff, double Dj, double Dk) {
    const double Qj = eff.Q(j), Qk = eff.Q(k);
    return finish(four_terms(Qj, Qk, omega, eff.Gamma), Qj, Qk, Dj, Dk);
}

RValue r_jk_analytic(Level j, Level k, double omega, const EffectiveParams& eff, double Dj, double Dk,
                     BoundStateSign sign) {
    const double G = eff.Gamma;
    const double G21 = eff.Gamma21;
    if (!(std::abs(G21) < 1.0)) throw NumericalError("r_jk_analytic: singular prefactor, |Gamma21| = 1");
    const double Qj = eff.Q(j), Qk = eff.Q(k);
    cplx braces = four_terms(Qj, Qk, omega, G);
    const double P = bound_state_numerator(j, k, eff, sign);
    if (P != 0.0) {
        if (omega == 0.0) throw PoleError("r_jk_analytic: bound-state pole at omega = 0");
        const cplx pre = (Qj + I) * (Qk - I);
        braces += G * P / ((1.0 - G21 * G21) * pre * omega);
    }
    return finish(braces, Qj, Qk, Dj, Dk);
}

}  // namespace fanoeit
