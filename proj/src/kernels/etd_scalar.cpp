#include "fanoeit/kernels.hpp"

namespace fanoeit::kernels::scalar {

cplx stage(const StageArgs& a) {
    const double ar = a.alpha.real(), ai = a.alpha.imag();
    const double br = a.beta.real(), bi = a.beta.imag();
    double sr = 0, si = 0;
    for (std::size_t i = 0; i < a.n; ++i) {
        const double tr = ar * a.A.re[i] - ai * a.A.im[i] + br * a.C.re[i] - bi * a.C.im[i];
        const double ti = ar * a.A.im[i] + ai * a.A.re[i] + br * a.C.im[i] + bi * a.C.re[i];
        const double orr = a.e.re[i] * a.in.re[i] - a.e.im[i] * a.in.im[i] + a.q.re[i] * tr - a.q.im[i] * ti;
        const double oi = a.e.re[i] * a.in.im[i] + a.e.im[i] * a.in.re[i] + a.q.re[i] * ti + a.q.im[i] * tr;
        a.out.re[i] = orr;
        a.out.im[i] = oi;
        sr += a.wc.re[i] * orr - a.wc.im[i] * oi;
        si += a.wc.re[i] * oi + a.wc.im[i] * orr;
    }
    return {sr, si};
}

Sums final_update(const FinalArgs& a) {
    double cr = 0, ci = 0, pr = 0, pi = 0;
    for (std::size_t i = 0; i < a.n; ++i) {
        const cplx f1(a.f1.re[i], a.f1.im[i]), f2(a.f2.re[i], a.f2.im[i]), f3(a.f3.re[i], a.f3.im[i]);
        const cplx ka = f1 * a.a1 + f2 * a.a2 + f3 * a.a3;
        const cplx kc = f1 * a.b1 + f2 * a.b2 + f3 * a.b3;
        const cplx u = cplx(a.E.re[i], a.E.im[i]) * cplx(a.u.re[i], a.u.im[i]) + cplx(a.A.re[i], a.A.im[i]) * ka +
                       cplx(a.C.re[i], a.C.im[i]) * kc;
        a.u.re[i] = u.real();
        a.u.im[i] = u.imag();
        cr += a.wc.re[i] * u.real() - a.wc.im[i] * u.imag();
        ci += a.wc.re[i] * u.imag() + a.wc.im[i] * u.real();
        pr += a.wa.re[i] * u.real() - a.wa.im[i] * u.imag();
        pi += a.wa.re[i] * u.imag() + a.wa.im[i] * u.real();
    }
    return {{cr, ci}, {pr, pi}};
}

}  // namespace fanoeit::kernels::scalar
