// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "fanoeit/kernels.hpp"

namespace fanoeit::kernels::avx2 {

namespace {

struct V {
    __m256d re, im;
};

inline V load(const CView& v, std::size_t i) { return {_mm256_loadu_pd(v.re + i), _mm256_loadu_pd(v.im + i)}; }

inline V mul(V a, V b) {
    return {_mm256_fmsub_pd(a.re, b.re, _mm256_mul_pd(a.im, b.im)),
            _mm256_fmadd_pd(a.re, b.im, _mm256_mul_pd(a.im, b.re))};
}

// acc + a * b
inline V fma(V a, V b, V acc) {
    return {_mm256_fnmadd_pd(a.im, b.im, _mm256_fmadd_pd(a.re, b.re, acc.re)),
            _mm256_fmadd_pd(a.im, b.re, _mm256_fmadd_pd(a.re, b.im, acc.im))};
}

inline V splat(cplx z) { return {_mm256_set1_pd(z.real()), _mm256_set1_pd(z.imag())}; }

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

cplx stage(const StageArgs& a) {
    const V alpha = splat(a.alpha), beta = splat(a.beta);
    V acc{_mm256_setzero_pd(), _mm256_setzero_pd()};
    std::size_t i = 0;
    for (; i + 4 <= a.n; i += 4) {
        const V t = fma(beta, load(a.C, i), mul(alpha, load(a.A, i)));
        const V o = fma(load(a.q, i), t, mul(load(a.e, i), load(a.in, i)));
        _mm256_storeu_pd(a.out.re + i, o.re);
        _mm256_storeu_pd(a.out.im + i, o.im);
        acc = fma(load(a.wc, i), o, acc);
    }
    StageArgs rest = a;
    rest.n = a.n - i;
    auto shift = [i](CView v) { return CView{v.re + i, v.im + i}; };
    rest.e = shift(a.e);
    rest.in = shift(a.in);
    rest.q = shift(a.q);
    rest.A = shift(a.A);
    rest.C = shift(a.C);
    rest.wc = shift(a.wc);
    rest.out = MView{a.out.re + i, a.out.im + i};
    return cplx(hsum(acc.re), hsum(acc.im)) + scalar::stage(rest);
}

Sums final_update(const FinalArgs& a) {
    const V a1 = splat(a.a1), a2 = splat(a.a2), a3 = splat(a.a3);
    const V b1 = splat(a.b1), b2 = splat(a.b2), b3 = splat(a.b3);
    V sc{_mm256_setzero_pd(), _mm256_setzero_pd()};
    V sp = sc;
    std::size_t i = 0;
    for (; i + 4 <= a.n; i += 4) {
        const V f1 = load(a.f1, i), f2 = load(a.f2, i), f3 = load(a.f3, i);
        const V ka = fma(f3, a3, fma(f2, a2, mul(f1, a1)));
        const V kc = fma(f3, b3, fma(f2, b2, mul(f1, b1)));
        const CView uc{a.u.re, a.u.im};
        const V u = fma(load(a.C, i), kc, fma(load(a.A, i), ka, mul(load(a.E, i), load(uc, i))));
        _mm256_storeu_pd(a.u.re + i, u.re);
        _mm256_storeu_pd(a.u.im + i, u.im);
        sc = fma(load(a.wc, i), u, sc);
        sp = fma(load(a.wa, i), u, sp);
    }
    FinalArgs rest = a;
    rest.n = a.n - i;
    auto shift = [i](CView v) { return CView{v.re + i, v.im + i}; };
    rest.E = shift(a.E);
    rest.f1 = shift(a.f1);
    rest.f2 = shift(a.f2);
    rest.f3 = shift(a.f3);
    rest.A = shift(a.A);
    rest.C = shift(a.C);
    rest.wc = shift(a.wc);
    rest.wa = shift(a.wa);
    rest.u = MView{a.u.re + i, a.u.im + i};
    const Sums tail = scalar::final_update(rest);
    return {cplx(hsum(sc.re), hsum(sc.im)) + tail.wc, cplx(hsum(sp.re), hsum(sp.im)) + tail.wa};
}

}  // namespace fanoeit::kernels::avx2
