#include <cmath>
#include <numbers>

#include "fanoeit/detail/etd.hpp"

namespace fanoeit::detail {

namespace {

using cplx = std::complex<double>;

struct Phi {
    cplx Q, f1, f2, f3;
};

Phi closed(cplx z) {
    const cplx ez = std::exp(z);
    const cplx z3 = z * z * z;
    return {(std::exp(0.5 * z) - 1.0) / z, (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3,
            (2.0 + z + ez * (z - 2.0)) / z3, (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3};
}

}  // namespace

EtdCoefficients etd_coefficients(cplx z) {
    EtdCoefficients c;
    c.E = std::exp(z);
    c.E2 = std::exp(0.5 * z);
    Phi phi;
    if (std::abs(z) >= 1.0) {
        phi = closed(z);
    } else {
        // Full circle of radius 1: valid for complex z, not only real.
        constexpr int M = 32;
        Phi sum{};
        for (int k = 1; k <= M; ++k) {
            const cplx r = std::polar(1.0, 2.0 * std::numbers::pi * (k - 0.5) / M);
            const Phi p = closed(z + r);
            sum.Q += p.Q;
            sum.f1 += p.f1;
            sum.f2 += p.f2;
            sum.f3 += p.f3;
        }
        phi = {sum.Q / double(M), sum.f1 / double(M), sum.f2 / double(M), sum.f3 / double(M)};
    }
    c.Q = phi.Q;
    c.f1 = phi.f1;
    c.f2 = phi.f2;
    c.f3 = phi.f3;
    return c;
}

}  // namespace fanoeit::detail
