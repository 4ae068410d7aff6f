#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Per-bin ETDRK4 kernels over split (re, im) arrays. A scalar reference
// implementation is always built; an AVX2/FMA variant is picked at runtime
// when the CPU supports it.
namespace fanoeit::kernels {

using cplx = std::complex<double>;

struct CView {
    const double* re;
    const double* im;
};

struct MView {
    double* re;
    double* im;
};

// out_i = e_i * in_i + q_i * (alpha * A_i + beta * C_i); returns sum_i wc_i * out_i.
struct StageArgs {
    std::size_t n;
    CView e, in, q, A, C, wc;
    cplx alpha, beta;
    MView out;
};

// u_i <- E_i u_i + A_i (f1_i a1 + f2_i a2 + f3_i a3) + C_i (f1_i b1 + f2_i b2 + f3_i b3);
// returns sum_i wc_i u_i and sum_i wa_i u_i of the updated u.
struct FinalArgs {
    std::size_t n;
    CView E, f1, f2, f3, A, C, wc, wa;
    cplx a1, a2, a3, b1, b2, b3;
    MView u;
};

struct Sums {
    cplx wc;
    cplx wa;
};

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

bool avx2_supported();

// Dispatch target; defaults to the best supported ISA.
Isa active_isa();
// For tests and benchmarks. Throws std::runtime_error if unsupported.
void set_isa(Isa isa);

cplx stage(const StageArgs& a);
Sums final_update(const FinalArgs& a);

namespace scalar {
cplx stage(const StageArgs& a);
Sums final_update(const FinalArgs& a);
}  // namespace scalar

namespace avx2 {
cplx stage(const StageArgs& a);
Sums final_update(const FinalArgs& a);
}  // namespace avx2

}  // namespace fanoeit::kernels
