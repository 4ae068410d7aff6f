#include <atomic>
#include <stdexcept>

#include "fanoeit/kernels.hpp"

namespace fanoeit::kernels {

#ifndef FANOEIT_HAVE_AVX2
namespace avx2 {
cplx stage(const StageArgs&) { throw std::runtime_error("AVX2 kernels not built"); }
Sums final_update(const FinalArgs&) { throw std::runtime_error("AVX2 kernels not built"); }
}  // namespace avx2
#endif

namespace {

Isa detect() { return avx2_supported() ? Isa::avx2 : Isa::scalar; }

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_supported() {
#if defined(FANOEIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
    if (isa == Isa::avx2 && !avx2_supported()) throw std::runtime_error("AVX2 not supported on this CPU");
    current().store(isa, std::memory_order_relaxed);
}

cplx stage(const StageArgs& a) { return active_isa() == Isa::avx2 ? avx2::stage(a) : scalar::stage(a); }

Sums final_update(const FinalArgs& a) {
    return active_isa() == Isa::avx2 ? avx2::final_update(a) : scalar::final_update(a);
}

}  // namespace fanoeit::kernels
