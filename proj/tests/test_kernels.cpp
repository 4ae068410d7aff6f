#include <doctest.h>

#include <random>
#include <vector>

#include "fanoeit/dynamics.hpp"
#include "fanoeit/kernels.hpp"

using namespace fanoeit;
using namespace fanoeit::kernels;

namespace {

struct Arr {
    std::vector<double> re, im;
    Arr(std::size_t n, std::mt19937_64& rng) : re(n), im(n) {
        std::uniform_real_distribution<double> d(-1, 1);
        for (std::size_t i = 0; i < n; ++i) {
            re[i] = d(rng);
            im[i] = d(rng);
        }
    }
    CView c() const { return {re.data(), im.data()}; }
    MView m() { return {re.data(), im.data()}; }
};

double max_diff(const Arr& a, const Arr& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.re.size(); ++i)
        m = std::max({m, std::abs(a.re[i] - b.re[i]), std::abs(a.im[i] - b.im[i])});
    return m;
}

const std::size_t sizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 33, 1001};

}  // namespace

TEST_CASE("isa selection") {
    CHECK(to_string(Isa::scalar) == "scalar");
    const Isa initial = active_isa();
    CHECK((initial == Isa::avx2) == avx2_supported());
    set_isa(Isa::scalar);
    CHECK(active_isa() == Isa::scalar);
    if (!avx2_supported()) CHECK_THROWS(set_isa(Isa::avx2));
    set_isa(initial);
}

TEST_CASE("stage kernel: avx2 matches scalar") {
    if (!avx2_supported()) {
        MESSAGE("AVX2 not available; equivalence not exercised");
        return;
    }
    std::mt19937_64 rng(1);
    for (std::size_t n : sizes) {
        Arr e(n, rng), in(n, rng), q(n, rng), A(n, rng), C(n, rng), wc(n, rng), o1(n, rng), o2(n, rng);
        StageArgs a{n, e.c(), in.c(), q.c(), A.c(), C.c(), wc.c(), {0.3, -1.2}, {2.0, 0.5}, o1.m()};
        const cplx s1 = scalar::stage(a);
        a.out = o2.m();
        const cplx s2 = avx2::stage(a);
        CHECK(max_diff(o1, o2) < 1e-14);
        CHECK(std::abs(s1 - s2) < 1e-13 * (1.0 + static_cast<double>(n)));
    }
}

TEST_CASE("final kernel: avx2 matches scalar") {
    if (!avx2_supported()) {
        MESSAGE("AVX2 not available; equivalence not exercised");
        return;
    }
    std::mt19937_64 rng(2);
    for (std::size_t n : sizes) {
        Arr E(n, rng), f1(n, rng), f2(n, rng), f3(n, rng), A(n, rng), C(n, rng), wc(n, rng), wa(n, rng), u(n, rng);
        Arr u2 = u;
        FinalArgs a{n,           E.c(),       f1.c(),     f2.c(),     f3.c(),      A.c(),  C.c(), wc.c(), wa.c(),
                    {0.1, 0.2},  {-0.3, 0.4}, {0.5, 0.6}, {0.7, -0.8}, {0.9, 1.0}, {-1.1, 1.2}, u.m()};
        const Sums s1 = scalar::final_update(a);
        a.u = u2.m();
        const Sums s2 = avx2::final_update(a);
        CHECK(max_diff(u, u2) < 1e-14);
        CHECK(std::abs(s1.wc - s2.wc) < 1e-13 * (1.0 + static_cast<double>(n)));
        CHECK(std::abs(s1.wa - s2.wa) < 1e-13 * (1.0 + static_cast<double>(n)));
    }
}

TEST_CASE("steady state is the same under either kernel") {
    if (!avx2_supported()) {
        MESSAGE("AVX2 not available; equivalence not exercised");
        return;
    }
    const Isa initial = active_isa();
    SystemParams p;
    FieldParams f;
    DynamicsConfig cfg;
    cfg.n_bins = 1000;
    cfg.eta_extrapolation = false;
    set_isa(Isa::scalar);
    const auto a = estimate_chi(0.7 * p.Gamma(), p, f, cfg);
    set_isa(Isa::avx2);
    const auto b = estimate_chi(0.7 * p.Gamma(), p, f, cfg);
    set_isa(initial);
    CHECK(a.steps == b.steps);
    CHECK(std::abs(a.chi - b.chi) < 1e-10 * std::abs(a.chi));
}
