#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fanoeit/detail/etd.hpp"
#include "fanoeit/dynamics.hpp"

using namespace fanoeit;

namespace {

constexpr double G = 1e-9;

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

SystemParams sys(double Qb, double Qc, double Qb21, double Qc21, double G21) {
    return system_from_effective(EffectiveParams{Qb, Qc, Qb21, Qc21, G, G21});
}

DynamicsConfig coarse() {
    DynamicsConfig c;
    c.n_bins = 2000;
    return c;
}

}  // namespace

TEST_CASE("etd coefficients against closed forms") {
    for (cplx z : {cplx(-2.0, 0.5), cplx(-0.3, -4.0), cplx(-1e-3, 0.2), cplx(-1e-6, 1e-6), cplx(-0.9, 0.3)}) {
        const auto c = detail::etd_coefficients(z);
        CHECK(std::abs(c.E - std::exp(z)) < 1e-14);
        if (std::abs(z) > 0.5) {
            const cplx f1 = (-4.0 - z + std::exp(z) * (4.0 - 3.0 * z + z * z)) / (z * z * z);
            CHECK(std::abs(c.f1 - f1) < 1e-11 * std::abs(f1));
        }
        // f1 + 2 f2 + f3 integrates a constant forcing: equals (e^z - 1)/z.
        const cplx phi1 = std::abs(z) > 1e-3 ? (std::exp(z) - 1.0) / z : 1.0 + z / 2.0 + z * z / 6.0;
        CHECK(std::abs(c.f1 + 4.0 * c.f2 + c.f3 - phi1) < 1e-12);
    }
}

TEST_CASE("continuum grid") {
    const SystemParams p;
    SUBCASE("uniform layout") {
        GridLayout l;
        l.mode = GridMode::uniform;
        const auto g = build_grid(100 * G, 1000, p, l);
        REQUIRE(g.bin_weights.size() == 1000);
        for (double w : g.bin_weights) CHECK(w == doctest::Approx(0.2 * G).epsilon(1e-12));
    }
    SUBCASE("densified layout") {
        for (std::size_t n : {1000u, 4000u, 8000u}) {
            const auto g = build_grid(100 * G, n, p);
            REQUIRE(g.bin_centers.size() == n);
            CHECK(g.core_spacing <= G / 50);
            const double sum = std::accumulate(g.bin_weights.begin(), g.bin_weights.end(), 0.0);
            CHECK(sum == doctest::Approx(200 * G).epsilon(1e-12));
            CHECK(g.span_lo == doctest::Approx(-100 * G));
            CHECK(g.span_hi == doctest::Approx(100 * G));
            double growth = 1;
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(g.bin_weights[i] > 0);
                if (i > 0) {
                    CHECK(g.bin_centers[i] > g.bin_centers[i - 1]);
                    growth = std::max(growth, g.bin_weights[i] / g.bin_weights[i - 1]);
                    growth = std::max(growth, g.bin_weights[i - 1] / g.bin_weights[i]);
                }
            }
            CHECK(growth <= 1.25 + 1e-9);
        }
    }
    SUBCASE("bad requests") {
        CHECK_THROWS_AS(build_grid(50 * G, 2000, p), ConfigError);
        CHECK_THROWS_AS(build_grid(100 * G, 500, p), ConfigError);
        GridLayout l;
        l.core_fraction = 0.9999;
        CHECK_THROWS_AS(build_grid(1e4 * G, 1000, p, l), ConfigError);
    }
}

TEST_CASE("zero probe gives a zero state") {
    const SystemParams p;
    FieldParams f;
    f.eps1 = 0;
    DynamicsConfig c = coarse();
    c.eta_extrapolation = false;
    const auto g = build_grid(c.W_over_gamma * G, c.n_bins, p, c.layout);
    const auto s = integrate_steady(g, 0.5 * G, p, f, c);
    CHECK(s.converged);
    for (const auto& r : s.rho_Eb) CHECK(r == cplx(0.0, 0.0));
    CHECK(s.rho_cb == cplx(0.0, 0.0));
    CHECK(chi_from_dynamics(s, g, p, f).chi == cplx(0.0, 0.0));
}

TEST_CASE("preconditions") {
    SystemParams p;
    const FieldParams f;
    const DynamicsConfig c = coarse();
    const auto g = build_grid(c.W_over_gamma * G, c.n_bins, p, c.layout);
    CHECK_THROWS_AS(integrate_steady(g, 20 * G, p, f, c), ConfigError);
    p.gamma_cb = 0;
    CHECK_THROWS_AS(integrate_steady(g, G, p, f, c), ConfigError);
    DynamicsState s;
    CHECK_THROWS_AS(chi_from_dynamics(s, g, SystemParams{}, f), NumericalError);
    DynamicsConfig bad;
    bad.n_bins = 10;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("first-order response: doubling the probe") {
    const SystemParams p;
    FieldParams f;
    const auto a = estimate_chi(-0.7 * G, p, f, coarse());
    f.eps1 *= 2;
    const auto b = estimate_chi(-0.7 * G, p, f, coarse());
    CHECK(rel(b.chi, a.chi) < 1e-3);
}

TEST_CASE("strongly damped coherence leaves the bare response") {
    SystemParams p;
    p.gamma_cb = 100 * G;
    const FieldParams f;
    const auto e = effective_params(p);
    for (double w : {-2.0, 0.6}) {
        const auto d = estimate_chi(w * G, p, f, coarse());
        const cplx bare = -(p.density_N / units::eps0) * r_jk_analytic(Level::b, Level::b, w * G, e, 2, 2).value;
        CHECK(rel(d.chi, bare) < 0.01);
    }
}

TEST_CASE("agreement with the closed form at the default resolution") {
    const auto p = sys(20, 20, 1, 8, 0);
    const FieldParams f;
    const auto d = estimate_chi(2 * G, p, f, DynamicsConfig{});
    CHECK(rel(d.chi, susceptibility(2 * G, p, f).chi) < 0.02);
    REQUIRE(d.chi_double_eta.has_value());
    CHECK(d.chi == 2.0 * d.chi_raw - *d.chi_double_eta);
}

TEST_CASE("without the bound-state channel") {
    const auto p = sys(20, 20, 1, 8, 0);
    const FieldParams f;
    DynamicsConfig c = coarse();
    c.bound_state = false;
    for (double w : {-1.5, 0.4}) {
        const auto d = estimate_chi(w * G, p, f, c);
        CHECK(rel(d.chi, chi_without_bound_state(w * G, p, f)) < 0.02);
    }
}

TEST_CASE("doubling W together with n_bins") {
    const auto p = sys(20, 20, 1, 2, 0);
    const FieldParams f;
    DynamicsConfig a = coarse();
    DynamicsConfig b = a;
    b.W_over_gamma *= 2;
    b.n_bins *= 2;
    for (double w : {-1.2, 0.3}) {
        const auto x = estimate_chi(w * G, p, f, a);
        const auto y = estimate_chi(w * G, p, f, b);
        CHECK(rel(y.chi, x.chi) < 0.005);
    }
}

TEST_CASE("grid convergence study") {
    const auto p = sys(20, 20, 0, 0, 0);
    const FieldParams f;
    DynamicsConfig c;
    c.n_bins = 4000;
    const auto s = convergence_study(1.2 * G, p, f, c, 2);
    REQUIRE(s.n_bins == std::vector<std::size_t>{1000, 2000, 4000});
    REQUIRE(s.successive_change.size() == 2);
    CHECK(s.monotone);
    CHECK(s.successive_change[1] < s.successive_change[0]);
    CHECK(s.relative_error < 0.02);
}

TEST_CASE("comparison report") {
    const auto p = sys(20, 20, 0, 0, 0);
    const FieldParams f;
    const auto r = compare_dynamics({-2 * G, 0.3 * G, 1.2 * G}, p, f, coarse(), true, 3);
    REQUIRE(r.points.size() == 3);
    CHECK(r.pass == (r.max_relative_error <= r.tolerance));
    for (const auto& pt : r.points) CHECK(pt.relative_error <= r.max_relative_error);
}
