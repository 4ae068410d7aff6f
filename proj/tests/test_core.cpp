#include <doctest.h>

#include <cmath>
#include <random>

#include "fanoeit/core.hpp"

using namespace fanoeit;

namespace {

constexpr double G = 1e-9;

EffectiveParams eff(double Qb, double Qc, double Qb21, double Qc21, double G21) {
    return EffectiveParams{Qb, Qc, Qb21, Qc21, G, G21};
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("effective parameters") {
    SystemParams p;
    p.q1b = p.q2b = 7;
    p.q1c = p.q2c = 3;
    auto e = effective_params(p);
    CHECK(e.Gamma21 == 0.0);
    CHECK(e.Qb21 == 0.0);
    CHECK(e.Qc21 == 0.0);
    CHECK(e.Qb == doctest::Approx(7.0));

    p.gamma1 = 0.3 * G;
    p.gamma2 = 0.7 * G;
    CHECK(effective_params(p).Gamma21 == doctest::Approx(0.4));

    e = effective_params(SystemParams{});
    CHECK(e.Qb == doctest::Approx(20.0));
    CHECK(e.Qb21 == doctest::Approx(1.0));
    CHECK(e.Qc == doctest::Approx(20.0));
    CHECK(e.Qc21 == doctest::Approx(8.0));
}

TEST_CASE("system_from_effective inverts effective_params") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> q(-30, 30), g21(-0.9, 0.9);
    for (int i = 0; i < 200; ++i) {
        const EffectiveParams e = eff(q(rng), q(rng), q(rng) / 5, q(rng) / 5, g21(rng));
        const auto back = effective_params(system_from_effective(e));
        CHECK(back.Qb == doctest::Approx(e.Qb).epsilon(1e-12));
        CHECK(back.Qc21 == doctest::Approx(e.Qc21).epsilon(1e-12));
        CHECK(back.Gamma21 == doctest::Approx(e.Gamma21).epsilon(1e-12));
        CHECK(back.Gamma == doctest::Approx(G).epsilon(1e-14));
    }
}

TEST_CASE("parameter validation names the field") {
    SystemParams p;
    p.gamma1 = -1;
    try {
        p.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("system.gamma1") != std::string::npos);
    }
    p = SystemParams{};
    p.gamma1 = p.gamma2 = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK_THROWS_AS(effective_params(p), ConfigError);
    FieldParams f;
    f.eps2 = -1;
    CHECK_THROWS_AS(f.validate(), ConfigError);
}

TEST_CASE("fano_ratio") {
    SUBCASE("cancelled form zero") {
        const double Q = 20;
        const cplx r = fano_ratio(-Q * G, 0, 0, G / 2, G / 2, 19, 21);
        CHECK(std::abs(r) < 1e-12);
    }
    SUBCASE("split levels against the factored form") {
        // E1 = -G/2, E2 = G/2, q = 5, E = 0: numerator (-G^2/4) + 5G/2 * (-G/2) + 5G/2 * (G/2),
        // denominator -G^2/4 - i(G/2 * -G/2 + G/2 * G/2).
        const cplx r = fano_ratio(0, -G / 2, G / 2, G / 2, G / 2, 5, 5);
        CHECK(rel(r, cplx(1.0, 0.0)) < 1e-14);
        const cplx r2 = fano_ratio(0.3 * G, -G / 2, G / 2, G / 2, G / 2, 5, 5);
        const double a = 0.8 * G, b = -0.2 * G;
        const cplx want = (a * b + 2.5 * G * b + 2.5 * G * a) / cplx(a * b, -(0.5 * G * b + 0.5 * G * a));
        CHECK(rel(r2, want) < 1e-14);
    }
    SUBCASE("naive degenerate form at the level") {
        CHECK_THROWS_AS(fano_ratio(0, 0, 0, G / 2, G / 2, 19, 21, FanoForm::naive), PoleError);
        CHECK_THROWS_WITH(fano_ratio(0, 0, 0, G / 2, G / 2, 19, 21, FanoForm::naive),
                          doctest::Contains("removable singularity"));
        CHECK_NOTHROW(fano_ratio(0, 0, 0, G / 2, G / 2, 19, 21));
    }
    SUBCASE("automatic and naive agree off the level") {
        for (double x : {-5.0, -0.3, 0.01, 2.0}) {
            const cplx a = fano_ratio(x * G, 0, 0, 0.4 * G, 0.6 * G, 12, 28);
            const cplx b = fano_ratio(x * G, 0, 0, 0.4 * G, 0.6 * G, 12, 28, FanoForm::naive);
            CHECK(rel(a, b) < 1e-12);
        }
    }
    SUBCASE("far wings") {
        // C = 21 Gamma bounds |q1 g1 + q2 g2 + i Gamma| for these q's with margin.
        const double C = 21 * G;
        for (double d = 100; d <= 1e6; d *= 1.7) {
            for (double s : {-1.0, 1.0}) {
                const double x = s * d * G;
                CHECK(std::abs(fano_ratio(x, 0, 0, G / 2, G / 2, 19, 21) - 1.0) <= C / d / G);
                CHECK(std::abs(fano_ratio(x, 0, 0.05 * G, G / 2, G / 2, 19, 21) - 1.0) <= C / d / G);
            }
        }
    }
}

TEST_CASE("analytic R: oracle values") {
    // Quadrature oracle values (extrapolated), Db = 2, Dc = 3.
    struct Row {
        EffectiveParams e;
        double w;
        Level j, k;
        cplx want;
    };
    const auto dd = eff(20, 20, 1, 8, 0);
    const auto f5 = eff(15, 20, 1, 6, -0.4);
    const Row rows[] = {
        {dd, 2.0, Level::b, Level::b, {1911.3452560548671, -1216.426569693378}},
        {dd, 2.0, Level::b, Level::c, {2932.9919666581463, -1824.6407150859591}},
        {dd, 2.0, Level::c, Level::c, {5191.1707936771172, -2736.962621657874}},
        {dd, -0.7, Level::b, Level::b, {-2710.8670258488837, -3141.5074392895203}},
        {dd, 0.3, Level::c, Level::c, {8099.2564085559898, -10689.517492767318}},
        {f5, 2.0, Level::b, Level::c, {3222.0210302194951, -1409.9502499127864}},
        {f5, -0.7, Level::c, Level::b, {-6232.1576731002306, -3491.464155125429}},
        {f5, 0.3, Level::b, Level::b, {2872.3331163901125, -2698.7740323197841}},
        {f5, 0.3, Level::c, Level::c, {24058.562313912946, -10689.526161578477}},
    };
    for (const auto& r : rows) {
        const double Dj = r.j == Level::b ? 2 : 3, Dk = r.k == Level::b ? 2 : 3;
        const auto got = r_jk_analytic(r.j, r.k, r.w * G, r.e, Dj, Dk);
        CHECK(got.method == Method::analytic);
        CHECK(got.error_estimate == 0.0);
        CHECK(rel(got.value, r.want) < 1e-5);
        // The printed sign of the cross term misses wherever Gamma21 != 0.
        if (r.e.Gamma21 != 0.0) {
            const auto flipped = r_jk_analytic(r.j, r.k, r.w * G, r.e, Dj, Dk, BoundStateSign::flipped);
            CHECK(rel(flipped.value, r.want) > 1e-2);
        }
    }
}

TEST_CASE("analytic R: properties") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> q(-25, 25), w(-10, 10), g21(-0.9, 0.9);
    for (int i = 0; i < 300; ++i) {
        const double Qb = q(rng), Qc = q(rng), om = w(rng) * G;
        if (std::abs(om) < 1e-3 * G) continue;

        // Single-resonance reduction is the same code path, so equal bit for bit.
        const auto e0 = eff(Qb, Qc, 0, 0, 0);
        for (Level j : {Level::b, Level::c})
            for (Level k : {Level::b, Level::c})
                CHECK(r_jk_analytic(j, k, om, e0, 2, 3).value == r_jk_reduced(j, k, om, e0, 2, 3).value);

        // Bilinearity in the dipoles.
        const auto e = eff(Qb, Qc, q(rng) / 5, q(rng) / 5, g21(rng));
        const cplx base = r_jk_analytic(Level::b, Level::c, om, e, 1, 1).value;
        CHECK(rel(r_jk_analytic(Level::b, Level::c, om, e, 2.5, -3).value, -7.5 * base) < 1e-14);

        // Exchange symmetry of Rbc Rcb under b <-> c.
        const auto sw = EffectiveParams{e.Qc, e.Qb, e.Qc21, e.Qb21, e.Gamma, e.Gamma21};
        const cplx prod = r_jk_analytic(Level::b, Level::c, om, e, 2, 3).value *
                          r_jk_analytic(Level::c, Level::b, om, e, 3, 2).value;
        const cplx prod_sw = r_jk_analytic(Level::b, Level::c, om, sw, 3, 2).value *
                             r_jk_analytic(Level::c, Level::b, om, sw, 2, 3).value;
        CHECK(rel(prod_sw, prod) < 1e-12);
    }
}

TEST_CASE("analytic R: errors") {
    const auto e = eff(20, 20, 1, 8, 0);
    CHECK_THROWS_AS(r_jk_analytic(Level::b, Level::b, 0.0, e, 2, 2), PoleError);
    CHECK_NOTHROW(r_jk_analytic(Level::b, Level::b, 0.0, eff(20, 20, 0, 0, 0), 2, 2));
    CHECK_THROWS_AS(r_jk_analytic(Level::b, Level::b, G, eff(20, 20, 1, 8, 1.0), 2, 2), NumericalError);
    CHECK(bound_state_numerator(Level::b, Level::c, eff(15, 20, 1, 6, 0.1)) ==
          doctest::Approx((1 - 0.1 * 15) * (6 - 0.1 * 20)));
}

TEST_CASE("susceptibility") {
    SystemParams p;
    FieldParams f;
    const auto e = effective_params(p);

    SUBCASE("frozen values") {
        const cplx want[] = {{-1.9358140311882135e-10, 6.9248534659103036e-12},
                             {1.5895335133531953e-09, 1.912342984829478e-09},
                             {-1.2375644691946916e-09, 8.9817180262412148e-10}};
        const double ws[] = {-0.25, 0.5, 2.0};
        for (int i = 0; i < 3; ++i) CHECK(rel(susceptibility(ws[i] * G, p, f).chi, want[i]) < 1e-12);
    }
    SUBCASE("no control field gives the bare profile exactly") {
        f.eps2 = 0;
        for (double w : {-3.0, -0.2, 0.7, 5.0}) {
            const cplx rbb = r_jk_analytic(Level::b, Level::b, w * G, e, p.Db, p.Db).value;
            CHECK(susceptibility(w * G, p, f).chi == -(p.density_N / units::eps0) * rbb);
        }
    }
    SUBCASE("weak control field") {
        f.eps2 = 1e-9;
        for (double w : {-3.0, -0.2, 0.7, 5.0}) {
            const cplx chi = susceptibility(w * G, p, f).chi;
            const cplx bare = -(p.density_N / units::eps0) * r_jk_analytic(Level::b, Level::b, w * G, e, 2, 2).value;
            CHECK(std::abs(chi - bare) < 1e-3 * std::abs(chi));
        }
    }
    SUBCASE("chi_from_r matches") {
        const double w = 0.37 * G;
        const auto r = [&](Level j, Level k) { return r_jk_analytic(j, k, w, e, p.dipole(j), p.dipole(k)).value; };
        CHECK(chi_from_r(w, r(Level::b, Level::b), r(Level::b, Level::c), r(Level::c, Level::b),
                         r(Level::c, Level::c), p, f) == susceptibility(w, p, f).chi);
    }
}

TEST_CASE("detuning grid and spectrum") {
    const auto g = DetuningGrid::uniform(-10, 10, 4001, 1e-3, G);
    CHECK_NOTHROW(g.validate());
    CHECK(g.omega_values.size() == 4000);  // omega = 0 excluded
    CHECK(g.omega_values.back() == 10 * G);
    for (double w : g.omega_values) CHECK(std::abs(w) >= g.omega_min_exclusion);

    SystemParams p;
    FieldParams f;
    CHECK(spectrum(DetuningGrid{}, p, f).points.empty());
    DetuningGrid two{{-G, 2 * G}, 0};
    const auto s2 = spectrum(two, p, f);
    REQUIRE(s2.points.size() == 2);
    CHECK(s2.points[0].omega == -G);

    const auto s = spectrum(g, p, f);
    REQUIRE(s.points.size() == g.omega_values.size());
    double max_im = 0;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        CHECK(s.points[i] == susceptibility(g.omega_values[i], p, f));
        max_im = std::max(max_im, s.points[i].chi.imag());
    }
    for (const auto& pt : s.points) CHECK(pt.chi.imag() >= -1e-6 * max_im);

    DetuningGrid bad{{G, 0.5 * G}, 0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    DetuningGrid inside{{-G, 1e-5 * G, G}, 1e-3 * G};
    CHECK_THROWS_AS(inside.validate(), ConfigError);
}
