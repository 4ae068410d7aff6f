#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "fanoeit/oracle.hpp"

namespace fanoeit {

namespace {

constexpr Level kLevels[2] = {Level::b, Level::c};

bool ladder_monotone(const ExtrapolationReport& rep) {
    const auto& v = rep.values_at_ladder;
    if (v.size() < 3) return true;
    const std::size_t n = v.size();
    const double e0 = std::abs(v[n - 3] - rep.extrapolated);
    const double e1 = std::abs(v[n - 2] - rep.extrapolated);
    const double e2 = std::abs(v[n - 1] - rep.extrapolated);
    return e0 > e1 && e1 > e2;
}

void certify_point(double omega, const SystemParams& p, const EffectiveParams& eff, const OracleConfig& cfg,
                   const CertifyOptions& opt, CertificationEntry* out) {
    std::array<OracleResult, 4> quad;
    bool quad_ok = true;
    try {
        quad = r_quadrature_all(omega, p, cfg);
    } catch (const NumericalError&) {
        quad_ok = false;
    }
    for (int m = 0; m < 4; ++m) {
        CertificationEntry& e = out[m];
        e.j = kLevels[m / 2];
        e.k = kLevels[m % 2];
        e.omega = omega;
        e.analytic = r_jk_analytic(e.j, e.k, omega, eff, p.dipole(e.j), p.dipole(e.k), opt.sign).value;
        if (!quad_ok) {
            e.deviation_quadrature = std::numeric_limits<double>::infinity();
            e.deviation = e.deviation_quadrature;
            continue;
        }
        e.quadrature = quad[m].r.value;
        e.deviation_quadrature = std::abs(e.analytic - e.quadrature) / std::abs(e.quadrature);
        e.residual = quad[m].report.residual / std::abs(e.quadrature);
        e.ladder_monotone = ladder_monotone(quad[m].report);
        e.deviation = e.deviation_quadrature;
        if (opt.use_residue) {
            try {
                const auto res = r_jk_residue_ladder(e.j, e.k, omega, p, cfg);
                e.residue = res.r.value;
                e.deviation_residue = std::abs(e.analytic - *e.residue) / std::abs(*e.residue);
                e.deviation = std::max(e.deviation, *e.deviation_residue);
            } catch (const NumericalError&) {
                // Residue path unavailable here (clustered roots); quadrature stands alone.
            }
        }
    }
}

}  // namespace

CertificationReport certify_analytic(const DetuningGrid& grid, const SystemParams& p, const OracleConfig& cfg,
                                     const CertifyOptions& opt) {
    p.validate();
    cfg.validate();
    const EffectiveParams eff = effective_params(p);
    const double band = std::max(grid.omega_min_exclusion, opt.exclusion_over_gamma * eff.Gamma);
    const std::size_t n = grid.omega_values.size();

    CertificationReport rep;
    rep.threshold = opt.threshold;
    rep.entries.resize(4 * n);

    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < n; i += stride) {
            const double w = grid.omega_values[i];
            CertificationEntry* out = &rep.entries[4 * i];
            if (std::abs(w) < band) {
                for (int m = 0; m < 4; ++m) {
                    out[m].j = kLevels[m / 2];
                    out[m].k = kLevels[m % 2];
                    out[m].omega = w;
                    out[m].skipped = true;
                }
                continue;
            }
            certify_point(w, p, eff, cfg, opt, out);
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
        for (auto& th : pool) th.join();
    }

    for (const auto& e : rep.entries) {
        if (e.skipped) {
            ++rep.skipped;
            continue;
        }
        if (!e.residue) ++rep.residue_unavailable;
        if (!e.ladder_monotone) ++rep.ladder_flags;
        if (!(e.deviation <= rep.max_deviation)) {
            rep.max_deviation = e.deviation;
            rep.max_at_omega = e.omega;
            rep.max_j = e.j;
            rep.max_k = e.k;
        }
    }
    rep.pass = rep.max_deviation <= opt.threshold;
    return rep;
}

}  // namespace fanoeit
