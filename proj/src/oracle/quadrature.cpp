#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include "fanoeit/detail/gauss_kronrod.hpp"
#include "fanoeit/detail/richardson.hpp"
#include "fanoeit/oracle.hpp"

namespace fanoeit {

namespace {

constexpr cplx I{0.0, 1.0};
using Pair = std::pair<int, int>;  // 0 = b, 1 = c

// Two resonances at t = 0 and t = dE, energies in units of Gamma.
struct Rung {
    double dE = 0, g1 = 0, g2 = 0;
    std::array<double, 2> q1{}, q2{};
    bool flat = false;

    // F - 1 without cancellation: (num - den) / den.
    cplx ratio_minus_one(int lvl, double t) const {
        if (flat) return {};
        const double a = t, b = t - dE;
        const double s = g1 * b + g2 * a;
        const cplx den(a * b, -s);
        const cplx diff(q1[lvl] * g1 * b + q2[lvl] * g2 * a, s);
        return diff / den;
    }

    // The pair of roots of the shared denominator; the one closer to the real
    // axis is the narrowing bound-state resonance.
    cplx narrow_pole() const {
        const cplx B = dE + I * (g1 + g2);
        const cplx C = I * g1 * dE;
        const cplx disc = std::sqrt(B * B - 4.0 * C);
        const cplx big = std::abs(B + disc) >= std::abs(B - disc) ? 0.5 * (B + disc) : 0.5 * (B - disc);
        return C / big;
    }
};

Rung make_rung(const SystemParams& p, double delta_e, Profile profile) {
    const double G = p.Gamma();
    Rung r;
    r.dE = delta_e / G;
    r.g1 = p.gamma1 / G;
    r.g2 = p.gamma2 / G;
    r.q1 = {p.q1b, p.q1c};
    r.q2 = {p.q2b, p.q2c};
    r.flat = profile == Profile::flat;
    return r;
}

template <std::size_t M>
struct PairSet {
    std::array<Pair, M> pairs;

    detail::CVec<M> h(const Rung& r, double t) const {
        std::array<cplx, 2> fm1 = {r.ratio_minus_one(0, t), r.ratio_minus_one(1, t)};
        detail::CVec<M> out;
        for (std::size_t m = 0; m < M; ++m) {
            const auto [j, k] = pairs[m];
            out[m] = fm1[j] * std::conj(1.0 + fm1[k]) + std::conj(fm1[k]);
        }
        return out;
    }
};

template <std::size_t M>
struct RungValue {
    detail::CVec<M> value{};
    double error = 0;
    std::array<double, M> tail_bound{};
};

std::vector<double> breakpoints(const Rung& r, double w, double L, double floor, double eta) {
    std::vector<double> b = {-L, L, w, 0.0, r.dE};
    for (double s = 1.0; s < L; s *= 10.0) {
        for (double v : {s, 3.0 * s}) {
            if (v < L) {
                b.push_back(v);
                b.push_back(-v);
            }
        }
    }
    if (!r.flat) {
        const cplx pole = r.narrow_pole();
        const double c = pole.real(), width = std::abs(pole.imag());
        b.push_back(c);
        for (double s = width; s < 4.0; s *= 4.0) {
            b.push_back(c - s);
            b.push_back(c + s);
        }
    }
    if (eta > 0) {
        for (double s = eta; s < 4.0; s *= 4.0) {
            b.push_back(w - s);
            b.push_back(w + s);
        }
    }
    std::sort(b.begin(), b.end());
    std::vector<double> out;
    for (double x : b) {
        if (x < -L || x > L) continue;
        if (!out.empty() && x - out.back() <= floor) continue;
        out.push_back(x);
    }
    if (out.back() != L) out.back() = L;  // a break within floor of L replaced it
    return out;
}

void check_pole_geometry(const Rung& r, double w, double floor) {
    if (r.flat) return;
    const cplx pole = r.narrow_pole();
    if (std::abs(pole.imag()) < floor) {
        std::ostringstream os;
        os << "quadrature: bound-state width " << std::abs(pole.imag()) << " Gamma below refinement floor";
        throw ConvergenceError(os.str());
    }
    if (std::abs(w - pole.real()) < floor) throw PoleError("quadrature: probe pole collides with the bound-state pole");
}

// One splitting. eta = 0 uses the Plemelj split, eta > 0 integrates the
// regularized kernel directly. All in units of Gamma.
template <std::size_t M>
RungValue<M> rung_integral(const Rung& r, const PairSet<M>& ps, double w, double eta, const OracleConfig& cfg) {
    check_pole_geometry(r, w, cfg.refinement_floor);
    const double L = cfg.truncation_L;
    const cplx wz(w, eta);
    RungValue<M> out;
    if (r.flat) {
        out.value.fill(-I * units::pi);
        return out;
    }
    const auto br = breakpoints(r, w, L, cfg.refinement_floor, eta);
    detail::CVec<M> hw{};
    if (eta == 0) hw = ps.h(r, w);

    auto body = [&](double t) {
        auto v = ps.h(r, t);
        if (eta == 0) {
            const double inv = 1.0 / (w - t);
            for (std::size_t m = 0; m < M; ++m) v[m] = (v[m] - hw[m]) * inv;
        } else {
            const cplx inv = 1.0 / (wz - t);
            for (auto& z : v) z *= inv;
        }
        return v;
    };
    auto main = detail::integrate<M>(body, br, cfg.abs_tol, cfg.rel_tol, cfg.refinement_floor, cfg.max_segments);
    if (!main.converged) {
        std::ostringstream os;
        os << "quadrature: adaptive refinement did not converge (error " << main.error << ", narrowest segment "
           << main.narrowest << " Gamma)";
        throw ConvergenceError(os.str());
    }

    // Tails |t| > L through t = +-1/u; smooth on [0, 1/L].
    auto tail = [&](double u) {
        auto right = ps.h(r, 1.0 / u);
        auto left = ps.h(r, -1.0 / u);
        detail::CVec<M> v;
        for (std::size_t m = 0; m < M; ++m) v[m] = right[m] / (u * (wz * u - 1.0)) + left[m] / (u * (wz * u + 1.0));
        return v;
    };
    const std::array<double, 2> tb = {0.0, 1.0 / L};
    auto tails = detail::integrate<M>(tail, tb, cfg.abs_tol, cfg.rel_tol, 0.0, 64);

    const double log_term = std::log((L + w) / (L - w));
    for (std::size_t m = 0; m < M; ++m) {
        cplx v = main.value[m] + tails.value[m];
        if (eta == 0) {
            v += -I * units::pi * (1.0 + hw[m]) + hw[m] * log_term;
        } else {
            v += -I * units::pi;
        }
        out.value[m] = v;
        // Leading 1/t coefficient of h is Q_j + Q_k (scaled).
        const auto [j, k] = ps.pairs[m];
        const double c1 = r.q1[j] * r.g1 + r.q2[j] * r.g2 + r.q1[k] * r.g1 + r.q2[k] * r.g2;
        out.tail_bound[m] = 2.0 * std::abs(c1) / L;
    }
    out.error = main.error + tails.error;
    return out;
}

double dipole(const SystemParams& p, int lvl) { return lvl == 0 ? p.Db : p.Dc; }

template <std::size_t M>
std::array<OracleResult, M> ladder_plemelj(const PairSet<M>& ps, double omega, const SystemParams& p,
                                           const OracleConfig& cfg, double eta_scaled,
                                           std::vector<double>* ladder_out = nullptr) {
    const double G = p.Gamma();
    const double w = omega / G;
    const auto ladder = ladder_for(omega, G, cfg);
    std::array<OracleResult, M> res;
    std::vector<double> xs;
    double worst = 0;
    for (double dE : ladder) {
        const Rung r = make_rung(p, dE, cfg.profile);
        RungValue<M> v;
        try {
            v = rung_integral<M>(r, ps, w, eta_scaled, cfg);
        } catch (const NumericalError& e) {
            std::ostringstream os;
            os << e.what() << " at splitting " << dE / G << " Gamma";
            const auto& vals = res[0].report.values_at_ladder;
            if (vals.size() >= 2) {
                os << "; last two ladder values " << vals[vals.size() - 2] << ", " << vals.back();
            }
            if (dynamic_cast<const PoleError*>(&e)) throw PoleError(os.str());
            throw ConvergenceError(os.str());
        }
        xs.push_back(dE / G);
        worst = std::max(worst, v.error);
        for (std::size_t m = 0; m < M; ++m) {
            const auto [j, k] = ps.pairs[m];
            res[m].report.values_at_ladder.push_back(dipole(p, j) * dipole(p, k) * v.value[m]);
            res[m].tail_bound = std::max(res[m].tail_bound, dipole(p, j) * dipole(p, k) * v.tail_bound[m]);
        }
    }
    for (std::size_t m = 0; m < M; ++m) {
        auto& rep = res[m].report;
        rep.ladder = ladder;
        const int order = std::min<int>(cfg.richardson_order, static_cast<int>(xs.size()) - 1);
        if (order >= 1) {
            const auto ex = detail::richardson(xs, rep.values_at_ladder, order);
            rep.extrapolated = ex.value;
            rep.residual = ex.residual;
        } else {
            rep.extrapolated = rep.values_at_ladder.back();
            rep.residual = 0;
        }
        const auto [j, k] = ps.pairs[m];
        const double scale = std::abs(dipole(p, j) * dipole(p, k));
        res[m].quadrature_error = worst * scale;
        res[m].r = RValue{rep.extrapolated, Method::quadrature, res[m].quadrature_error + rep.residual};
    }
    if (ladder_out) *ladder_out = ladder;
    return res;
}

template <std::size_t M>
std::array<OracleResult, M> run_ladder(const PairSet<M>& ps, double omega, const SystemParams& p,
                                       const OracleConfig& cfg) {
    cfg.validate();
    p.validate();
    const double G = p.Gamma();
    if (omega == 0.0) throw PoleError("quadrature: omega = 0 is excluded");
    if (cfg.limit_order == LimitOrder::plemelj_first) return ladder_plemelj<M>(ps, omega, p, cfg, 0.0);

    // Splitting -> 0 at each fixed eta, then eta -> 0.
    const double scale = std::min(1.0, std::abs(omega) / G);
    std::vector<double> etas;
    std::array<std::vector<cplx>, M> per_eta;
    std::array<double, M> resid{}, qerr{}, tail{};
    for (double e : cfg.eta_ladder) {
        const double eta = e * scale;
        auto r = ladder_plemelj<M>(ps, omega, p, cfg, eta);
        etas.push_back(eta);
        for (std::size_t m = 0; m < M; ++m) {
            per_eta[m].push_back(r[m].report.extrapolated);
            resid[m] = std::max(resid[m], r[m].report.residual);
            qerr[m] = std::max(qerr[m], r[m].quadrature_error);
            tail[m] = std::max(tail[m], r[m].tail_bound);
        }
    }
    std::array<OracleResult, M> out;
    for (std::size_t m = 0; m < M; ++m) {
        auto& rep = out[m].report;
        rep.ladder.clear();
        for (double e : etas) rep.ladder.push_back(e * G);
        rep.values_at_ladder = per_eta[m];
        const int order = std::min<int>(cfg.richardson_order, static_cast<int>(etas.size()) - 1);
        const auto ex = detail::richardson(etas, per_eta[m], order);
        rep.extrapolated = ex.value;
        rep.residual = ex.residual + resid[m];
        out[m].quadrature_error = qerr[m];
        out[m].tail_bound = tail[m];
        out[m].r = RValue{ex.value, Method::quadrature, qerr[m] + rep.residual};
    }
    return out;
}

int index(Level l) { return l == Level::b ? 0 : 1; }

}  // namespace

void OracleConfig::validate() const {
    if (delta_e_ladder.empty()) throw ConfigError("oracle.delta_e_ladder: must not be empty");
    for (std::size_t i = 0; i < delta_e_ladder.size(); ++i) {
        if (!(delta_e_ladder[i] > 0) || !std::isfinite(delta_e_ladder[i]))
            throw ConfigError("oracle.delta_e_ladder: entries must be finite and > 0");
        if (i > 0 && !(delta_e_ladder[i] < delta_e_ladder[i - 1]))
            throw ConfigError("oracle.delta_e_ladder: must be strictly decreasing");
    }
    if (!(truncation_L >= 1e3)) throw ConfigError("oracle.truncation_L: must be >= 1e3 (units of Gamma)");
    if (!(abs_tol > 0) || !(rel_tol > 0)) throw ConfigError("oracle: tolerances must be > 0");
    if (!(refinement_floor > 0)) throw ConfigError("oracle.refinement_floor: must be > 0");
    if (!(ladder_omega_fraction >= 0)) throw ConfigError("oracle.ladder_omega_fraction: must be >= 0");
    if (richardson_order < 1) throw ConfigError("oracle.richardson_order: must be >= 1");
    if (max_segments < 16) throw ConfigError("oracle.max_segments: must be >= 16");
    if (limit_order == LimitOrder::finite_eta) {
        if (eta_ladder.size() < 2) throw ConfigError("oracle.eta_ladder: needs at least two values");
        for (std::size_t i = 0; i < eta_ladder.size(); ++i) {
            if (!(eta_ladder[i] > 0)) throw ConfigError("oracle.eta_ladder: entries must be > 0");
            if (i > 0 && !(eta_ladder[i] < eta_ladder[i - 1]))
                throw ConfigError("oracle.eta_ladder: must be strictly decreasing");
        }
    }
}

std::vector<double> ladder_for(double omega, double Gamma, const OracleConfig& cfg) {
    double s = 1.0;
    if (cfg.ladder_omega_fraction > 0) s = std::min(1.0, cfg.ladder_omega_fraction * std::abs(omega) / Gamma);
    std::vector<double> out;
    for (double d : cfg.delta_e_ladder) out.push_back(d * s * Gamma);
    return out;
}

RValue r_jk_quadrature_rung(Level j, Level k, double omega, const SystemParams& p, double delta_e,
                            const OracleConfig& cfg) {
    cfg.validate();
    p.validate();
    if (!(delta_e > 0)) throw ConfigError("quadrature: splitting must be > 0");
    const double G = p.Gamma();
    const PairSet<1> ps{{Pair{index(j), index(k)}}};
    const Rung r = make_rung(p, delta_e, cfg.profile);
    const auto v = rung_integral<1>(r, ps, omega / G, 0.0, cfg);
    const double s = p.dipole(j) * p.dipole(k);
    return RValue{s * v.value[0], Method::quadrature, std::abs(s) * v.error};
}

OracleResult r_jk_quadrature(Level j, Level k, double omega, const SystemParams& p, const OracleConfig& cfg) {
    const PairSet<1> ps{{Pair{index(j), index(k)}}};
    return run_ladder<1>(ps, omega, p, cfg)[0];
}

std::array<OracleResult, 4> r_quadrature_all(double omega, const SystemParams& p, const OracleConfig& cfg) {
    const PairSet<4> ps{{Pair{0, 0}, Pair{0, 1}, Pair{1, 0}, Pair{1, 1}}};
    return run_ladder<4>(ps, omega, p, cfg);
}

}  // namespace fanoeit
