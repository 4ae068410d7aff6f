#include <algorithm>
#include <cmath>
#include <sstream>
#include <mutex>
#include <thread>

#include "fanoeit/detail/etd.hpp"
#include "fanoeit/dynamics.hpp"
#include "fanoeit/kernels.hpp"

namespace fanoeit {

namespace {

constexpr cplx I{0.0, 1.0};

// Split-complex array.
struct SoA {
    std::vector<double> re, im;
    explicit SoA(std::size_t n = 0) : re(n, 0.0), im(n, 0.0) {}
    void set(std::size_t i, cplx z) {
        re[i] = z.real();
        im[i] = z.imag();
    }
    cplx get(std::size_t i) const { return {re[i], im[i]}; }
    kernels::CView view() const { return {re.data(), im.data()}; }
    kernels::MView mut() { return {re.data(), im.data()}; }
};

// Continuum dipoles <j|d|E) on the bins, plus the optional bound state last.
struct Couplings {
    std::vector<double> x, w;
    std::vector<cplx> a, c;  // level b, level c
};

Couplings couplings(const ContinuumGrid& grid, const SystemParams& p, bool bound_state) {
    const EffectiveParams eff = effective_params(p);
    Couplings k;
    k.x = grid.bin_centers;
    k.w = grid.bin_weights;
    for (double x : grid.bin_centers) {
        k.a.push_back(p.Db * fano_ratio(x, 0.0, 0.0, p.gamma1, p.gamma2, p.q1b, p.q2b));
        k.c.push_back(p.Dc * fano_ratio(x, 0.0, 0.0, p.gamma1, p.gamma2, p.q1c, p.q2c));
    }
    if (bound_state) {
        // Weight of the 1/omega term: Dj u_j sqrt(pi Gamma / (1 - Gamma21^2)).
        const double s = std::sqrt(units::pi * eff.Gamma / (1.0 - eff.Gamma21 * eff.Gamma21));
        k.x.push_back(0.0);
        k.w.push_back(1.0);
        k.a.push_back(p.Db * (eff.Qb21 - eff.Gamma21 * eff.Qb) * s);
        k.c.push_back(p.Dc * (eff.Qc21 - eff.Gamma21 * eff.Qc) * s);
    }
    return k;
}

}  // namespace

void DynamicsConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0) || !std::isfinite(v)) throw ConfigError(std::string("dynamics.") + name + ": must be > 0");
    };
    positive(W_over_gamma, "W");
    positive(eta_over_spacing, "eta_over_spacing");
    positive(dt_gamma, "dt");
    positive(ramp_over_eta, "ramp_over_eta");
    positive(check_interval_gamma, "check_interval");
    positive(tolerance, "tolerance");
    positive(max_time_over_eta, "max_time_over_eta");
    if (W_over_gamma < 100) throw ConfigError("dynamics.W: must be >= 100 (units of Gamma)");
    if (n_bins < 1000) throw ConfigError("dynamics.n_bins: must be >= 1000");
}

DynamicsState integrate_steady(const ContinuumGrid& grid, double omega, const SystemParams& p, const FieldParams& f,
                               const DynamicsConfig& cfg) {
    p.validate();
    f.validate();
    cfg.validate();
    const double G = p.Gamma();
    const double eta = cfg.eta_over_spacing * grid.core_spacing;
    if (std::abs(omega) > grid.core_half_width - 10.0 * eta)
        throw ConfigError("dynamics: omega lies outside the densified core of the continuum grid");
    if (!(p.gamma_cb > 0) && f.eps2 > 0) throw ConfigError("dynamics: gamma_cb must be > 0 for a steady state");

    const Couplings k = couplings(grid, p, cfg.bound_state);
    const std::size_t n = k.x.size();
    const double h = cfg.dt_gamma / G;

    SoA E(n), E2(n), Q(n), f1(n), f2(n), f3(n), A(n), C(n), WC(n), WA(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx L(-eta, -(k.x[i] - omega));
        const auto co = detail::etd_coefficients(L * h);
        E.set(i, co.E);
        E2.set(i, co.E2);
        Q.set(i, h * co.Q);
        f1.set(i, h * co.f1);
        f2.set(i, h * co.f2);
        f3.set(i, h * co.f3);
        A.set(i, std::conj(k.a[i]));
        C.set(i, std::conj(k.c[i]));
        WC.set(i, k.w[i] * k.c[i]);
        WA.set(i, k.w[i] * k.a[i]);
    }
    const auto cb = detail::etd_coefficients(cplx(-p.gamma_cb, -(f.delta_c - omega)) * h);
    const cplx Qcb = h * cb.Q, f1cb = h * cb.f1, f2cb = h * cb.f2, f3cb = h * cb.f3;

    const double kappa = 0.5 * f.eps2;
    const double ramp = cfg.ramp_over_eta / eta;
    auto source = [&](double t) {
        double s = 1.0;
        if (t < ramp) {
            const double v = std::sin(0.5 * units::pi * t / ramp);
            s = v * v;
        }
        return I * (0.5 * f.eps1) * s;
    };

    SoA u(n), sa(n), sb(n), sc(n);
    cplx ucb{}, red_u{}, pol{};
    const double interval = cfg.check_interval_gamma / G;
    const double t_max = ramp + cfg.max_time_over_eta / eta;
    double next_check = ramp + interval;
    bool have_last = false;
    cplx last_pol{}, last_cb{};

    DynamicsState st;
    st.eta = eta;
    st.dt = h;
    double t = 0.0;
    while (true) {
        const cplx al_u = source(t), al_h = source(t + 0.5 * h), al_1 = source(t + h);
        const cplx be_u = I * kappa * ucb;
        const cplx n_u = I * kappa * red_u;

        const cplx red_a = kernels::stage({n, E2.view(), u.view(), Q.view(), A.view(), C.view(), WC.view(), al_u,
                                           be_u, sa.mut()});
        const cplx acb = cb.E2 * ucb + Qcb * n_u;
        const cplx be_a = I * kappa * acb;
        const cplx n_a = I * kappa * red_a;

        const cplx red_b = kernels::stage({n, E2.view(), u.view(), Q.view(), A.view(), C.view(), WC.view(), al_h,
                                           be_a, sb.mut()});
        const cplx bcb = cb.E2 * ucb + Qcb * n_a;
        const cplx be_b = I * kappa * bcb;
        const cplx n_b = I * kappa * red_b;

        const cplx red_c = kernels::stage({n, E2.view(), sa.view(), Q.view(), A.view(), C.view(), WC.view(),
                                           2.0 * al_h - al_u, 2.0 * be_b - be_u, sc.mut()});
        const cplx ccb = cb.E2 * acb + Qcb * (2.0 * n_b - n_u);
        const cplx be_c = I * kappa * ccb;
        const cplx n_c = I * kappa * red_c;

        const kernels::Sums s = kernels::final_update({n, E.view(), f1.view(), f2.view(), f3.view(), A.view(),
                                                       C.view(), WC.view(), WA.view(), al_u, 4.0 * al_h, al_1, be_u,
                                                       2.0 * (be_a + be_b), be_c, u.mut()});
        ucb = cb.E * ucb + f1cb * n_u + 2.0 * f2cb * (n_a + n_b) + f3cb * n_c;
        red_u = s.wc;
        pol = p.density_N * s.wa;
        t += h;
        ++st.steps;

        if (!std::isfinite(pol.real()) || !std::isfinite(pol.imag()) || !std::isfinite(ucb.real())) {
            std::ostringstream os;
            os << "dynamics: stiffness failure at t = " << t * G << "/Gamma (dt = " << cfg.dt_gamma
               << "/Gamma, max |L dt| = " << (std::max(std::abs(omega) + grid.span_hi, 1.0) * h) << ")";
            throw NumericalError(os.str());
        }
        if (t >= next_check) {
            next_check += interval;
            if (cfg.trace) st.trace.push_back({t, pol, ucb});
            if (have_last) {
                const bool p_ok = std::abs(pol - last_pol) <= cfg.tolerance * std::abs(pol);
                const bool c_ok = std::abs(ucb - last_cb) <= cfg.tolerance * std::abs(ucb);
                const bool zero = pol == cplx{} && last_pol == cplx{} && ucb == cplx{} && last_cb == cplx{};
                if ((p_ok && c_ok) || zero) {
                    st.converged = true;
                    break;
                }
            }
            have_last = true;
            last_pol = pol;
            last_cb = ucb;
        }
        if (t > t_max) break;
    }
    if (!st.converged) {
        std::ostringstream os;
        os << "dynamics: no steady state within " << st.steps << " steps (t = " << t * G << "/Gamma)";
        throw ConvergenceError(os.str());
    }
    const std::size_t nb = grid.bin_centers.size();
    st.rho_Eb.resize(nb);
    for (std::size_t i = 0; i < nb; ++i) st.rho_Eb[i] = u.get(i);
    if (cfg.bound_state) st.rho_bound = u.get(nb);
    st.rho_cb = ucb;
    st.time = t;
    return st;
}

SusceptibilityPoint chi_from_dynamics(const DynamicsState& state, const ContinuumGrid& grid, const SystemParams& p,
                                      const FieldParams& f) {
    if (!state.converged) throw NumericalError("chi_from_dynamics: state is not converged");
    if (state.rho_Eb.size() != grid.bin_centers.size()) throw NumericalError("chi_from_dynamics: grid mismatch");
    const Couplings k = couplings(grid, p, state.rho_bound.has_value());
    cplx sum{};
    for (std::size_t i = 0; i < state.rho_Eb.size(); ++i) sum += k.w[i] * k.a[i] * state.rho_Eb[i];
    if (state.rho_bound) sum += k.a.back() * *state.rho_bound;
    const cplx P = p.density_N * sum;
    // P is the amplitude against the positive-frequency field eps1 / 2.
    const cplx chi = f.eps1 > 0 ? 2.0 * P / (units::eps0 * f.eps1) : cplx{};
    return {0.0, chi};
}

cplx chi_without_bound_state(double omega, const SystemParams& p, const FieldParams& f) {
    const EffectiveParams eff = effective_params(p);
    const cplx bb = r_jk_reduced(Level::b, Level::b, omega, eff, p.Db, p.Db).value;
    const cplx bc = r_jk_reduced(Level::b, Level::c, omega, eff, p.Db, p.Dc).value;
    const cplx cb = r_jk_reduced(Level::c, Level::b, omega, eff, p.Dc, p.Db).value;
    const cplx cc = r_jk_reduced(Level::c, Level::c, omega, eff, p.Dc, p.Dc).value;
    return chi_from_r(omega, bb, bc, cb, cc, p, f);
}

DynamicsEstimate estimate_chi(double omega, const SystemParams& p, const FieldParams& f, const DynamicsConfig& cfg) {
    const double G = p.Gamma();
    const ContinuumGrid grid = build_grid(cfg.W_over_gamma * G, cfg.n_bins, p, cfg.layout);
    const DynamicsState st = integrate_steady(grid, omega, p, f, cfg);
    DynamicsEstimate e;
    e.omega = omega;
    e.chi_raw = chi_from_dynamics(st, grid, p, f).chi;
    e.chi = e.chi_raw;
    e.time = st.time;
    e.steps = st.steps;
    e.eta = st.eta;
    if (cfg.eta_extrapolation) {
        DynamicsConfig c2 = cfg;
        c2.eta_over_spacing = 2.0 * cfg.eta_over_spacing;
        const DynamicsState st2 = integrate_steady(grid, omega, p, f, c2);
        e.chi_double_eta = chi_from_dynamics(st2, grid, p, f).chi;
        e.chi = 2.0 * e.chi_raw - *e.chi_double_eta;
        e.steps += st2.steps;
    }
    return e;
}

ConvergenceStudy convergence_study(double omega, const SystemParams& p, const FieldParams& f,
                                   const DynamicsConfig& cfg, int doublings) {
    ConvergenceStudy s;
    s.omega = omega;
    for (int level = doublings; level >= 0; --level) {
        DynamicsConfig c = cfg;
        c.n_bins = cfg.n_bins >> level;
        s.n_bins.push_back(c.n_bins);
        s.chi.push_back(estimate_chi(omega, p, f, c).chi);
    }
    for (std::size_t i = 1; i < s.chi.size(); ++i)
        s.successive_change.push_back(std::abs(s.chi[i] - s.chi[i - 1]) / std::abs(s.chi[i]));
    s.monotone = true;
    for (std::size_t i = 1; i < s.successive_change.size(); ++i)
        if (!(s.successive_change[i] < s.successive_change[i - 1])) s.monotone = false;
    s.analytic = cfg.bound_state ? susceptibility(omega, p, f).chi : chi_without_bound_state(omega, p, f);
    s.relative_error = std::abs(s.chi.back() - s.analytic) / std::abs(s.analytic);
    return s;
}

DynamicsComparison compare_dynamics(const std::vector<double>& omegas, const SystemParams& p, const FieldParams& f,
                                    const DynamicsConfig& cfg, bool with_no_bound, unsigned threads) {
    DynamicsComparison out;
    out.points.resize(omegas.size());
    std::exception_ptr failure;
    auto one = [&](std::size_t i) {
        auto& pt = out.points[i];
        pt.omega = omegas[i];
        DynamicsConfig c = cfg;
        c.bound_state = true;
        pt.dynamics = estimate_chi(pt.omega, p, f, c).chi;
        pt.analytic = susceptibility(pt.omega, p, f).chi;
        pt.relative_error = std::abs(pt.dynamics - pt.analytic) / std::abs(pt.analytic);
        if (with_no_bound) {
            c.bound_state = false;
            pt.dynamics_no_bound = estimate_chi(pt.omega, p, f, c).chi;
            pt.analytic_no_bound = chi_without_bound_state(pt.omega, p, f);
            pt.relative_error_no_bound = std::abs(pt.dynamics_no_bound - pt.analytic_no_bound) /
                                         std::abs(pt.analytic_no_bound);
        }
    };
    const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(omegas.size())));
    if (nt <= 1) {
        for (std::size_t i = 0; i < omegas.size(); ++i) one(i);
    } else {
        std::mutex m;
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < omegas.size(); i += nt) {
                    try {
                        one(i);
                    } catch (...) {
                        std::lock_guard lock(m);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }
    for (const auto& pt : out.points) out.max_relative_error = std::max(out.max_relative_error, pt.relative_error);
    out.pass = !out.points.empty() && out.max_relative_error <= out.tolerance;
    return out;
}

}  // namespace fanoeit
