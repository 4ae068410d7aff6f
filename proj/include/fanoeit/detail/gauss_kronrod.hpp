#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace fanoeit::detail {

// 21-point Kronrod rule with embedded 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> gk21_x = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> gk21_wk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980284430, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for gk21_x[1], [3], [5], [7], [9].
inline constexpr std::array<double, 5> gk21_wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <std::size_t M>
using CVec = std::array<std::complex<double>, M>;

template <std::size_t M>
struct Segment {
    double a = 0, b = 0;
    CVec<M> value{};
    double error = 0;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <std::size_t M, class F>
Segment<M> gk21(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    CVec<M> k{}, g{};
    const CVec<M> fc = f(c);
    for (std::size_t m = 0; m < M; ++m) k[m] = gk21_wk[10] * fc[m];
    for (std::size_t i = 0; i < 10; ++i) {
        const double dx = h * gk21_x[i];
        const CVec<M> f1 = f(c - dx);
        const CVec<M> f2 = f(c + dx);
        for (std::size_t m = 0; m < M; ++m) {
            const auto s = f1[m] + f2[m];
            k[m] += gk21_wk[i] * s;
            if (i % 2 == 1) g[m] += gk21_wg[i / 2] * s;
        }
    }
    Segment<M> seg{a, b, {}, 0.0};
    for (std::size_t m = 0; m < M; ++m) {
        seg.value[m] = h * k[m];
        seg.error = std::max(seg.error, std::abs(h * (k[m] - g[m])));
    }
    return seg;
}

template <std::size_t M>
struct AdaptiveResult {
    CVec<M> value{};
    double error = 0;
    std::size_t segments = 0;
    bool converged = true;
    double narrowest = 0;  // width of the narrowest segment used
};

// Globally adaptive GK21 over the pieces delimited by sorted `breaks`.
// Segments narrower than min_width are never split further; if the error
// budget can only be met by splitting them, converged = false.
template <std::size_t M, class F>
AdaptiveResult<M> integrate(F&& f, std::span<const double> breaks, double abs_tol, double rel_tol,
                            double min_width, std::size_t max_segments) {
    std::priority_queue<Segment<M>> live;
    std::vector<Segment<M>> frozen;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] > breaks[i]) live.push(gk21<M>(f, breaks[i], breaks[i + 1]));
    }
    auto totals = [&](CVec<M>& v, double& err) {
        // Recomputed from scratch: cheap next to the integrand, and free of drift.
        v = {};
        err = 0;
        auto add = [&](const Segment<M>& s) {
            for (std::size_t m = 0; m < M; ++m) v[m] += s.value[m];
            err += s.error;
        };
        for (const auto& s : frozen) add(s);
        auto copy = live;
        while (!copy.empty()) {
            add(copy.top());
            copy.pop();
        }
    };
    CVec<M> v{};
    double err = 0;
    double live_err = 0, frozen_err = 0, scale = 0;
    {
        totals(v, err);
        auto copy = live;
        while (!copy.empty()) {
            live_err += copy.top().error;
            copy.pop();
        }
    }
    auto magnitude = [](const CVec<M>& x) {
        double s = 0;
        for (const auto& z : x) s = std::max(s, std::abs(z));
        return s;
    };
    scale = magnitude(v);
    bool converged = true;
    std::size_t iterations = 0;
    while (!live.empty()) {
        const double tol = std::max(abs_tol, rel_tol * scale);
        if (live_err + frozen_err <= tol) break;
        if (live.size() + frozen.size() >= max_segments) {
            converged = false;
            break;
        }
        Segment<M> worst = live.top();
        live.pop();
        live_err -= worst.error;
        if (worst.b - worst.a < 2 * min_width) {
            frozen_err += worst.error;
            frozen.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        Segment<M> left = gk21<M>(f, worst.a, mid);
        Segment<M> right = gk21<M>(f, mid, worst.b);
        live_err += left.error + right.error;
        live.push(left);
        live.push(right);
        if (++iterations % 64 == 0) {
            totals(v, err);
            scale = magnitude(v);
            live_err = err - frozen_err;
        }
    }
    AdaptiveResult<M> out;
    totals(out.value, out.error);
    const double tol = std::max(abs_tol, rel_tol * magnitude(out.value));
    if (out.error > tol) converged = false;
    out.converged = converged;
    out.segments = live.size() + frozen.size();
    out.narrowest = INFINITY;
    for (const auto& s : frozen) out.narrowest = std::min(out.narrowest, s.b - s.a);
    auto copy = live;
    while (!copy.empty()) {
        out.narrowest = std::min(out.narrowest, copy.top().b - copy.top().a);
        copy.pop();
    }
    return out;
}

}  // namespace fanoeit::detail
