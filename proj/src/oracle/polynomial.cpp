#include "fanoeit/detail/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fanoeit/errors.hpp"

namespace fanoeit::detail {

void Poly::trim() {
    while (!c_.empty() && c_.back() == cplx(0.0, 0.0)) c_.pop_back();
}

cplx Poly::operator()(cplx z) const {
    cplx s{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * z + *it;
    return s;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly{};
    std::vector<cplx> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
    return Poly(std::move(d));
}

Poly Poly::conj() const {
    std::vector<cplx> d(c_.size());
    std::transform(c_.begin(), c_.end(), d.begin(), [](cplx z) { return std::conj(z); });
    return Poly(std::move(d));
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.c_.empty() || b.c_.empty()) return Poly{};
    std::vector<cplx> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(r));
}

Poly operator-(const Poly& a, const Poly& b) {
    std::vector<cplx> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
    return Poly(std::move(r));
}

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

// Laguerre iteration for one root of a (ascending coefficients), started at x.
bool laguerre(const std::vector<cplx>& a, cplx& x, int max_iterations) {
    static constexpr double frac[] = {0.0, 0.5, 0.25, 0.75, 0.13, 0.38, 0.62, 0.88, 1.0};
    const int m = static_cast<int>(a.size()) - 1;
    for (int iter = 1; iter <= max_iterations; ++iter) {
        cplx b = a[m], d{}, f{};
        double err = std::abs(b);
        const double ax = std::abs(x);
        for (int j = m - 1; j >= 0; --j) {
            f = x * f + d;
            d = x * d + b;
            b = x * b + a[j];
            err = std::abs(b) + ax * err;
        }
        err *= eps;
        if (std::abs(b) <= err) return true;
        const cplx g = d / b;
        const cplx g2 = g * g;
        const cplx h = g2 - 2.0 * f / b;
        const cplx sq = std::sqrt(static_cast<double>(m - 1) * (static_cast<double>(m) * h - g2));
        cplx gp = g + sq, gm = g - sq;
        const double abp = std::abs(gp), abm = std::abs(gm);
        if (abp < abm) gp = gm;
        const cplx dx = std::max(abp, abm) > 0.0 ? static_cast<double>(m) / gp
                                                   : std::polar(1.0 + ax, static_cast<double>(iter));
        const cplx x1 = x - dx;
        if (x1 == x) return true;
        if (iter % 10 != 0) {
            x = x1;
        } else {
            x -= frac[(iter / 10) % 9] * dx;  // break limit cycles
        }
    }
    return false;
}

}  // namespace

std::vector<cplx> roots(const Poly& p, const RootOptions& opt) {
    const auto& c = p.coeffs();
    if (c.size() < 2) throw ConvergenceError("roots: polynomial has no roots");
    std::vector<cplx> work = c;
    std::vector<cplx> out;
    for (std::size_t deg = c.size() - 1; deg >= 1; --deg) {
        cplx x{};
        std::vector<cplx> a(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(deg) + 1);
        if (!laguerre(a, x, opt.max_iterations)) throw ConvergenceError("roots: Laguerre iteration did not converge");
        out.push_back(x);
        // Synthetic division by (z - x).
        cplx carry = a[deg];
        for (std::size_t j = deg; j-- > 0;) {
            const cplx t = a[j];
            a[j] = carry;
            carry = t + carry * x;
        }
        work.assign(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(deg));
    }
    const Poly dp = p.derivative();
    for (auto& r : out) {
        for (int k = 0; k < opt.polish_iterations; ++k) {
            const cplx fd = dp(r);
            if (fd == cplx(0.0, 0.0)) break;
            const cplx step = p(r) / fd;
            r -= step;
            if (std::abs(step) <= eps * std::abs(r)) break;
        }
        if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) throw ConvergenceError("roots: non-finite root");
    }
    return out;
}

}  // namespace fanoeit::detail
