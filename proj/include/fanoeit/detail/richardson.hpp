#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fanoeit::detail {

// Value at x = 0 of the polynomial through (x[i], y[i]) (Neville).
inline std::complex<double> neville_at_zero(std::span<const double> x, std::span<const std::complex<double>> y) {
    if (x.size() != y.size() || x.empty()) throw std::invalid_argument("neville_at_zero: bad sizes");
    std::vector<std::complex<double>> p(y.begin(), y.end());
    const std::size_t n = x.size();
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = 0; i + level < n; ++i) {
            const double xi = x[i], xj = x[i + level];
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    return p[0];
}

struct Extrapolated {
    std::complex<double> value;
    double residual;  // |order-k estimate - order-(k-1) estimate|
};

// Polynomial extrapolation of the last (order + 1) samples to x = 0.
inline Extrapolated richardson(std::span<const double> x, std::span<const std::complex<double>> y, int order) {
    const std::size_t n = x.size();
    if (order < 1 || n < static_cast<std::size_t>(order) + 1)
        throw std::invalid_argument("richardson: need at least order + 1 samples");
    const std::size_t k = static_cast<std::size_t>(order) + 1;
    const auto hi = neville_at_zero(x.subspan(n - k), y.subspan(n - k));
    const auto lo = neville_at_zero(x.subspan(n - k + 1), y.subspan(n - k + 1));
    return {hi, std::abs(hi - lo)};
}

}  // namespace fanoeit::detail
