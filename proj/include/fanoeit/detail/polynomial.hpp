#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fanoeit::detail {

using cplx = std::complex<double>;

// Dense polynomial, coefficients in ascending powers.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<cplx> ascending) : c_(std::move(ascending)) { trim(); }

    std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
    const std::vector<cplx>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }

    cplx operator()(cplx z) const;
    Poly derivative() const;
    Poly conj() const;

    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);

private:
    void trim();
    std::vector<cplx> c_;
};

struct RootOptions {
    int max_iterations = 200;
    int polish_iterations = 8;
};

// All roots of p (degree >= 1): Laguerre with deflation, then Newton polish
// against the undeflated polynomial. Throws ConvergenceError on failure.
std::vector<cplx> roots(const Poly& p, const RootOptions& opt = {});

}  // namespace fanoeit::detail
