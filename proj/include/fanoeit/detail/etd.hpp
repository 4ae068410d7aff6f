#pragma once

#include <complex>

namespace fanoeit::detail {

// ETDRK4 (Cox-Matthews) coefficients for one linear rate z = L h, divided by h.
struct EtdCoefficients {
    std::complex<double> E, E2, Q, f1, f2, f3;
};

// Small |z| uses a contour average around z (Kassam-Trefethen) to avoid
// cancellation; larger |z| the closed forms.
EtdCoefficients etd_coefficients(std::complex<double> z);

}  // namespace fanoeit::detail
