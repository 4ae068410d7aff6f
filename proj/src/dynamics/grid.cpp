#include <cmath>
#include <sstream>

#include "fanoeit/dynamics.hpp"

namespace fanoeit {

namespace {

// Total length of n geometric bins d r, d r^2, ..., d r^n.
double wing_length(double d, double r, std::size_t n) {
    double s = 0, step = d;
    for (std::size_t k = 0; k < n; ++k) {
        step *= r;
        s += step;
    }
    return s;
}

}  // namespace

ContinuumGrid build_grid(double W, std::size_t n_bins, const SystemParams& p, const GridLayout& layout) {
    p.validate();
    const double G = p.Gamma();
    if (!(W >= 100.0 * G * (1 - 1e-12))) throw ConfigError("dynamics.W: must be >= 100 Gamma");
    if (n_bins < 1000) throw ConfigError("dynamics.n_bins: must be >= 1000");

    ContinuumGrid g;
    g.span_lo = -W;
    g.span_hi = W;
    std::vector<double> edges;

    if (layout.mode == GridMode::uniform) {
        const double d = 2.0 * W / static_cast<double>(n_bins);
        g.core_spacing = d;
        g.core_half_width = W;
        g.bin_weights.assign(n_bins, d);
        for (std::size_t i = 0; i < n_bins; ++i) g.bin_centers.push_back(-W + (static_cast<double>(i) + 0.5) * d);
        return g;
    }

    const double Xc = layout.core_half_width * G;
    if (!(Xc > 0) || !(Xc < W)) throw ConfigError("dynamics.layout.core_half_width: must lie in (0, W)");
    if (!(layout.core_fraction > 0 && layout.core_fraction < 1))
        throw ConfigError("dynamics.layout.core_fraction: must lie in (0, 1)");
    std::size_t nc = static_cast<std::size_t>(std::llround(layout.core_fraction * static_cast<double>(n_bins)));
    if ((n_bins - nc) % 2 != 0) ++nc;
    const std::size_t nw = (n_bins - nc) / 2;
    if (nw == 0) throw ConfigError("dynamics: no bins left for the wings");
    const double d = 2.0 * Xc / static_cast<double>(nc);

    // Growth ratio r with wing_length(d, r, nw) = W - Xc, by bisection.
    const double target = W - Xc;
    double lo = 1e-6, hi = layout.max_growth;
    if (wing_length(d, hi, nw) < target) {
        std::ostringstream os;
        os << "insufficient n_bins for requested densification: " << n_bins << " bins cannot reach W = " << W / G
           << " Gamma with growth <= " << layout.max_growth;
        throw ConfigError(os.str());
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (wing_length(d, mid, nw) < target ? lo : hi) = mid;
    }
    const double r = 0.5 * (lo + hi);

    std::vector<double> right;
    double e = Xc, step = d;
    for (std::size_t k = 0; k < nw; ++k) {
        step *= r;
        e += step;
        right.push_back(e);
    }
    right.back() = W;
    for (auto it = right.rbegin(); it != right.rend(); ++it) edges.push_back(-*it);
    for (std::size_t i = 0; i <= nc; ++i) edges.push_back(-Xc + d * static_cast<double>(i));
    edges[nw + nc] = Xc;
    edges.insert(edges.end(), right.begin(), right.end());

    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        g.bin_centers.push_back(0.5 * (edges[i] + edges[i + 1]));
        g.bin_weights.push_back(edges[i + 1] - edges[i]);
    }
    g.core_spacing = d;
    g.core_half_width = Xc;
    return g;
}

}  // namespace fanoeit
