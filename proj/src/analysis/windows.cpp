#include <algorithm>
#include <cmath>
#include <sstream>

#include "fanoeit/analysis.hpp"

namespace fanoeit {

namespace {

double median(std::vector<double> v) {
    const std::size_t n = v.size();
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n / 2), v.end());
    const double hi = v[n / 2];
    if (n % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n / 2));
    return 0.5 * (lo + hi);
}

// Abscissa where the line through (x0, y0), (x1, y1) reaches level.
double crossing(double x0, double y0, double x1, double y1, double level) {
    if (y1 == y0) return 0.5 * (x0 + x1);
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

double vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
    const double d0 = (y1 - y0) / (x1 - x0);
    const double d1 = (y2 - y1) / (x2 - x1);
    const double curv = (d1 - d0) / (x2 - x0);
    if (!(curv > 0)) return x1;
    const double v = 0.5 * (x0 + x1) - d0 / (2.0 * curv);
    return std::clamp(v, x0, x2);
}

struct Candidate {
    std::size_t a, b, imin;
    double ref;
};

}  // namespace

WindowReport find_windows(const Spectrum& s, double depth_fraction) {
    const std::size_t n = s.points.size();
    if (n < 100) throw ConfigError("find_windows: spectrum needs at least 100 points");
    if (!(depth_fraction > 0 && depth_fraction < 1)) throw ConfigError("find_windows: depth_fraction must lie in (0, 1)");
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = s.points[i].omega;
        y[i] = s.points[i].chi.imag();
    }

    WindowReport rep;
    rep.depth_fraction = depth_fraction;
    rep.background = median(y);

    std::vector<Candidate> cands;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(y[i] < y[i - 1] && y[i] <= y[i + 1])) continue;
        std::size_t l = i, r = i;
        while (l > 0 && y[l - 1] >= y[l]) --l;
        while (r + 1 < n && y[r + 1] >= y[r]) ++r;
        const double ref = std::min(y[l], y[r]);
        const double thr = depth_fraction * ref;
        if (!(ref > 0) || !(y[i] <= thr)) continue;
        std::size_t a = i, b = i;
        while (a > 0 && y[a - 1] <= thr) --a;
        while (b + 1 < n && y[b + 1] <= thr) ++b;
        cands.push_back({a, b, i, ref});
    }

    // Overlapping candidates (several minima under one threshold) are one window.
    std::sort(cands.begin(), cands.end(), [](const Candidate& p, const Candidate& q) { return p.a < q.a; });
    std::vector<Candidate> merged;
    for (const auto& c : cands) {
        if (!merged.empty() && c.a <= merged.back().b) {
            auto& m = merged.back();
            m.b = std::max(m.b, c.b);
            if (y[c.imin] < y[m.imin]) {
                m.imin = c.imin;
                m.ref = c.ref;
            }
            continue;
        }
        merged.push_back(c);
    }

    for (const auto& c : merged) {
        const std::size_t pts = c.b - c.a + 1;
        if (pts < 5) {
            std::ostringstream os;
            os << "find_windows: only " << pts << " grid points inside the window near omega = " << x[c.imin]
               << "; refine the grid";
            throw NumericalError(os.str());
        }
        const double thr = depth_fraction * c.ref;
        Window w;
        w.left_edge = c.a > 0 ? crossing(x[c.a - 1], y[c.a - 1], x[c.a], y[c.a], thr) : x[0];
        w.right_edge = c.b + 1 < n ? crossing(x[c.b], y[c.b], x[c.b + 1], y[c.b + 1], thr) : x[n - 1];
        w.width = w.right_edge - w.left_edge;
        const std::size_t i = c.imin;
        w.center = vertex(x[i - 1], y[i - 1], x[i], y[i], x[i + 1], y[i + 1]);
        w.minimum = y[i];
        w.reference = c.ref;
        w.depth = std::max(0.0, y[i] / c.ref);
        w.points = pts;
        rep.windows.push_back(w);
    }
    for (std::size_t k = 0; k + 1 < rep.windows.size(); ++k) {
        auto& w = rep.windows[k];
        const auto& nx = rep.windows[k + 1];
        w.coalesced_with_next = nx.left_edge - w.right_edge < 0.5 * (w.width + nx.width);
    }
    rep.anomalous_intervals = dispersion_regions(s);
    return rep;
}

std::vector<Interval> dispersion_regions(const Spectrum& s) {
    const std::size_t n = s.points.size();
    if (n < 100) throw ConfigError("dispersion_regions: spectrum needs at least 100 points");
    auto slope = [&](std::size_t i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == n ? i : i + 1;
        return (s.points[hi].chi.real() - s.points[lo].chi.real()) / (s.points[hi].omega - s.points[lo].omega);
    };
    struct Run {
        std::size_t first, last;
    };
    std::vector<Run> runs;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(slope(i) < 0)) continue;
        if (!runs.empty() && i - runs.back().last - 1 < 3) {
            runs.back().last = i;
        } else {
            runs.push_back({i, i});
        }
    }
    std::vector<Interval> out;
    for (const auto& r : runs) out.push_back({s.points[r.first].omega, s.points[r.last].omega});
    return out;
}

}  // namespace fanoeit
