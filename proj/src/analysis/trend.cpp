#include <algorithm>
#include <cmath>
#include <numeric>

#include "fanoeit/analysis.hpp"

namespace fanoeit {

std::string_view to_string(Trend t) {
    switch (t) {
        case Trend::increasing: return "increasing";
        case Trend::decreasing: return "decreasing";
        case Trend::constant: return "constant-within-tolerance";
        case Trend::non_monotonic: return "non-monotonic";
        case Trend::undefined: return "undefined";
    }
    return "undefined";
}

const TrendVerdict* TrendReport::find(std::string_view observable) const {
    for (const auto& v : verdicts)
        if (v.observable == observable) return &v;
    return nullptr;
}

namespace {

double mean_of(const std::vector<Window>& w, double Window::*field) {
    double s = 0;
    for (const auto& x : w) s += x.*field;
    return s / static_cast<double>(w.size());
}

TrendVerdict classify(std::string name, std::vector<double> values, double norm, double tol) {
    TrendVerdict v;
    v.observable = std::move(name);
    v.values = std::move(values);
    const auto [lo, hi] = std::minmax_element(v.values.begin(), v.values.end());
    if (!(norm > 0) || !std::isfinite(norm)) {
        v.trend = Trend::undefined;
        return v;
    }
    v.spread = (*hi - *lo) / norm;
    if (v.spread <= tol) {
        v.trend = Trend::constant;
        return v;
    }
    bool up = true, down = true;
    for (std::size_t i = 1; i < v.values.size(); ++i) {
        up = up && v.values[i] > v.values[i - 1];
        down = down && v.values[i] < v.values[i - 1];
    }
    v.trend = up ? Trend::increasing : down ? Trend::decreasing : Trend::non_monotonic;
    return v;
}

}  // namespace

TrendReport window_trend(const std::vector<WindowReport>& reports, std::string key, double tolerance) {
    if (reports.size() < 2) throw ConfigError("window_trend: need at least 2 reports along the ladder");
    TrendReport out;
    out.key = std::move(key);
    for (const auto& r : reports) out.counts.push_back(r.windows.size());
    out.structural_change = std::any_of(out.counts.begin(), out.counts.end(),
                                        [&](std::size_t c) { return c != out.counts.front(); });
    if (out.structural_change || out.counts.front() == 0) return out;

    std::vector<double> sep, width, depth, pos;
    for (const auto& r : reports) {
        const auto& w = r.windows;
        sep.push_back(w.back().center - w.front().center);
        width.push_back(mean_of(w, &Window::width));
        depth.push_back(mean_of(w, &Window::depth));
        pos.push_back(mean_of(w, &Window::center));
    }
    auto mean = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    const double mean_width = mean(width);
    if (out.counts.front() >= 2) out.verdicts.push_back(classify("separation", sep, std::abs(mean(sep)), tolerance));
    out.verdicts.push_back(classify("width", width, std::abs(mean_width), tolerance));
    out.verdicts.push_back(classify("depth", depth, std::abs(mean(depth)), tolerance));
    out.verdicts.push_back(classify("position", pos, std::abs(mean_width), tolerance));
    return out;
}

}  // namespace fanoeit
