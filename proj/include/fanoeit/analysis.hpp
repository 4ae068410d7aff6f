#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fanoeit/core.hpp"

namespace fanoeit {

// A transparency window: an interior local minimum of Im chi lying at or
// below depth_fraction times its reference, the lower of the two flanking
// maxima. Edges are the threshold crossings, linearly interpolated.
struct Window {
    double center = 0.0;  // parabolic vertex through the minimum and its neighbours
    double width = 0.0;
    double depth = 0.0;  // minimum / reference, clamped at 0
    double left_edge = 0.0;
    double right_edge = 0.0;
    double minimum = 0.0;    // Im chi at the minimum sample
    double reference = 0.0;  // Im chi of the lower flanking maximum
    std::size_t points = 0;  // grid points inside
    bool coalesced_with_next = false;  // gap to the next window below their mean width

    bool operator==(const Window&) const = default;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool operator==(const Interval&) const = default;
};

struct WindowReport {
    std::vector<Window> windows;
    std::vector<Interval> anomalous_intervals;
    double background = 0.0;  // median Im chi over the scan
    double depth_fraction = 0.1;

    bool operator==(const WindowReport&) const = default;
};

// Throws ConfigError on bad arguments, NumericalError when a window holds
// fewer than 5 grid points.
WindowReport find_windows(const Spectrum& s, double depth_fraction = 0.1);

// Where d(Re chi)/d omega < 0 (central differences); runs separated by
// fewer than 3 grid points are merged.
std::vector<Interval> dispersion_regions(const Spectrum& s);

enum class Trend { increasing, decreasing, constant, non_monotonic, undefined };

std::string_view to_string(Trend t);

struct TrendVerdict {
    std::string observable;
    Trend trend = Trend::undefined;
    std::vector<double> values;
    double spread = 0.0;  // (max - min) / normalization
};

struct TrendReport {
    std::string key;
    std::vector<std::size_t> counts;
    bool structural_change = false;
    std::vector<TrendVerdict> verdicts;  // separation, width, depth, position

    const TrendVerdict* find(std::string_view observable) const;
};

// Observables per report: separation (outermost centers), width (mean),
// depth (mean), position (mean center). "constant" means spread within
// `tolerance`: relative to the mean for separation/width/depth, relative to
// the mean width for position.
TrendReport window_trend(const std::vector<WindowReport>& reports, std::string key, double tolerance = 0.02);

}  // namespace fanoeit
