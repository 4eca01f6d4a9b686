#pragma once

// Cell -> substring -> module -> string -> system aggregation.
//
// Everything below the system level works on one shared ascending current
// grid. A curve sampled on that grid is a vector of voltages, with -inf where
// the grid current exceeds what the curve can carry.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pvhires/error.hpp"
#include "pvhires/iv_curve.hpp"

namespace pvhires {

inline constexpr std::size_t default_grid_points = 1001;
inline constexpr double grid_headroom = 1.05;

/// Linear current grid from 0 to headroom * i_top.
inline std::vector<double> current_grid(double i_top, std::size_t n = default_grid_points) {
    if (!(i_top > 0)) throw DataError("current_grid: top current must be positive");
    return linear_grid(0.0, grid_headroom * i_top, n);
}

/// Largest short-circuit current among curves (current at v = 0).
inline double max_short_circuit_current(std::span<const IVCurve> curves) {
    double top = 0;
    for (const auto& c : curves) top = std::max(top, c.current_at(0.0));
    return top;
}

/// Voltages of a curve on an ascending current grid; -inf above its range.
inline void sample_on_grid(const IVCurve& curve, std::span<const double> grid, std::span<double> out) {
    curve.voltages_at(grid, out);
    const double top = curve.i_max();
    for (std::size_t g = grid.size(); g-- > 0 && grid[g] > top;) out[g] = -std::numeric_limits<double>::infinity();
}

inline std::vector<double> sample_on_grid(const IVCurve& curve, std::span<const double> grid) {
    std::vector<double> v(grid.size());
    sample_on_grid(curve, grid, v);
    return v;
}

/// Curve from grid samples, dropping the out-of-range tail. If the tail is
/// non-empty the curve ends at i_end with voltage v_end.
inline IVCurve curve_from_grid(std::span<const double> grid, std::span<const double> v, CurveLevel level,
                               std::string label = {}) {
    std::size_t n = 0;
    while (n < v.size() && std::isfinite(v[n])) ++n;
    if (n == 0) throw EmptyInput("curve_from_grid: no finite samples");
    return IVCurve::from_current_samples(grid.first(n), v.first(n), level, std::move(label));
}

/// Series connection without bypass: voltages add at common current, up to
/// the smallest member current range.
inline IVCurve series_combine(std::span<const IVCurve> curves, std::span<const double> i_grid,
                              CurveLevel level = CurveLevel::Substring) {
    if (curves.empty()) throw EmptyInput("series_combine: no curves");
    double i_lim = std::numeric_limits<double>::infinity();
    for (const auto& c : curves) i_lim = std::min(i_lim, c.i_max());
    std::vector<double> grid;
    for (double i : i_grid) {
        if (i < i_lim) grid.push_back(i);
    }
    if (grid.empty() || grid.back() < i_lim) grid.push_back(i_lim);
    std::vector<double> v(grid.size(), 0.0), tmp(grid.size());
    for (const auto& c : curves) {
        c.voltages_at(grid, tmp);
        for (std::size_t g = 0; g < grid.size(); ++g) v[g] += tmp[g];
    }
    return IVCurve::from_current_samples(grid, v, level);
}

/// Per-substring bypass diode activation at one current.
struct BypassState {
    std::vector<bool> active;

    int count() const { return static_cast<int>(std::count(active.begin(), active.end(), true)); }
    bool any() const { return count() > 0; }
    bool operator==(const BypassState&) const = default;
};

/// Module characteristic with bypass diodes, and the activation flags at
/// every grid current.
struct ModuleCurve {
    IVCurve curve;
    std::vector<double> i_grid;
    std::vector<double> v_grid;       // module voltage per grid current
    std::vector<std::uint8_t> flags;  // grid-major, substrings_per_module per row
    int substrings = 0;

    BypassState state_at_index(std::size_t g) const {
        BypassState s;
        s.active.resize(static_cast<std::size_t>(substrings));
        for (int k = 0; k < substrings; ++k) s.active[static_cast<std::size_t>(k)] = flags[g * static_cast<std::size_t>(substrings) + static_cast<std::size_t>(k)] != 0;
        return s;
    }

    std::size_t nearest_index(double i) const {
        auto it = std::lower_bound(i_grid.begin(), i_grid.end(), i);
        if (it == i_grid.end()) return i_grid.size() - 1;
        if (it == i_grid.begin()) return 0;
        const auto hi = static_cast<std::size_t>(it - i_grid.begin());
        return (i - i_grid[hi - 1] <= i_grid[hi] - i) ? hi - 1 : hi;
    }
};

/// Module voltages from substring grid samples (each substring_v[k] sampled on
/// i_grid, -inf where the substring cannot carry the current). A substring is
/// bypassed when its voltage would fall to -vf or below.
inline ModuleCurve module_from_substring_samples(std::span<const std::vector<double>> substring_v, double vf,
                                                 std::span<const double> i_grid, std::string label = {}) {
    if (substring_v.empty()) throw EmptyInput("module_curve_with_bypass: no substrings");
    if (!(vf > 0)) throw ConfigError("bypass forward voltage must be positive");
    const std::size_t n = i_grid.size();
    const std::size_t k_sub = substring_v.size();
    ModuleCurve m;
    m.substrings = static_cast<int>(k_sub);
    m.i_grid.assign(i_grid.begin(), i_grid.end());
    m.v_grid.assign(n, 0.0);
    m.flags.assign(n * k_sub, 0);
    for (std::size_t k = 0; k < k_sub; ++k) {
        if (substring_v[k].size() != n) throw DimensionMismatch("substring samples do not match the current grid");
        for (std::size_t g = 0; g < n; ++g) {
            const double vs = substring_v[k][g];
            if (vs <= -vf) {
                m.flags[g * k_sub + k] = 1;
                m.v_grid[g] -= vf;
            } else {
                m.v_grid[g] += vs;
            }
        }
    }
    // Summation order can leave last-bit wiggles; keep the curve monotone.
    for (std::size_t g = 1; g < n; ++g) m.v_grid[g] = std::min(m.v_grid[g], m.v_grid[g - 1]);
    m.curve = IVCurve::from_current_samples(m.i_grid, m.v_grid, CurveLevel::Module, std::move(label));
    return m;
}

inline ModuleCurve module_curve_with_bypass(std::span<const IVCurve> substring_curves, double vf, std::span<const double> i_grid,
                                            std::string label = {}) {
    if (substring_curves.empty()) throw EmptyInput("module_curve_with_bypass: no substrings");
    std::vector<std::vector<double>> v;
    v.reserve(substring_curves.size());
    for (const auto& c : substring_curves) v.push_back(sample_on_grid(c, i_grid));
    return module_from_substring_samples(v, vf, i_grid, std::move(label));
}

/// Activation flags at the grid current nearest i.
inline BypassState bypass_state_at(const ModuleCurve& module, double i) {
    if (!(i >= 0)) throw DataError("bypass_state_at: current must be non-negative");
    return module.state_at_index(module.nearest_index(i));
}

/// Series string of bypass-extended module curves. Modules clamp to their
/// lowest voltage above their range, so the string spans the whole grid.
inline IVCurve string_curve(std::span<const IVCurve> module_curves, std::span<const double> i_grid, std::string label = {}) {
    if (module_curves.empty()) throw EmptyInput("string_curve: no modules");
    std::vector<double> v(i_grid.size(), 0.0), tmp(i_grid.size());
    for (const auto& c : module_curves) {
        c.voltages_at(i_grid, tmp);
        for (std::size_t g = 0; g < i_grid.size(); ++g) v[g] += tmp[g];
    }
    for (std::size_t g = 1; g < v.size(); ++g) v[g] = std::min(v[g], v[g - 1]);
    return IVCurve::from_current_samples(i_grid, v, CurveLevel::String, std::move(label));
}

/// Parallel strings: currents add at common voltage over the shared voltage
/// range. A single string is returned unchanged.
inline IVCurve system_curve(std::span<const IVCurve> strings, std::size_t n = default_grid_points) {
    if (strings.empty()) throw EmptyInput("system_curve: no strings");
    if (strings.size() == 1) {
        std::vector<IVPoint> pts(strings[0].points().begin(), strings[0].points().end());
        return IVCurve(std::move(pts), CurveLevel::System, strings[0].label());
    }
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (const auto& s : strings) {
        lo = std::max(lo, s.v_min());
        hi = std::min(hi, s.v_max());
    }
    if (!(hi > lo)) throw NoDomainOverlap("string voltage ranges do not overlap");
    const auto v = linear_grid(lo, hi, n);
    std::vector<IVPoint> pts(n);
    for (std::size_t g = 0; g < n; ++g) {
        double i = 0;
        for (const auto& s : strings) i += s.current_at(v[g]);
        pts[g] = {v[g], i};
    }
    for (std::size_t g = 1; g < n; ++g) pts[g].i = std::min(pts[g].i, pts[g - 1].i);
    return IVCurve(std::move(pts), CurveLevel::System);
}

}  // namespace pvhires
