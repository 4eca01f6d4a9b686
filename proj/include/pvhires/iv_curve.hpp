#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pvhires/error.hpp"

namespace pvhires {

struct IVPoint {
    double v;  // V
    double i;  // A
};

enum class CurveLevel { Cell, Substring, Module, Optimized, String, System };

inline const char* to_string(CurveLevel level) {
    switch (level) {
        case CurveLevel::Cell: return "cell";
        case CurveLevel::Substring: return "substring";
        case CurveLevel::Module: return "module";
        case CurveLevel::Optimized: return "optimized";
        case CurveLevel::String: return "string";
        case CurveLevel::System: return "system";
    }
    return "?";
}

/// Piecewise-linear current-voltage characteristic.
///
/// Points are ordered by strictly increasing voltage with non-increasing
/// current. Queries outside the sampled range clamp to the nearest endpoint.
class IVCurve {
public:
    IVCurve() = default;

    explicit IVCurve(std::vector<IVPoint> points, CurveLevel level = CurveLevel::Cell, std::string label = {})
        : points_(std::move(points)), level_(level), label_(std::move(label)) {
        if (points_.size() < 2) throw DataError("IV curve needs at least 2 points");
        for (std::size_t k = 1; k < points_.size(); ++k) {
            if (!(points_[k].v > points_[k - 1].v)) throw DataError("IV curve voltages must be strictly increasing");
            if (points_[k].i > points_[k - 1].i) throw DataError("IV curve currents must be non-increasing");
        }
        for (const auto& p : points_) {
            if (!std::isfinite(p.v) || !std::isfinite(p.i)) throw DataError("IV curve contains non-finite values");
        }
    }

    /// Builds a curve from voltages sampled on an ascending current grid.
    /// Voltages must be non-increasing; a run of equal voltages (a vertical
    /// segment, e.g. a fully bypassed module) keeps only its lowest-current
    /// point, so higher currents clamp to that voltage.
    static IVCurve from_current_samples(std::span<const double> currents, std::span<const double> voltages,
                                        CurveLevel level, std::string label = {}) {
        if (currents.size() != voltages.size()) throw DimensionMismatch("current/voltage sample counts differ");
        std::vector<IVPoint> pts;
        pts.reserve(currents.size());
        for (std::size_t k = currents.size(); k-- > 0;) {
            if (!pts.empty() && !(voltages[k] > pts.back().v)) {
                // Equal voltage: keep the lower current of the run.
                if (voltages[k] == pts.back().v) {
                    pts.back().i = currents[k];
                    continue;
                }
                throw DataError("voltage samples must be non-increasing in current");
            }
            pts.push_back({voltages[k], currents[k]});
        }
        if (pts.size() == 1) {
            // Entirely vertical: represent as a minimal two-point curve.
            pts.push_back({pts.front().v + 1e-12, pts.front().i});
        }
        return IVCurve(std::move(pts), level, std::move(label));
    }

    std::span<const IVPoint> points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    CurveLevel level() const { return level_; }
    const std::string& label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    double v_min() const { return points_.front().v; }
    double v_max() const { return points_.back().v; }
    double i_max() const { return points_.front().i; }
    double i_min() const { return points_.back().i; }

    double current_at(double v) const {
        if (v <= points_.front().v) return points_.front().i;
        if (v >= points_.back().v) return points_.back().i;
        auto it = std::upper_bound(points_.begin(), points_.end(), v,
                                   [](double x, const IVPoint& p) { return x < p.v; });
        const IVPoint& b = *it;
        const IVPoint& a = *(it - 1);
        const double t = (v - a.v) / (b.v - a.v);
        return a.i + t * (b.i - a.i);
    }

    /// Voltage at a current. On a flat (constant-current) run the highest
    /// voltage of the run is returned.
    double voltage_at(double i) const {
        if (i >= points_.front().i) return points_.front().v;
        if (i <= points_.back().i) return points_.back().v;
        // First point whose current is below i; currents are non-increasing.
        auto it = std::upper_bound(points_.begin(), points_.end(), i,
                                   [](double x, const IVPoint& p) { return x > p.i; });
        const IVPoint& b = *it;
        const IVPoint& a = *(it - 1);
        if (a.i == b.i) return a.v;
        const double t = (i - a.i) / (b.i - a.i);
        return a.v + t * (b.v - a.v);
    }

    /// Voltages for an ascending current grid, in one merged sweep.
    void voltages_at(std::span<const double> currents, std::span<double> out) const {
        if (currents.size() != out.size()) throw DimensionMismatch("voltages_at: output size differs from grid");
        // Walk the curve from its high-current end (lowest voltage) upward in
        // voltage while the grid current descends.
        std::size_t seg = 0;  // points_[seg], points_[seg+1] bracket the query
        const std::size_t n = points_.size();
        for (std::size_t g = currents.size(); g-- > 0;) {
            const double i = currents[g];
            if (i >= points_.front().i) {
                out[g] = points_.front().v;
                continue;
            }
            if (i <= points_.back().i) {
                out[g] = points_.back().v;
                continue;
            }
            while (seg + 1 < n && points_[seg + 1].i >= i) ++seg;
            const IVPoint& a = points_[seg];
            const IVPoint& b = points_[seg + 1];
            if (a.i == b.i) {
                out[g] = a.v;
            } else {
                const double t = (i - a.i) / (b.i - a.i);
                out[g] = a.v + t * (b.v - a.v);
            }
        }
    }

private:
    std::vector<IVPoint> points_;
    CurveLevel level_ = CurveLevel::Cell;
    std::string label_;
};

/// n evenly spaced values from lo to hi inclusive.
inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    if (n < 2) throw DataError("grid needs at least 2 points");
    std::vector<double> g(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) g[k] = lo + step * static_cast<double>(k);
    g.back() = hi;
    return g;
}

}  // namespace pvhires
