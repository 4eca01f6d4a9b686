#pragma once

#include <span>

#include "pvhires/iv_curve.hpp"

namespace pvhires {

struct OperatingPoint {
    double v = 0;
    double i = 0;
    double p = 0;
};

/// Global maximum of v*i over a piecewise-linear curve.
///
/// Every sample is a candidate, and on each segment the power is an exact
/// parabola in v, so its interior vertex is a candidate too. Ties go to the
/// lower voltage.
inline OperatingPoint find_mpp(std::span<const IVPoint> pts) {
    if (pts.empty()) throw EmptyInput("find_mpp: empty curve");
    OperatingPoint best{pts[0].v, pts[0].i, pts[0].v * pts[0].i};
    auto consider = [&](double v, double i) {
        const double p = v * i;
        if (p > best.p) best = {v, i, p};
    };
    for (std::size_t k = 1; k < pts.size(); ++k) {
        const IVPoint& a = pts[k - 1];
        const IVPoint& b = pts[k];
        const double dv = b.v - a.v;
        if (dv > 0) {
            const double s = (b.i - a.i) / dv;
            if (s < 0) {
                // p(v) = s v^2 + (a.i - s a.v) v
                const double vstar = -(a.i - s * a.v) / (2 * s);
                if (vstar > a.v && vstar < b.v) consider(vstar, a.i + s * (vstar - a.v));
            }
        }
        consider(b.v, b.i);
    }
    return best;
}

inline OperatingPoint find_mpp(const IVCurve& curve) { return find_mpp(curve.points()); }

}  // namespace pvhires
