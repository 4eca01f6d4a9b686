#pragma once

// Array geometry and synthetic obstruction shading.
//
// The array is a single plane of modules on a rows x columns grid starting at
// the layout origin. In-plane axes: u runs horizontally along the rows, w runs
// up the slope. Each module's cells are laid out with substrings side by side
// across the module width; a substring with an even cell count occupies two
// cell columns, otherwise one.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "pvhires/error.hpp"
#include "pvhires/module_db.hpp"
#include "pvhires/sky.hpp"
#include "pvhires/solar_position.hpp"
#include "pvhires/topology.hpp"
#include "pvhires/vec3.hpp"

namespace pvhires {

enum class Orientation { Portrait, Landscape };

struct ArrayLayout {
    double tilt = 30.0;      // degrees from horizontal
    double azimuth = 180.0;  // direction the plane faces, degrees clockwise from north
    Vec3 origin;             // lower-left corner of module (row 0, column 0)
    int rows = 1;
    int columns = 1;
    double gap_m = 0.02;
    Orientation orientation = Orientation::Portrait;

    Vec3 normal() const {
        const double t = deg2rad(tilt), a = deg2rad(azimuth);
        return {std::sin(t) * std::sin(a), std::sin(t) * std::cos(a), std::cos(t)};
    }
    Vec3 up_slope() const {
        const double t = deg2rad(tilt), a = deg2rad(azimuth);
        return {-std::cos(t) * std::sin(a), -std::cos(t) * std::cos(a), std::sin(t)};
    }
    Vec3 along_row() const { return cross(up_slope(), normal()); }
};

struct VerticalCylinder {
    Vec3 base;
    double height = 0;
    double diameter = 0;
};

struct AxisAlignedBox {
    Vec3 corner;  // minimum x, y, z
    Vec3 size;
};

/// Horizontal disk that transmits a fraction of the light crossing it.
struct CanopyDisk {
    Vec3 centre;
    double radius = 0;
    double transmittance = 0;
};

using Obstruction = std::variant<VerticalCylinder, AxisAlignedBox, CanopyDisk>;

inline void validate_obstruction(const Obstruction& o) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, VerticalCylinder>) {
                if (!(s.height > 0 && s.diameter > 0)) throw ConfigError("cylinder height and diameter must be positive");
            } else if constexpr (std::is_same_v<T, AxisAlignedBox>) {
                if (!(s.size.x > 0 && s.size.y > 0 && s.size.z > 0)) throw ConfigError("box dimensions must be positive");
            } else {
                if (!(s.radius > 0)) throw ConfigError("canopy radius must be positive");
                if (!(s.transmittance >= 0 && s.transmittance <= 1)) throw ConfigError("canopy transmittance must lie in [0, 1]");
            }
        },
        o);
}

namespace detail {

constexpr double ray_eps = 1e-9;

inline bool hits(const VerticalCylinder& c, Vec3 o, Vec3 d) {
    const double r = 0.5 * c.diameter;
    const double ox = o.x - c.base.x, oy = o.y - c.base.y;
    const double a = d.x * d.x + d.y * d.y;
    double t0, t1;
    if (a < 1e-18) {
        if (ox * ox + oy * oy > r * r) return false;
        t0 = ray_eps;
        t1 = std::numeric_limits<double>::infinity();
    } else {
        const double b = 2 * (ox * d.x + oy * d.y);
        const double cc = ox * ox + oy * oy - r * r;
        const double disc = b * b - 4 * a * cc;
        if (disc < 0) return false;
        const double sq = std::sqrt(disc);
        t0 = (-b - sq) / (2 * a);
        t1 = (-b + sq) / (2 * a);
    }
    t0 = std::max(t0, ray_eps);
    if (t1 <= t0) return false;
    // z range of the ray while inside the infinite cylinder
    double z0 = o.z + t0 * d.z;
    double z1 = std::isinf(t1) ? (d.z > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity())
                               : o.z + t1 * d.z;
    if (z0 > z1) std::swap(z0, z1);
    return z1 >= c.base.z && z0 <= c.base.z + c.height;
}

inline bool hits(const AxisAlignedBox& b, Vec3 o, Vec3 d) {
    double tmin = ray_eps, tmax = std::numeric_limits<double>::infinity();
    const double lo[3] = {b.corner.x, b.corner.y, b.corner.z};
    const double hi[3] = {b.corner.x + b.size.x, b.corner.y + b.size.y, b.corner.z + b.size.z};
    const double oo[3] = {o.x, o.y, o.z};
    const double dd[3] = {d.x, d.y, d.z};
    for (int k = 0; k < 3; ++k) {
        if (std::abs(dd[k]) < 1e-18) {
            if (oo[k] < lo[k] || oo[k] > hi[k]) return false;
            continue;
        }
        double t0 = (lo[k] - oo[k]) / dd[k];
        double t1 = (hi[k] - oo[k]) / dd[k];
        if (t0 > t1) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
        if (tmin > tmax) return false;
    }
    return true;
}

inline bool hits(const CanopyDisk& c, Vec3 o, Vec3 d) {
    if (std::abs(d.z) < 1e-18) return false;
    const double t = (c.centre.z - o.z) / d.z;
    if (t <= ray_eps) return false;
    const double x = o.x + t * d.x - c.centre.x, y = o.y + t * d.y - c.centre.y;
    return x * x + y * y <= c.radius * c.radius;
}

}  // namespace detail

/// Fraction of light travelling from o along d that gets past all obstructions.
inline double ray_transmittance(const std::vector<Obstruction>& obs, Vec3 o, Vec3 d) {
    double t = 1.0;
    for (const auto& ob : obs) {
        const bool opaque_hit = std::visit(
            [&](const auto& s) -> bool {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, CanopyDisk>) {
                    if (detail::hits(s, o, d)) t *= s.transmittance;
                    return false;
                } else {
                    return detail::hits(s, o, d);
                }
            },
            ob);
        if (opaque_hit) return 0.0;
    }
    return t;
}

/// A cell as a parallelogram: centre plus the two full edge vectors.
struct CellGeometry {
    Vec3 centre;
    Vec3 edge_a;  // across the module width
    Vec3 edge_b;  // along the module length
};

struct ShadingScene {
    std::vector<CellGeometry> cells;  // indexed like the topology's cells
    Vec3 normal{0, 0, 1};
    double tilt = 0;
    double azimuth = 180;
    std::vector<Obstruction> obstructions;
    int samples_per_side = 4;

    std::vector<Vec3> sensor_positions() const {
        std::vector<Vec3> out;
        out.reserve(cells.size());
        for (const auto& c : cells) out.push_back(c.centre);
        return out;
    }
};

/// Cell-column count per substring for a given substring cell count.
inline int cell_columns_per_substring(int cells_per_substring) { return cells_per_substring % 2 == 0 ? 2 : 1; }

inline ShadingScene build_scene(const ArrayLayout& layout, const SystemTopology& topo, const ModuleSpec& spec,
                                std::vector<Obstruction> obstructions, int samples_per_side = 4) {
    topo.validate();
    if (layout.rows * layout.columns != topo.module_count()) {
        throw TopologyMismatch("array layout holds " + std::to_string(layout.rows * layout.columns) + " modules, topology has " +
                               std::to_string(topo.module_count()));
    }
    if (!(layout.tilt >= 0 && layout.tilt <= 90)) throw ConfigError("tilt must lie in [0, 90]");
    if (samples_per_side < 1) throw ConfigError("samples_per_side must be >= 1");
    for (const auto& o : obstructions) validate_obstruction(o);

    ShadingScene scene;
    scene.normal = layout.normal();
    scene.tilt = layout.tilt;
    scene.azimuth = layout.azimuth;
    scene.obstructions = std::move(obstructions);
    scene.samples_per_side = samples_per_side;

    const Vec3 u = layout.along_row(), w = layout.up_slope();
    const bool portrait = layout.orientation == Orientation::Portrait;
    // Module width axis a and length axis b in the array plane.
    const Vec3 a = portrait ? u : w;
    const Vec3 b = portrait ? w : u;
    const double extent_u = portrait ? spec.width_m : spec.length_m;
    const double extent_w = portrait ? spec.length_m : spec.width_m;

    const int n = topo.cells_per_substring;
    const int cps = cell_columns_per_substring(n);
    const int cell_rows = n / cps;
    const double cw = spec.width_m / (topo.substrings_per_module * cps);
    const double cl = spec.length_m / cell_rows;

    scene.cells.resize(static_cast<std::size_t>(topo.cell_count()));
    for (int s = 0; s < topo.strings; ++s) {
        for (int m = 0; m < topo.modules_per_string; ++m) {
            const int g = topo.module_index(s, m);
            const int row = g / layout.columns, col = g % layout.columns;
            const Vec3 corner = layout.origin + (col * (extent_u + layout.gap_m)) * u + (row * (extent_w + layout.gap_m)) * w;
            for (int k = 0; k < topo.substrings_per_module; ++k) {
                for (int c = 0; c < n; ++c) {
                    const int column = k * cps + c / cell_rows;
                    const int r = c % cell_rows;
                    CellGeometry cg;
                    cg.centre = corner + ((column + 0.5) * cw) * a + ((r + 0.5) * cl) * b;
                    cg.edge_a = cw * a;
                    cg.edge_b = cl * b;
                    scene.cells[static_cast<std::size_t>(topo.cell_index(s, m, k, c))] = cg;
                }
            }
        }
    }
    return scene;
}

/// Blocked fraction of each cell's beam, from a samples_per_side^2 grid of
/// points per cell traced toward the sun.
inline std::vector<double> shade_scene(const ShadingScene& scene, const SolarPosition& sun) {
    std::vector<double> out(scene.cells.size(), 0.0);
    if (scene.obstructions.empty() || !sun.above_horizon()) return out;
    const Vec3 d = sun.direction();
    const int ns = scene.samples_per_side;
    const double inv = 1.0 / (ns * ns);
    for (std::size_t i = 0; i < scene.cells.size(); ++i) {
        const auto& c = scene.cells[i];
        double blocked = 0;
        for (int p = 0; p < ns; ++p) {
            for (int q = 0; q < ns; ++q) {
                const Vec3 x = c.centre + ((p + 0.5) / ns - 0.5) * c.edge_a + ((q + 0.5) / ns - 0.5) * c.edge_b;
                blocked += 1.0 - ray_transmittance(scene.obstructions, x, d);
            }
        }
        out[i] = blocked * inv;
    }
    return out;
}

/// Daylight coefficients (solid angle times cosine of incidence) of every
/// cell for every sky patch; identical rows for a planar array.
inline CoefficientMatrix daylight_coefficients(const ShadingScene& scene, const SkyDome& dome) {
    const auto row = plane_daylight_coefficients(dome, scene.normal);
    CoefficientMatrix m(scene.cells.size(), dome.size());
    for (std::size_t i = 0; i < m.rows; ++i) std::copy(row.begin(), row.end(), m.data.begin() + static_cast<std::ptrdiff_t>(i * m.cols));
    return m;
}

/// Sky-patch occlusion of each cell, traced from the cell centre toward each
/// patch centre. All zeros when disabled or without obstructions.
inline CoefficientMatrix patch_occlusion(const ShadingScene& scene, const SkyDome& dome, bool enabled) {
    CoefficientMatrix m(scene.cells.size(), dome.size(), 0.0);
    if (!enabled || scene.obstructions.empty()) return m;
    const auto patches = dome.patches();
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t p = 0; p < m.cols; ++p) {
            if (dot(patches[p].centre, scene.normal) <= 0) continue;
            m(i, p) = 1.0 - ray_transmittance(scene.obstructions, scene.cells[i].centre, patches[p].centre);
        }
    }
    return m;
}

}  // namespace pvhires
