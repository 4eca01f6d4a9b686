#pragma once

// Effective irradiance per cell and its aggregation to coarser resolutions.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pvhires/constants.hpp"
#include "pvhires/error.hpp"
#include "pvhires/topology.hpp"
#include "pvhires/vec3.hpp"

namespace pvhires {

/// Martin-Ruiz angular response, normalised to K(0) = 1.
inline double martin_ruiz(double theta_deg, double a_r = 0.16) {
    if (!(a_r > 0)) throw ConfigError("angular loss coefficient a_r must be positive");
    const double c = std::cos(deg2rad(std::clamp(theta_deg, 0.0, 90.0)));
    return (1.0 - std::exp(-c / a_r)) / (1.0 - std::exp(-1.0 / a_r));
}

/// E_eff = E_direct K(theta) + E_diffuse K(60 deg).
inline double effective_irradiance(double e_direct, double e_diffuse, double theta_deg, double a_r = 0.16) {
    if (!(theta_deg >= 0 && theta_deg <= 90)) throw DataError("effective_irradiance: incidence angle must lie in [0, 90]");
    return e_direct * martin_ruiz(theta_deg, a_r) + e_diffuse * martin_ruiz(60.0, a_r);
}

/// Extraterrestrial normal irradiance for a day of the year.
inline double extraterrestrial_normal(int day_of_year) {
    return constants::solar_constant * (1.0 + 0.033 * std::cos(2.0 * pi * day_of_year / 365.0));
}

/// Horizontal direct beam over extraterrestrial horizontal irradiance, clipped
/// to [0, 1.2]. Empty at night.
inline std::optional<double> direct_clearness_index(double dni, double zenith_deg, int day_of_year) {
    if (!(zenith_deg < 90.0)) return std::nullopt;
    return std::clamp(dni / extraterrestrial_normal(day_of_year), 0.0, 1.2);
}

struct IrradianceField {
    std::vector<double> e_direct;   // W/m^2 per cell, plane of array
    std::vector<double> e_diffuse;  // W/m^2 per cell
    std::vector<double> e_eff;      // W/m^2 per cell
    Resolution resolution = Resolution::Cell;

    std::size_t size() const { return e_eff.size(); }

    static IrradianceField uniform(std::size_t cells, double e_eff) {
        IrradianceField f;
        f.e_direct.assign(cells, 0.0);
        f.e_diffuse.assign(cells, 0.0);
        f.e_eff.assign(cells, e_eff);
        return f;
    }

    bool dark() const {
        for (double e : e_eff) {
            if (e > 0) return false;
        }
        return true;
    }
};

/// Replaces each consecutive run of g values by its mean.
inline void average_groups(std::vector<double>& v, std::size_t g) {
    if (g <= 1) return;
    if (v.size() % g != 0) throw TopologyMismatch("value count is not a multiple of the group size");
    for (std::size_t start = 0; start < v.size(); start += g) {
        double sum = 0;
        for (std::size_t k = start; k < start + g; ++k) sum += v[k];
        const double mean = sum / static_cast<double>(g);
        for (std::size_t k = start; k < start + g; ++k) v[k] = mean;
    }
}

/// Replaces every cell value by the mean of its substring, module or string.
inline IrradianceField aggregate_resolution(const IrradianceField& cells, Resolution level, const SystemTopology& topo) {
    if (cells.resolution != Resolution::Cell) throw DataError("aggregate_resolution expects a cell-resolution field");
    const auto n = static_cast<std::size_t>(topo.cell_count());
    if (cells.e_eff.size() != n || cells.e_direct.size() != n || cells.e_diffuse.size() != n) {
        throw TopologyMismatch("irradiance field has " + std::to_string(cells.e_eff.size()) + " cells, topology has " +
                               std::to_string(n));
    }
    IrradianceField out = cells;
    out.resolution = level;
    const auto g = static_cast<std::size_t>(topo.group_size(level));
    average_groups(out.e_direct, g);
    average_groups(out.e_diffuse, g);
    average_groups(out.e_eff, g);
    return out;
}

}  // namespace pvhires
