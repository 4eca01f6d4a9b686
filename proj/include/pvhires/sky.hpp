#pragma once

// Sky hemisphere discretisation and the sky-radiance / daylight-coefficient
// products
//
//   E_direct  = sum_p M_DC[s,p] (1 - M_TSR[s,p]) L_direct[p]
//   E_diffuse = sum_p M_DC[s,p] (1 - M_TSR[s,p]) L_diffuse[p]
//
// The dome follows Tregenza (145 patches in 12 degree altitude bands plus a
// zenith cap) and its Reinhart subdivisions (144 MF^2 + 1 patches). A single
// patch covering the whole hemisphere is also accepted.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "pvhires/error.hpp"
#include "pvhires/solar_position.hpp"
#include "pvhires/vec3.hpp"

namespace pvhires {

struct SkyPatch {
    double alt_lo = 0, alt_hi = 90;   // degrees
    double az_lo = 0, az_hi = 360;    // degrees clockwise from north
    double solid_angle = 0;           // sr
    Vec3 centre;                      // unit vector
    double cos_zenith = 1;            // of the centre direction
};

class SkyDome {
public:
    /// Tregenza dome with each patch split mf x mf (mf = 1 gives 145 patches).
    static SkyDome reinhart(int mf) {
        if (mf < 1) throw ConfigError("sky subdivision factor must be >= 1");
        static constexpr std::array<int, 7> tregenza_counts{30, 30, 24, 24, 18, 12, 6};
        SkyDome dome;
        const int bands = 7 * mf;
        const double band_height = 84.0 / bands;
        for (int b = 0; b < bands; ++b) {
            const int count = tregenza_counts[b / mf] * mf;
            const double lo = b * band_height, hi = (b + 1) * band_height;
            for (int j = 0; j < count; ++j) {
                dome.add_patch(lo, hi, 360.0 * j / count, 360.0 * (j + 1) / count);
            }
            dome.band_lo_.push_back(lo);
            dome.band_counts_.push_back(count);
        }
        dome.add_patch(84.0, 90.0, 0.0, 360.0);
        dome.band_lo_.push_back(84.0);
        dome.band_counts_.push_back(1);
        return dome;
    }

    /// Dome with the given patch count: 1 or 144 mf^2 + 1.
    static SkyDome with_patch_count(int n) {
        if (n == 1) {
            SkyDome dome;
            dome.add_patch(0.0, 90.0, 0.0, 360.0);
            dome.band_lo_.push_back(0.0);
            dome.band_counts_.push_back(1);
            return dome;
        }
        const int mf = static_cast<int>(std::lround(std::sqrt((n - 1) / 144.0)));
        if (mf < 1 || 144 * mf * mf + 1 != n) {
            throw ConfigError("unsupported sky patch count " + std::to_string(n) + " (use 1, 145, 577, 1297, ...)");
        }
        return reinhart(mf);
    }

    std::span<const SkyPatch> patches() const { return patches_; }
    std::size_t size() const { return patches_.size(); }

    /// Patch containing a sky direction, or -1 below the horizon.
    int find_patch(double zenith, double azimuth) const {
        const double alt = 90.0 - zenith;
        if (alt < 0) return -1;
        std::size_t band = 0;
        while (band + 1 < band_lo_.size() && alt >= band_lo_[band + 1]) ++band;
        std::size_t first = 0;
        for (std::size_t b = 0; b < band; ++b) first += band_counts_[b];
        const int count = band_counts_[band];
        double az = std::fmod(azimuth, 360.0);
        if (az < 0) az += 360.0;
        int j = static_cast<int>(az / (360.0 / count));
        if (j >= count) j = count - 1;
        return static_cast<int>(first) + j;
    }

    /// sum_p solid_angle_p cos(zenith_p): the dome's horizontal quadrature
    /// weight for a uniform radiance.
    double horizontal_weight() const {
        double w = 0;
        for (const auto& p : patches_) w += p.solid_angle * p.cos_zenith;
        return w;
    }

private:
    void add_patch(double alt_lo, double alt_hi, double az_lo, double az_hi) {
        SkyPatch p;
        p.alt_lo = alt_lo;
        p.alt_hi = alt_hi;
        p.az_lo = az_lo;
        p.az_hi = az_hi;
        p.solid_angle = deg2rad(az_hi - az_lo) * (std::sin(deg2rad(alt_hi)) - std::sin(deg2rad(alt_lo)));
        const bool cap = alt_hi >= 90.0 && az_hi - az_lo >= 360.0;
        const double alt_c = cap ? 90.0 : 0.5 * (alt_lo + alt_hi);
        p.centre = direction_from_angles(90.0 - alt_c, 0.5 * (az_lo + az_hi));
        p.cos_zenith = p.centre.z;
        patches_.push_back(p);
    }

    std::vector<SkyPatch> patches_;
    std::vector<double> band_lo_;
    std::vector<int> band_counts_;
};

struct SkyRadiance {
    std::vector<double> l_direct;
    std::vector<double> l_diffuse;
};

/// Beam concentrated in the sun's patch, diffuse spread isotropically. Both
/// are normalised so the dome's horizontal quadrature returns the horizontal
/// beam dni cos(zenith) and dhi.
inline SkyRadiance compose_sky_radiance(double dni, double dhi, const SolarPosition& sun, const SkyDome& dome) {
    if (dni < 0 || dhi < 0) throw DataError("compose_sky_radiance: negative irradiance");
    SkyRadiance sky;
    const auto patches = dome.patches();
    sky.l_direct.assign(patches.size(), 0.0);
    sky.l_diffuse.assign(patches.size(), 0.0);
    if (dni > 0 && sun.above_horizon()) {
        const int p = dome.find_patch(sun.zenith, sun.azimuth);
        const auto& patch = patches[static_cast<std::size_t>(p)];
        sky.l_direct[static_cast<std::size_t>(p)] =
            dni * std::cos(deg2rad(sun.zenith)) / (patch.solid_angle * patch.cos_zenith);
    }
    if (dhi > 0) {
        const double l = dhi / dome.horizontal_weight();
        for (auto& x : sky.l_diffuse) x = l;
    }
    return sky;
}

/// Row-major sensors x patches matrix.
struct CoefficientMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    CoefficientMatrix() = default;
    CoefficientMatrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct PlaneIrradiance {
    std::vector<double> e_direct;
    std::vector<double> e_diffuse;
};

inline std::vector<double> apply_coefficients(const CoefficientMatrix& m_dc, const CoefficientMatrix& m_tsr,
                                              std::span<const double> radiance) {
    if (m_dc.rows != m_tsr.rows || m_dc.cols != m_tsr.cols || m_dc.cols != radiance.size()) {
        throw DimensionMismatch("plane_irradiance: coefficient and radiance dimensions differ");
    }
    std::vector<double> out(m_dc.rows, 0.0);
    for (std::size_t s = 0; s < m_dc.rows; ++s) {
        double acc = 0;
        for (std::size_t p = 0; p < m_dc.cols; ++p) acc += m_dc(s, p) * (1.0 - m_tsr(s, p)) * radiance[p];
        out[s] = std::max(acc, 0.0);
    }
    return out;
}

inline PlaneIrradiance plane_irradiance(const CoefficientMatrix& m_dc, const CoefficientMatrix& m_tsr, const SkyRadiance& sky) {
    for (double t : m_tsr.data) {
        if (!(t >= 0 && t <= 1)) throw DataError("plane_irradiance: M_TSR entries must lie in [0, 1]");
    }
    if (sky.l_direct.size() != sky.l_diffuse.size()) throw DimensionMismatch("sky radiance vectors differ in length");
    return {apply_coefficients(m_dc, m_tsr, sky.l_direct), apply_coefficients(m_dc, m_tsr, sky.l_diffuse)};
}

/// Daylight coefficients of an unobstructed plane with unit normal n:
/// solid angle times the cosine of incidence at each patch centre.
inline std::vector<double> plane_daylight_coefficients(const SkyDome& dome, Vec3 n) {
    std::vector<double> out;
    out.reserve(dome.size());
    for (const auto& p : dome.patches()) out.push_back(p.solid_angle * std::max(0.0, dot(p.centre, n)));
    return out;
}

}  // namespace pvhires
