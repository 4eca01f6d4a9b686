#pragma once

// Low-precision solar ephemeris (NOAA spreadsheet formulation of Meeus).
// Geometric (unrefracted) zenith; azimuth clockwise from north.

#include <algorithm>
#include <cmath>

#include "pvhires/error.hpp"
#include "pvhires/timeutil.hpp"
#include "pvhires/vec3.hpp"

namespace pvhires {

struct SolarPosition {
    double zenith = 0;   // degrees
    double azimuth = 0;  // degrees

    bool above_horizon() const { return zenith < 90.0; }
    Vec3 direction() const { return direction_from_angles(zenith, azimuth); }
};

inline SolarPosition solar_position(Timestamp t, double latitude, double longitude) {
    if (!(std::abs(latitude) <= 90.0)) throw ConfigError("latitude must lie in [-90, 90]");
    const double unix_s = unix_seconds(t);
    const double jd = unix_s / 86400.0 + 2440587.5;
    const double jc = (jd - 2451545.0) / 36525.0;

    const double l0 = std::fmod(280.46646 + jc * (36000.76983 + jc * 0.0003032), 360.0);
    const double m = 357.52911 + jc * (35999.05029 - 0.0001537 * jc);
    const double e = 0.016708634 - jc * (0.000042037 + 0.0000001267 * jc);
    const double mr = deg2rad(m);
    const double center = std::sin(mr) * (1.914602 - jc * (0.004817 + 0.000014 * jc)) +
                          std::sin(2 * mr) * (0.019993 - 0.000101 * jc) + std::sin(3 * mr) * 0.000289;
    const double true_long = l0 + center;
    const double omega = deg2rad(125.04 - 1934.136 * jc);
    const double app_long = true_long - 0.00569 - 0.00478 * std::sin(omega);
    const double mean_obliq = 23.0 + (26.0 + (21.448 - jc * (46.815 + jc * (0.00059 - jc * 0.001813))) / 60.0) / 60.0;
    const double obliq = deg2rad(mean_obliq + 0.00256 * std::cos(omega));
    const double decl = std::asin(std::sin(obliq) * std::sin(deg2rad(app_long)));

    const double y = std::pow(std::tan(obliq / 2), 2);
    const double l0r = deg2rad(l0);
    const double eot_min = 4.0 * rad2deg(y * std::sin(2 * l0r) - 2 * e * std::sin(mr) +
                                         4 * e * y * std::sin(mr) * std::cos(2 * l0r) -
                                         0.5 * y * y * std::sin(4 * l0r) - 1.25 * e * e * std::sin(2 * mr));

    const double day_minutes = std::fmod(unix_s, 86400.0) / 60.0;
    double tst = std::fmod(day_minutes + eot_min + 4.0 * longitude, 1440.0);
    if (tst < 0) tst += 1440.0;
    double ha = tst / 4.0 - 180.0;
    if (ha < -180.0) ha += 360.0;
    const double har = deg2rad(ha);
    const double lat = deg2rad(latitude);

    double cz = std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::cos(har);
    cz = std::clamp(cz, -1.0, 1.0);
    SolarPosition pos;
    pos.zenith = rad2deg(std::acos(cz));
    double az = rad2deg(std::atan2(std::sin(har), std::cos(har) * std::sin(lat) - std::tan(decl) * std::cos(lat))) + 180.0;
    az = std::fmod(az, 360.0);
    if (az < 0) az += 360.0;
    pos.azimuth = az;
    return pos;
}

}  // namespace pvhires
