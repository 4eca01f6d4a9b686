#pragma once

// Weather time series.
//
// CSV format: header "timestamp,dni,dhi,temp_air,wind_speed", one row per
// timestep, timestamps ISO-8601 (UTC unless an offset is given), irradiance in
// W/m^2, air temperature in C, wind speed in m/s. Rows must be chronological
// with a uniform step.

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pvhires/constants.hpp"
#include "pvhires/error.hpp"
#include "pvhires/irradiance.hpp"
#include "pvhires/solar_position.hpp"
#include "pvhires/timeutil.hpp"

namespace pvhires {

struct WeatherRecord {
    Timestamp timestamp;
    double dni = 0;         // W/m^2
    double dhi = 0;         // W/m^2
    double temp_air = 20;   // C
    double wind_speed = 1;  // m/s

    double temp_air_k() const { return temp_air + constants::zero_celsius; }
};

struct WeatherSeries {
    std::vector<WeatherRecord> records;
    std::chrono::seconds step{60};

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
    double step_hours() const { return static_cast<double>(step.count()) / 3600.0; }
};

namespace detail {

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
        out.push_back(field);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline double parse_number(std::string_view s, const std::string& ctx) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw DataError(ctx + ": not a number: '" + std::string(s) + "'");
    }
    return v;
}

inline std::string read_text_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(std::string("cannot open ") + what + ": " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace detail

/// Checks chronological order and a uniform step; sets series.step.
inline void validate_weather(WeatherSeries& series) {
    for (std::size_t k = 0; k < series.records.size(); ++k) {
        const auto& r = series.records[k];
        if (r.dni < 0 || r.dhi < 0) throw DataError("weather row " + std::to_string(k + 1) + ": negative irradiance");
        if (r.wind_speed < 0) throw DataError("weather row " + std::to_string(k + 1) + ": negative wind speed");
        if (r.temp_air <= -constants::zero_celsius) throw DataError("weather row " + std::to_string(k + 1) + ": air temperature below absolute zero");
    }
    if (series.records.size() < 2) return;
    const auto step = series.records[1].timestamp - series.records[0].timestamp;
    if (step.count() <= 0) throw NonUniformTimestep("weather timestamps must be strictly increasing");
    for (std::size_t k = 2; k < series.records.size(); ++k) {
        if (series.records[k].timestamp - series.records[k - 1].timestamp != step) {
            throw NonUniformTimestep("weather step changes at " + format_timestamp(series.records[k].timestamp));
        }
    }
    series.step = std::chrono::duration_cast<std::chrono::seconds>(step);
}

inline WeatherSeries parse_weather_csv(std::string_view text, const std::string& source = "<weather>") {
    WeatherSeries series;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r" || line.front() == '#') continue;
        const auto f = detail::split_csv(line);
        if (!header) {
            if (f.size() != 5 || f[0] != "timestamp" || f[1] != "dni" || f[2] != "dhi" || f[3] != "temp_air" || f[4] != "wind_speed") {
                throw DataError(source + ": expected header 'timestamp,dni,dhi,temp_air,wind_speed'");
            }
            header = true;
            continue;
        }
        const std::string ctx = source + ":" + std::to_string(line_no);
        if (f.size() != 5) throw DataError(ctx + ": expected 5 fields");
        WeatherRecord r;
        r.timestamp = parse_timestamp(f[0]);
        r.dni = detail::parse_number(f[1], ctx);
        r.dhi = detail::parse_number(f[2], ctx);
        r.temp_air = detail::parse_number(f[3], ctx);
        r.wind_speed = detail::parse_number(f[4], ctx);
        series.records.push_back(r);
    }
    if (!header) throw DataError(source + ": empty weather file");
    validate_weather(series);
    return series;
}

inline WeatherSeries read_weather_csv(const std::string& path) {
    return parse_weather_csv(detail::read_text_file(path, "weather file"), path);
}

/// Externally computed effective irradiance: "timestamp,cell_index,e_eff".
using ExternalIrradiance = std::map<Timestamp, std::vector<double>>;

inline ExternalIrradiance parse_external_irradiance(std::string_view text, std::size_t cell_count,
                                                    const std::string& source = "<irradiance>") {
    ExternalIrradiance out;
    std::map<Timestamp, std::vector<char>> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r" || line.front() == '#') continue;
        const auto f = detail::split_csv(line);
        if (!header) {
            if (f.size() != 3 || f[0] != "timestamp" || f[1] != "cell_index" || f[2] != "e_eff") {
                throw DataError(source + ": expected header 'timestamp,cell_index,e_eff'");
            }
            header = true;
            continue;
        }
        const std::string ctx = source + ":" + std::to_string(line_no);
        if (f.size() != 3) throw DataError(ctx + ": expected 3 fields");
        const Timestamp t = parse_timestamp(f[0]);
        const double idx = detail::parse_number(f[1], ctx);
        const double e = detail::parse_number(f[2], ctx);
        if (idx < 0 || idx != std::floor(idx) || idx >= static_cast<double>(cell_count)) throw DataError(ctx + ": cell_index out of range");
        if (e < 0) throw DataError(ctx + ": negative e_eff");
        auto& v = out[t];
        auto& s = seen[t];
        if (v.empty()) {
            v.assign(cell_count, 0.0);
            s.assign(cell_count, 0);
        }
        const auto k = static_cast<std::size_t>(idx);
        if (s[k]) throw DataError(ctx + ": duplicate cell_index for this timestamp");
        s[k] = 1;
        v[k] = e;
    }
    for (const auto& [t, s] : seen) {
        for (char c : s) {
            if (!c) throw DataError(source + ": timestamp " + format_timestamp(t) + " does not cover every cell");
        }
    }
    return out;
}

inline ExternalIrradiance read_external_irradiance(const std::string& path, std::size_t cell_count) {
    return parse_external_irradiance(detail::read_text_file(path, "irradiance file"), cell_count, path);
}

/// Synthetic clear-sky day: beam from a simple air-mass attenuation
/// (0.7^(AM^0.678)), diffuse as 15% of global horizontal, sinusoidal air
/// temperature peaking at 15:00 solar time, constant wind.
struct ClearSkyOptions {
    double t_min_c = 8.0;
    double t_max_c = 18.0;
    double wind_speed = 2.0;
    std::chrono::seconds step{60};
};

inline WeatherSeries clear_sky_day(std::chrono::sys_days date, double latitude, double longitude, const ClearSkyOptions& opt = {}) {
    WeatherSeries series;
    series.step = opt.step;
    const Timestamp start{std::chrono::duration_cast<std::chrono::seconds>(date.time_since_epoch())};
    const auto n = static_cast<int>(86400 / opt.step.count());
    const double e0 = extraterrestrial_normal(day_of_year(start));
    for (int k = 0; k < n; ++k) {
        WeatherRecord r;
        r.timestamp = start + k * opt.step;
        const auto sun = solar_position(r.timestamp, latitude, longitude);
        if (sun.above_horizon()) {
            const double z = sun.zenith;
            const double cz = std::cos(deg2rad(z));
            const double am = 1.0 / (cz + 0.50572 * std::pow(96.07995 - z, -1.6364));
            r.dni = e0 * std::pow(0.7, std::pow(am, 0.678));
            r.dhi = 0.15 / 0.85 * r.dni * cz;
        }
        const double solar_hour = std::fmod((k * opt.step.count()) / 3600.0 + longitude / 15.0 + 24.0, 24.0);
        const double mean = 0.5 * (opt.t_min_c + opt.t_max_c), amp = 0.5 * (opt.t_max_c - opt.t_min_c);
        r.temp_air = mean + amp * std::cos(2.0 * pi * (solar_hour - 15.0) / 24.0);
        r.wind_speed = opt.wind_speed;
        series.records.push_back(r);
    }
    return series;
}

}  // namespace pvhires
