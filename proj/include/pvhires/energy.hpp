#pragma once

// Energy accumulation. Each timestep's energy is rounded once to an integer
// number of nanowatt-hours, so sums are exact and independent of how a period
// is split.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pvhires/error.hpp"
#include "pvhires/timeutil.hpp"

namespace pvhires {

using EnergyNwh = std::int64_t;

inline constexpr double nwh_per_wh = 1e9;

/// Energy of power p (W) held for dt_hours, in nWh.
inline EnergyNwh energy_nwh(double p_watts, double dt_hours) {
    if (!std::isfinite(p_watts) || !(dt_hours >= 0)) throw DataError("energy_nwh: power must be finite and duration non-negative");
    return std::llround(p_watts * dt_hours * nwh_per_wh);
}

inline double to_wh(EnergyNwh e) { return static_cast<double>(e) / nwh_per_wh; }

struct YieldSeries {
    std::vector<Timestamp> timestamps;
    std::vector<EnergyNwh> y_inst;  // per timestep
    EnergyNwh y_cum = 0;
    std::map<std::string, EnergyNwh> monthly;  // "YYYY-MM"
    double step_hours = 0;

    std::size_t size() const { return y_inst.size(); }
    double y_cum_wh() const { return to_wh(y_cum); }
    double y_inst_wh(std::size_t k) const { return to_wh(y_inst.at(k)); }

    void append(Timestamp t, EnergyNwh e) {
        if (!timestamps.empty() && t <= timestamps.back()) throw DataError("yield series timestamps must increase");
        timestamps.push_back(t);
        y_inst.push_back(e);
        y_cum += e;
        monthly[month_key(t)] += e;
    }

    void append_power(Timestamp t, double p_watts) { append(t, energy_nwh(p_watts, step_hours)); }

    /// Concatenation of two consecutive periods.
    static YieldSeries join(const YieldSeries& a, const YieldSeries& b) {
        YieldSeries out = a;
        if (out.step_hours == 0) out.step_hours = b.step_hours;
        for (std::size_t k = 0; k < b.size(); ++k) out.append(b.timestamps[k], b.y_inst[k]);
        return out;
    }

    /// Monthly totals scaled from the simulated days to the month's length.
    std::map<std::string, double> monthly_scaled_wh() const;
};

inline std::map<std::string, double> YieldSeries::monthly_scaled_wh() const {
    using namespace std::chrono;
    std::map<std::string, std::vector<sys_days>> days;
    for (auto t : timestamps) {
        const auto d = floor<std::chrono::days>(t);
        auto& v = days[month_key(t)];
        if (v.empty() || v.back() != d) v.push_back(d);
    }
    std::map<std::string, double> out;
    for (const auto& [month, e] : monthly) {
        const auto ymd = year_month_day{days[month].front()};
        const auto last = year_month_day_last{ymd.year(), month_day_last{ymd.month()}};
        const double month_days = static_cast<double>(static_cast<unsigned>(last.day()));
        out[month] = to_wh(e) * month_days / static_cast<double>(days[month].size());
    }
    return out;
}

}  // namespace pvhires
