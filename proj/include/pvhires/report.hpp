#pragma once

// CSV and JSON renderings of simulation results, and atomic file output.
//
// timestep_results.csv  timestamp,entity,index,v,i,p,p_mpp,bypass,mode,tc_k
//                       entity is system, string or module; bypass lists the
//                       active substring flags as 0/1 digits.
// yield_series.csv      timestamp,p_w,y_inst_nwh,y_cum_nwh
// yield_monthly.csv     month,energy_wh,days,month_scaled_wh
// resolution_report.csv timestamp,level,p_w,ratio_to_cell,bypass_disagreements,missed_bypass,kt_dir
// resolution_monthly.csv month,level,energy_wh,ratio_to_cell
// architecture_report.csv month,architecture,energy_wh,delta_vs_string_pct,delta_vs_central_pct

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pvhires/error.hpp"
#include "pvhires/simulation.hpp"

namespace pvhires {

/// Writes through a temporary sibling and renames it into place.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw ConfigError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace detail {

inline std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

inline std::string flags(const BypassState& b) {
    std::string s;
    for (bool a : b.active) s += a ? '1' : '0';
    return s;
}

}  // namespace detail

inline std::string timestep_results_csv(const RunResult& run) {
    std::ostringstream o;
    o << "timestamp,entity,index,v,i,p,p_mpp,bypass,mode,tc_k\n";
    for (const auto& s : run.steps) {
        const auto ts = format_timestamp(s.timestamp);
        double p_mpp = 0;
        for (const auto& st : s.strings) p_mpp += st.p_mpp;
        o << ts << ",system,0," << detail::fmt(s.v) << ',' << detail::fmt(s.i) << ',' << detail::fmt(s.p) << ','
          << detail::fmt(p_mpp) << ",,,\n";
        for (std::size_t k = 0; k < s.strings.size(); ++k) {
            const auto& st = s.strings[k];
            o << ts << ",string," << k << ',' << detail::fmt(st.v) << ',' << detail::fmt(st.i) << ',' << detail::fmt(st.p) << ','
              << detail::fmt(st.p_mpp) << ",,,\n";
        }
        for (std::size_t k = 0; k < s.modules.size(); ++k) {
            const auto& m = s.modules[k];
            o << ts << ",module," << k << ',' << detail::fmt(m.v) << ',' << detail::fmt(m.i) << ',' << detail::fmt(m.p) << ','
              << detail::fmt(m.p_mpp) << ',' << detail::flags(m.bypass) << ',' << (m.mode ? to_string(*m.mode) : "") << ','
              << detail::fmt(k < s.tc.size() ? s.tc[k] : 0.0) << '\n';
        }
    }
    return o.str();
}

inline std::string yield_series_csv(const RunResult& run) {
    std::ostringstream o;
    o << "timestamp,p_w,y_inst_nwh,y_cum_nwh\n";
    EnergyNwh cum = 0;
    for (const auto& s : run.steps) {
        cum += s.y_inst;
        o << format_timestamp(s.timestamp) << ',' << detail::fmt(s.p) << ',' << s.y_inst << ',' << cum << '\n';
    }
    return o.str();
}

inline std::string yield_monthly_csv(const YieldSeries& y) {
    std::ostringstream o;
    o << "month,energy_wh,days,month_scaled_wh\n";
    const auto scaled = y.monthly_scaled_wh();
    std::map<std::string, std::set<std::int64_t>> days;
    for (auto t : y.timestamps) days[month_key(t)].insert(std::chrono::floor<std::chrono::days>(t).time_since_epoch().count());
    for (const auto& [month, e] : y.monthly) {
        o << month << ',' << detail::fmt(to_wh(e)) << ',' << days[month].size() << ',' << detail::fmt(scaled.at(month)) << '\n';
    }
    return o.str();
}

inline std::string resolution_report_csv(const ResolutionReport& rep) {
    std::ostringstream o;
    o << "timestamp,level,p_w,ratio_to_cell,bypass_disagreements,missed_bypass,kt_dir\n";
    const auto& ref = rep.reference();
    for (std::size_t t = 0; t < ref.steps.size(); ++t) {
        for (std::size_t r = 0; r < rep.runs.size(); ++r) {
            const auto& s = rep.runs[r].steps[t];
            o << format_timestamp(s.timestamp) << ',' << to_string(rep.runs[r].resolution) << ',' << detail::fmt(s.p) << ','
              << detail::fmt(rep.opp_ratio(r, t)) << ',' << rep.bypass_disagreements(r, t) << ',' << rep.missed_bypass(r, t) << ','
              << (s.kt_dir ? detail::fmt(*s.kt_dir) : "") << '\n';
        }
    }
    return o.str();
}

inline std::string resolution_monthly_csv(const ResolutionReport& rep) {
    std::ostringstream o;
    o << "month,level,energy_wh,ratio_to_cell\n";
    for (const auto& [month, ref] : rep.reference().yield.monthly) {
        for (const auto& run : rep.runs) {
            const auto e = run.yield.monthly.at(month);
            o << month << ',' << to_string(run.resolution) << ',' << detail::fmt(to_wh(e)) << ','
              << detail::fmt(ref != 0 ? static_cast<double>(e) / static_cast<double>(ref) : std::nan("")) << '\n';
        }
    }
    return o.str();
}

inline std::string architecture_report_csv(const ArchitectureReport& rep) {
    std::ostringstream o;
    o << "month,architecture,energy_wh,delta_vs_string_pct,delta_vs_central_pct\n";
    const auto* str = rep.find(Architecture::StringInverter);
    const auto* cen = rep.find(Architecture::CentralInverter);
    auto delta = [](EnergyNwh e, const RunResult* base, const std::string& month) {
        if (!base) return std::string();
        const auto b = base->yield.monthly.at(month);
        if (b == 0) return std::string("nan");
        return detail::fmt(100.0 * (static_cast<double>(e) - static_cast<double>(b)) / static_cast<double>(b));
    };
    if (rep.runs.empty()) return o.str();
    for (const auto& [month, unused] : rep.runs.front().yield.monthly) {
        for (const auto& run : rep.runs) {
            const auto e = run.yield.monthly.at(month);
            o << month << ',' << to_string(run.architecture) << ',' << detail::fmt(to_wh(e)) << ',' << delta(e, str, month) << ','
              << delta(e, cen, month) << '\n';
        }
    }
    return o.str();
}

/// Piecewise-linear curve as "v,i" rows under a comment naming it.
inline std::string curve_csv(const IVCurve& c, const std::string& level, Timestamp t) {
    std::ostringstream o;
    o << "# level=" << level << " timestamp=" << format_timestamp(t) << '\n' << "v,i\n";
    for (const auto& p : c.points()) o << detail::fmt(p.v) << ',' << detail::fmt(p.i) << '\n';
    return o.str();
}

/// Operating summary of one timestep.
inline nlohmann::json timestep_summary(const TimestepResult& r, const SystemCurves& sc, Architecture arch, Resolution level) {
    using nlohmann::json;
    json j;
    j["timestamp"] = format_timestamp(r.timestamp);
    j["architecture"] = to_string(arch);
    j["resolution"] = to_string(level);
    j["zenith_deg"] = r.zenith;
    j["kt_dir"] = r.kt_dir ? json(*r.kt_dir) : json(nullptr);
    j["system"] = {{"v", r.v}, {"i", r.i}, {"p", r.p}};
    int active = 0;
    json strings = json::array();
    for (std::size_t s = 0; s < r.strings.size(); ++s) {
        const auto& st = r.strings[s];
        json e{{"index", s}, {"opp", {{"v", st.v}, {"i", st.i}, {"p", st.p}}}, {"p_mpp", st.p_mpp}};
        if (s < sc.strings.size()) {
            const auto mpp = find_mpp(sc.strings[s]);
            e["mpp"] = {{"v", mpp.v}, {"i", mpp.i}, {"p", mpp.p}};
        }
        strings.push_back(e);
    }
    j["strings"] = strings;
    json modules = json::array();
    for (std::size_t m = 0; m < r.modules.size(); ++m) {
        const auto& rec = r.modules[m];
        active += rec.bypass.count();
        json e{{"index", m},
               {"opp", {{"v", rec.v}, {"i", rec.i}, {"p", rec.p}}},
               {"p_mpp", rec.p_mpp},
               {"bypass", rec.bypass.active},
               {"tc_k", m < r.tc.size() ? r.tc[m] : 0.0}};
        if (m < sc.module_mpp.size()) e["mpp"] = {{"v", sc.module_mpp[m].v}, {"i", sc.module_mpp[m].i}, {"p", sc.module_mpp[m].p}};
        if (rec.mode) e["mlpe_mode"] = to_string(*rec.mode);
        if (rec.demand_infeasible) e["demand_infeasible"] = true;
        modules.push_back(e);
    }
    j["modules"] = modules;
    j["bypass_activations"] = active;
    return j;
}

}  // namespace pvhires
