#pragma once

// Per-timestep pipeline: irradiance -> temperature -> cell curves ->
// substring/module/string/system curves -> operating points -> energy.
//
// A period runs in three phases. Irradiance is independent per timestep and
// runs in parallel; the thermal chain is sequential per module; the
// electrical solve is again independent per timestep. Results land in
// per-timestep slots, so they do not depend on the worker count.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pvhires/cell_electrical.hpp"
#include "pvhires/energy.hpp"
#include "pvhires/error.hpp"
#include "pvhires/geometry.hpp"
#include "pvhires/hierarchy.hpp"
#include "pvhires/irradiance.hpp"
#include "pvhires/mlpe.hpp"
#include "pvhires/mpp.hpp"
#include "pvhires/parallel.hpp"
#include "pvhires/scenario.hpp"
#include "pvhires/sky.hpp"
#include "pvhires/solar_position.hpp"
#include "pvhires/thermal.hpp"
#include "pvhires/weather.hpp"

namespace pvhires {

struct ModuleRecord {
    double v = 0, i = 0, p = 0;  // operating point at the module's output
    double p_mpp = 0;            // the module's own maximum power
    BypassState bypass;          // at the module-side current
    std::optional<OptimizerMode> mode;
    bool demand_infeasible = false;
};

struct StringRecord {
    double v = 0, i = 0, p = 0;
    double p_mpp = 0;
};

struct TimestepResult {
    Timestamp timestamp;
    bool daylight = false;
    double zenith = 90;
    std::optional<double> kt_dir;
    double v = 0, i = 0, p = 0;  // system operating point
    std::vector<StringRecord> strings;
    std::vector<ModuleRecord> modules;
    std::vector<double> e_eff;  // per cell as seen by the electrical model; kept on request
    std::vector<double> tc;     // per module, K
    EnergyNwh y_inst = 0;
};

/// Curves of one timestep for one architecture.
struct SystemCurves {
    std::vector<double> i_grid;
    std::vector<ModuleCurve> modules;
    std::vector<OperatingPoint> module_mpp;
    std::vector<std::optional<IVCurve>> optimized;  // per module, when an optimizer is fitted
    std::vector<IVCurve> strings;
    // Detail for curve dumps.
    std::vector<IVCurve> unique_cells;
    std::vector<std::size_t> cell_curve_index;         // per cell into unique_cells
    std::vector<std::vector<double>> substring_v;      // per substring, on i_grid
};

/// Irradiance and temperature for a whole period at cell resolution.
struct PreparedPeriod {
    std::vector<Timestamp> timestamps;
    std::vector<std::vector<double>> e_eff;  // [t][cell]
    std::vector<std::vector<double>> tc;     // [t][module], K
    std::vector<double> zenith;
    std::vector<std::optional<double>> kt_dir;
    double step_hours = 0;
};

struct RunOptions {
    unsigned threads = 0;  // 0: hardware concurrency
    bool keep_cell_detail = false;
};

struct RunResult {
    Architecture architecture = Architecture::StringInverter;
    Resolution resolution = Resolution::Cell;
    std::vector<TimestepResult> steps;
    YieldSeries yield;
};

class Simulator {
public:
    explicit Simulator(Scenario s) : s_(std::move(s)) {
        s_.validate();
        params_ = calibrate_two_diode(s_.module, s_.calibration);
        scene_ = build_scene(s_.layout, s_.topology, s_.module, s_.obstructions, s_.samples_per_side);
        thermal_ = FuentesModel(s_.thermal);
        const auto dome = SkyDome::with_patch_count(static_cast<std::size_t>(s_.sky_patches));
        const auto m_dc = daylight_coefficients(scene_, dome);
        const auto m_tsr = patch_occlusion(scene_, dome, s_.diffuse_shading);
        const std::vector<double> unit(dome.size(), 1.0 / dome.horizontal_weight());
        diffuse_factor_ = apply_coefficients(m_dc, m_tsr, unit);
        k60_ = martin_ruiz(60.0, s_.a_r);
    }

    const Scenario& scenario() const { return s_; }
    const TwoDiodeParams& params() const { return params_; }
    const ShadingScene& scene() const { return scene_; }
    const FuentesModel& thermal() const { return thermal_; }

    // ---- irradiance ------------------------------------------------------

    /// Per-cell plane-of-array irradiance at cell resolution.
    IrradianceField irradiance(const WeatherRecord& w, SolarPosition* sun_out = nullptr) const {
        const auto n = static_cast<std::size_t>(s_.topology.cell_count());
        IrradianceField f;
        f.e_direct.assign(n, 0.0);
        f.e_diffuse.assign(n, 0.0);
        f.e_eff.assign(n, 0.0);
        const auto sun = solar_position(w.timestamp, s_.site.latitude, s_.site.longitude);
        if (sun_out) *sun_out = sun;
        if (w.dhi > 0) {
            for (std::size_t k = 0; k < n; ++k) f.e_diffuse[k] = w.dhi * diffuse_factor_[k];
        }
        double k_dir = 0;
        if (sun.above_horizon() && w.dni > 0) {
            const double cos_aoi = dot(sun.direction(), scene_.normal);
            if (cos_aoi > 0) {
                const double aoi = rad2deg(std::acos(std::min(1.0, cos_aoi)));
                k_dir = martin_ruiz(aoi, s_.a_r);
                const auto shade = shade_scene(scene_, sun);
                for (std::size_t k = 0; k < n; ++k) f.e_direct[k] = w.dni * cos_aoi * (1.0 - shade[k]);
            }
        }
        for (std::size_t k = 0; k < n; ++k) f.e_eff[k] = f.e_direct[k] * k_dir + f.e_diffuse[k] * k60_;
        return f;
    }

    /// Mean effective irradiance of each module.
    std::vector<double> module_means(std::span<const double> e_eff) const {
        const auto per = static_cast<std::size_t>(s_.topology.cells_per_module());
        std::vector<double> out(static_cast<std::size_t>(s_.topology.module_count()), 0.0);
        for (std::size_t m = 0; m < out.size(); ++m) {
            double sum = 0;
            for (std::size_t c = 0; c < per; ++c) sum += e_eff[m * per + c];
            out[m] = sum / static_cast<double>(per);
        }
        return out;
    }

    /// Irradiance for every record (parallel) and the module temperature chain
    /// (sequential, cold start at the first air temperature).
    PreparedPeriod prepare(const WeatherSeries& weather, unsigned threads = 0) const {
        WeatherSeries checked = weather;
        validate_weather(checked);
        PreparedPeriod p;
        const std::size_t n = checked.size();
        p.step_hours = checked.step_hours();
        p.timestamps.resize(n);
        p.e_eff.resize(n);
        p.zenith.resize(n);
        p.kt_dir.resize(n);
        parallel_for(n, threads, [&](std::size_t k) {
            const auto& w = checked.records[k];
            try {
                SolarPosition sun;
                auto f = irradiance(w, &sun);
                p.timestamps[k] = w.timestamp;
                p.e_eff[k] = std::move(f.e_eff);
                p.zenith[k] = sun.zenith;
                p.kt_dir[k] = direct_clearness_index(w.dni, sun.zenith, day_of_year(w.timestamp));
            } catch (const Error& e) {
                throw StageError("irradiance at " + format_timestamp(w.timestamp), e);
            }
        });

        const auto modules = static_cast<std::size_t>(s_.topology.module_count());
        p.tc.assign(n, std::vector<double>(modules, 0.0));
        const double dt = static_cast<double>(checked.step.count());
        for (std::size_t k = 0; k < n; ++k) {
            const auto& w = checked.records[k];
            try {
                const auto means = module_means(p.e_eff[k]);
                for (std::size_t m = 0; m < modules; ++m) {
                    if (k == 0) {
                        p.tc[k][m] = w.temp_air_k();
                    } else {
                        const ThermalEnv env{means[m], w.temp_air_k(), w.wind_speed, std::nullopt};
                        p.tc[k][m] = thermal_.step(p.tc[k - 1][m], env, dt);
                    }
                }
            } catch (const Error& e) {
                throw StageError("thermal at " + format_timestamp(w.timestamp), e);
            }
        }
        return p;
    }

    // ---- electrical ------------------------------------------------------

    /// Curves for one timestep. e_eff is per cell (already routed through
    /// the resolution), tc per module.
    SystemCurves build_curves(std::span<const double> e_eff, std::span<const double> tc, Architecture arch,
                              bool keep_detail = false) const {
        const auto& topo = s_.topology;
        const auto n_cells = static_cast<std::size_t>(topo.cell_count());
        const auto per_module = static_cast<std::size_t>(topo.cells_per_module());
        const auto per_sub = static_cast<std::size_t>(topo.cells_per_substring);
        const auto n_modules = static_cast<std::size_t>(topo.module_count());
        if (e_eff.size() != n_cells || tc.size() != n_modules) throw DimensionMismatch("build_curves: input sizes do not match the topology");

        // Distinct (irradiance, temperature) pairs share one cell curve.
        struct KeyHash {
            std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
                return std::hash<std::uint64_t>{}(k.first * 0x9E3779B97F4A7C15ull ^ k.second);
            }
        };
        std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, std::size_t, KeyHash> index;
        std::vector<OperatingDiodeParams> ops;
        std::vector<std::size_t> cell_to_unique(n_cells);
        for (std::size_t c = 0; c < n_cells; ++c) {
            const double e = std::max(0.0, e_eff[c]);
            const double t = tc[c / per_module];
            const auto key = std::make_pair(std::bit_cast<std::uint64_t>(e), std::bit_cast<std::uint64_t>(t));
            auto [it, fresh] = index.try_emplace(key, ops.size());
            if (fresh) ops.push_back(operating_params(params_, s_.module, e, t));
            cell_to_unique[c] = it->second;
        }

        // Reverse extent deep enough that any substring crosses -vf before a
        // cell curve runs out.
        double voc_max = 0;
        for (const auto& op : ops) {
            if (op.iph > 0) voc_max = std::max(voc_max, open_circuit_voltage(op));
        }
        CellCurveOptions copt;
        copt.v_reverse = -1.1 * (static_cast<double>(per_sub) * std::max(voc_max, 0.1) + topo.bypass_vf);

        std::vector<IVCurve> cells;
        cells.reserve(ops.size());
        double i_top = 0;
        for (const auto& op : ops) {
            cells.push_back(cell_iv_curve(op, 32, copt));
            i_top = std::max(i_top, cells.back().current_at(0.0));
        }

        SystemCurves out;
        if (!(i_top > 0)) return out;
        out.i_grid = current_grid(i_top, s_.grid_points);
        const auto& grid = out.i_grid;
        const std::size_t ng = grid.size();

        std::vector<std::vector<double>> cell_v(cells.size());
        for (std::size_t u = 0; u < cells.size(); ++u) cell_v[u] = sample_on_grid(cells[u], grid);

        const auto n_sub = static_cast<std::size_t>(topo.substring_count());
        const auto k_sub = static_cast<std::size_t>(topo.substrings_per_module);
        std::vector<std::vector<double>> sub_v(n_sub, std::vector<double>(ng, 0.0));
        std::vector<std::pair<std::size_t, int>> counts;
        for (std::size_t s = 0; s < n_sub; ++s) {
            counts.clear();
            for (std::size_t c = s * per_sub; c < (s + 1) * per_sub; ++c) {
                const std::size_t u = cell_to_unique[c];
                auto it = std::find_if(counts.begin(), counts.end(), [u](const auto& x) { return x.first == u; });
                if (it == counts.end()) counts.emplace_back(u, 1);
                else ++it->second;
            }
            std::sort(counts.begin(), counts.end());
            auto& v = sub_v[s];
            for (const auto& [u, cnt] : counts) {
                const auto& cv = cell_v[u];
                for (std::size_t g = 0; g < ng; ++g) v[g] += cnt * cv[g];
            }
        }

        out.modules.reserve(n_modules);
        out.module_mpp.reserve(n_modules);
        out.optimized.assign(n_modules, std::nullopt);
        for (std::size_t m = 0; m < n_modules; ++m) {
            std::span<const std::vector<double>> subs(sub_v.data() + m * k_sub, k_sub);
            out.modules.push_back(module_from_substring_samples(subs, topo.bypass_vf, grid, "module " + std::to_string(m)));
            out.module_mpp.push_back(find_mpp(out.modules.back().curve));
            if (const auto* spec = optimizer_for(m, arch)) {
                out.optimized[m] = build_optimized_curve(out.modules.back().curve, *spec, grid);
            }
        }

        if (arch != Architecture::Microinverters) {
            const auto per_string = static_cast<std::size_t>(topo.modules_per_string);
            for (std::size_t s = 0; s < static_cast<std::size_t>(topo.strings); ++s) {
                std::vector<IVCurve> members;
                members.reserve(per_string);
                for (std::size_t m = s * per_string; m < (s + 1) * per_string; ++m) {
                    members.push_back(out.optimized[m] ? *out.optimized[m] : out.modules[m].curve);
                }
                out.strings.push_back(string_curve(members, grid, "string " + std::to_string(s)));
            }
        }

        if (keep_detail) {
            out.unique_cells = std::move(cells);
            out.cell_curve_index = std::move(cell_to_unique);
            out.substring_v = std::move(sub_v);
        }
        return out;
    }

    /// Operating points of every level for the architecture.
    TimestepResult operating_points(const SystemCurves& sc, Architecture arch) const {
        const auto& topo = s_.topology;
        const auto n_modules = static_cast<std::size_t>(topo.module_count());
        const auto n_strings = static_cast<std::size_t>(topo.strings);
        const auto per_string = static_cast<std::size_t>(topo.modules_per_string);
        TimestepResult r;
        r.modules.assign(n_modules, ModuleRecord{});
        r.strings.assign(n_strings, StringRecord{});
        for (auto& m : r.modules) m.bypass.active.assign(static_cast<std::size_t>(topo.substrings_per_module), false);
        if (sc.modules.empty()) return r;  // dark
        if (sc.modules.size() != n_modules) throw InconsistentInputs("operating_points: module count differs from topology");
        for (std::size_t m = 0; m < n_modules; ++m) r.modules[m].p_mpp = std::max(0.0, sc.module_mpp[m].p);

        if (arch == Architecture::Microinverters) {
            for (std::size_t m = 0; m < n_modules; ++m) {
                auto& rec = r.modules[m];
                const auto& mpp = sc.module_mpp[m];
                if (mpp.p > 0) {
                    rec.v = mpp.v;
                    rec.i = mpp.i;
                    rec.p = mpp.p;
                }
                rec.bypass = bypass_state_at(sc.modules[m], std::max(0.0, rec.i));
                r.strings[m / per_string].p += rec.p;
            }
            for (const auto& s : r.strings) r.p += s.p;
            return r;
        }

        if (sc.strings.size() != n_strings) throw InconsistentInputs("operating_points: string count differs from topology");
        std::vector<double> string_i(n_strings, 0.0);
        for (std::size_t s = 0; s < n_strings; ++s) r.strings[s].p_mpp = std::max(0.0, find_mpp(sc.strings[s]).p);

        if (arch == Architecture::CentralInverter) {
            const auto sys = system_curve(sc.strings, s_.grid_points);
            const auto mpp = find_mpp(sys);
            if (mpp.p > 0) {
                for (std::size_t s = 0; s < n_strings; ++s) string_i[s] = sc.strings[s].current_at(mpp.v);
                r.v = mpp.v;
            }
        } else {
            for (std::size_t s = 0; s < n_strings; ++s) {
                const auto mpp = find_mpp(sc.strings[s]);
                if (mpp.p > 0) string_i[s] = mpp.i;
            }
        }

        for (std::size_t s = 0; s < n_strings; ++s) {
            const double i = string_i[s];
            auto& srec = r.strings[s];
            srec.i = i;
            for (std::size_t m = s * per_string; m < (s + 1) * per_string; ++m) {
                auto& rec = r.modules[m];
                rec.i = i;
                if (sc.optimized[m]) {
                    const auto* spec = optimizer_for(m, arch);
                    const auto o = optimizer_output(sc.module_mpp[m], i, *spec, sc.modules[m].curve);
                    rec.v = sc.optimized[m]->voltage_at(i);
                    rec.mode = o.mode;
                    rec.demand_infeasible = o.demand_infeasible;
                    rec.bypass = bypass_state_at(sc.modules[m], std::max(0.0, o.i_in));
                } else {
                    rec.v = sc.modules[m].curve.voltage_at(i);
                    rec.bypass = bypass_state_at(sc.modules[m], i);
                }
                rec.p = rec.v * i;
                srec.v += rec.v;
            }
            if (arch == Architecture::CentralInverter && i > 0) srec.v = r.v;
            srec.p = srec.v * i;
        }
        double i_total = 0;
        for (const auto& s : r.strings) {
            r.p += s.p;
            i_total += s.i;
        }
        r.i = i_total;
        if (arch != Architecture::CentralInverter && n_strings == 1) r.v = r.strings[0].v;
        return r;
    }

    /// One timestep given its weather and the previous module temperatures
    /// (empty for a cold start).
    TimestepResult simulate_timestep(const WeatherRecord& w, std::span<const double> prev_tc, double dt_seconds,
                                     Resolution level, Architecture arch, bool keep_detail = false) const {
        SolarPosition sun;
        IrradianceField f;
        try {
            f = irradiance(w, &sun);
        } catch (const Error& e) {
            throw StageError("irradiance at " + format_timestamp(w.timestamp), e);
        }
        std::vector<double> tc(static_cast<std::size_t>(s_.topology.module_count()), w.temp_air_k());
        try {
            if (!prev_tc.empty()) {
                if (prev_tc.size() != tc.size()) throw DimensionMismatch("previous temperatures do not match the module count");
                const auto means = module_means(f.e_eff);
                for (std::size_t m = 0; m < tc.size(); ++m) {
                    tc[m] = thermal_.step(prev_tc[m], ThermalEnv{means[m], w.temp_air_k(), w.wind_speed, std::nullopt}, dt_seconds);
                }
            }
        } catch (const Error& e) {
            throw StageError("thermal at " + format_timestamp(w.timestamp), e);
        }
        auto r = electrical_step(w.timestamp, std::move(f.e_eff), tc, level, arch, dt_seconds / 3600.0, keep_detail);
        r.zenith = sun.zenith;
        r.kt_dir = direct_clearness_index(w.dni, sun.zenith, day_of_year(w.timestamp));
        return r;
    }

    /// Electrical stage for a prepared period.
    RunResult run(const PreparedPeriod& p, Resolution level, Architecture arch, const RunOptions& opt = {}) const {
        RunResult out;
        out.architecture = arch;
        out.resolution = level;
        out.steps.resize(p.timestamps.size());
        parallel_for(p.timestamps.size(), opt.threads, [&](std::size_t k) {
            auto r = electrical_step(p.timestamps[k], p.e_eff[k], p.tc[k], level, arch, p.step_hours, opt.keep_cell_detail);
            r.zenith = p.zenith[k];
            r.kt_dir = p.kt_dir[k];
            out.steps[k] = std::move(r);
        });
        out.yield.step_hours = p.step_hours;
        for (const auto& s : out.steps) out.yield.append(s.timestamp, s.y_inst);
        return out;
    }

    /// Curves and operating points of one prepared timestep, with cell and
    /// substring detail.
    std::pair<SystemCurves, TimestepResult> inspect(const PreparedPeriod& p, std::size_t k, Resolution level, Architecture arch) const {
        auto e = p.e_eff.at(k);
        average_groups(e, static_cast<std::size_t>(s_.topology.group_size(level)));
        SystemCurves sc = build_curves(e, p.tc[k], arch, true);
        auto r = operating_points(sc, arch);
        r.timestamp = p.timestamps[k];
        r.daylight = !sc.modules.empty();
        r.zenith = p.zenith[k];
        r.kt_dir = p.kt_dir[k];
        r.tc = p.tc[k];
        r.e_eff = std::move(e);
        r.y_inst = energy_nwh(r.p, p.step_hours);
        return {std::move(sc), std::move(r)};
    }

    RunResult simulate_period(const WeatherSeries& weather, const RunOptions& opt = {}) const {
        return run(prepare(weather, opt.threads), s_.resolution, s_.architecture, opt);
    }

private:
    const OptimizerSpec* optimizer_for(std::size_t module, Architecture arch) const {
        if (arch == Architecture::Optimizers) return &s_.optimizer;
        if (arch == Architecture::Microinverters) return nullptr;
        const auto& a = s_.topology.attachment(static_cast<int>(module));
        return a.kind == MlpeKind::Optimizer ? &a.optimizer : nullptr;
    }

    TimestepResult electrical_step(Timestamp t, std::vector<double> e_eff, std::span<const double> tc, Resolution level,
                                   Architecture arch, double step_hours, bool keep_detail) const {
        try {
            average_groups(e_eff, static_cast<std::size_t>(s_.topology.group_size(level)));
            TimestepResult r;
            bool dark = std::all_of(e_eff.begin(), e_eff.end(), [](double e) { return !(e > 0); });
            if (dark) {
                r = operating_points(SystemCurves{}, arch);
            } else {
                r = operating_points(build_curves(e_eff, tc, arch), arch);
            }
            r.timestamp = t;
            r.daylight = !dark;
            r.tc.assign(tc.begin(), tc.end());
            if (keep_detail) r.e_eff = std::move(e_eff);
            r.y_inst = energy_nwh(r.p, step_hours);
            return r;
        } catch (const StageError&) {
            throw;
        } catch (const Error& e) {
            throw StageError("electrical at " + format_timestamp(t), e);
        }
    }

    Scenario s_;
    TwoDiodeParams params_;
    ShadingScene scene_;
    FuentesModel thermal_{ThermalParams{}};
    std::vector<double> diffuse_factor_;
    double k60_ = 1;
};

// ---- comparisons -----------------------------------------------------------

struct ResolutionReport {
    std::vector<RunResult> runs;  // runs[0] is the cell-level reference

    const RunResult& reference() const { return runs.front(); }

    /// Per-timestep OPP power ratio of run r to the reference: 1 when both
    /// are zero, NaN when only the reference is.
    double opp_ratio(std::size_t r, std::size_t t) const {
        const double ref = runs[0].steps[t].p, p = runs[r].steps[t].p;
        if (ref == 0) return p == 0 ? 1.0 : std::numeric_limits<double>::quiet_NaN();
        return p / ref;
    }

    /// Substring bypass flags active at the reference but not in run r.
    std::size_t missed_bypass(std::size_t r, std::size_t t) const {
        std::size_t n = 0;
        const auto& a = runs[0].steps[t].modules;
        const auto& b = runs[r].steps[t].modules;
        for (std::size_t m = 0; m < a.size(); ++m) {
            for (std::size_t k = 0; k < a[m].bypass.active.size(); ++k) n += a[m].bypass.active[k] && !b[m].bypass.active[k];
        }
        return n;
    }

    /// Flags that differ in either direction.
    std::size_t bypass_disagreements(std::size_t r, std::size_t t) const {
        std::size_t n = 0;
        const auto& a = runs[0].steps[t].modules;
        const auto& b = runs[r].steps[t].modules;
        for (std::size_t m = 0; m < a.size(); ++m) {
            for (std::size_t k = 0; k < a[m].bypass.active.size(); ++k) n += a[m].bypass.active[k] != b[m].bypass.active[k];
        }
        return n;
    }
};

/// Runs every level on identical irradiance and temperatures. The cell level
/// is always run and placed first.
inline ResolutionReport compare_resolutions(const Simulator& sim, const WeatherSeries& weather, std::vector<Resolution> levels,
                                            const RunOptions& opt = {}) {
    levels.erase(std::remove(levels.begin(), levels.end(), Resolution::Cell), levels.end());
    levels.insert(levels.begin(), Resolution::Cell);
    const auto prepared = sim.prepare(weather, opt.threads);
    ResolutionReport rep;
    for (auto level : levels) rep.runs.push_back(sim.run(prepared, level, sim.scenario().architecture, opt));
    return rep;
}

struct ArchitectureReport {
    std::vector<RunResult> runs;

    const RunResult* find(Architecture a) const {
        for (const auto& r : runs) {
            if (r.architecture == a) return &r;
        }
        return nullptr;
    }
};

/// Runs each architecture at cell resolution on identical inputs.
inline ArchitectureReport compare_architectures(const Simulator& sim, const WeatherSeries& weather,
                                                const std::vector<Architecture>& archs, const RunOptions& opt = {}) {
    const auto prepared = sim.prepare(weather, opt.threads);
    ArchitectureReport rep;
    for (auto a : archs) rep.runs.push_back(sim.run(prepared, Resolution::Cell, a, opt));
    return rep;
}

}  // namespace pvhires
