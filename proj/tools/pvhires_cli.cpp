// pvhires: command-line front end.
//
//   pvhires iv-curve  --scenario S --weather W --timestamp T --out DIR
//   pvhires simulate  --scenario S --weather W --out DIR
//   pvhires compare-resolutions   --scenario S --weather W --out DIR [--levels cell,module]
//   pvhires compare-architectures --scenario S --weather W --out DIR [--architectures string,optimizers]
//   pvhires metrics PREDICTED.csv MEASURED.csv
//
// --clear-day YYYY-MM-DD replaces --weather with a synthetic clear day at the
// scenario site. Inputs are parsed and validated before anything is written;
// every output file is written whole and renamed into place.
//
// Exit codes: 0 ok, 2 configuration error, 3 data error, 4 numerical failure.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pvhires/pvhires.hpp"

namespace fs = std::filesystem;
using namespace pvhires;

namespace {

struct Options {
    std::string scenario;
    std::string weather;
    std::string clear_day;
    std::string out = "out";
    std::string timestamp;
    std::string datasheets;
    std::vector<std::string> levels{"cell", "substring", "module", "string"};
    std::vector<std::string> architectures{"central", "string", "optimizers", "microinverters"};
    unsigned threads = 0;
    std::string predicted, measured;
};

using Files = std::vector<std::pair<fs::path, std::string>>;

void write_all(const Files& files) {
    for (const auto& [path, content] : files) atomic_write(path, content);
}

Scenario load_scenario(const Options& o) {
    if (o.scenario.empty()) throw ConfigError("--scenario is required");
    Scenario s = read_scenario(o.scenario);
    if (!o.datasheets.empty()) {
        const auto db = ModuleDatabase::from_file(o.datasheets);
        const int cps = s.topology.cells_per_substring, spm = s.topology.substrings_per_module;
        s.module = db.lookup(s.module.id);
        s.topology.cells_per_substring = cps;
        s.topology.substrings_per_module = spm;
        s.validate();
    }
    return s;
}

WeatherSeries load_weather(const Options& o, const Scenario& s) {
    if (!o.clear_day.empty()) {
        if (!o.weather.empty()) throw ConfigError("use either --weather or --clear-day");
        const auto t = parse_timestamp(o.clear_day + "T00:00:00Z");
        return clear_sky_day(std::chrono::floor<std::chrono::days>(t), s.site.latitude, s.site.longitude);
    }
    if (o.weather.empty()) throw ConfigError("--weather or --clear-day is required");
    return read_weather_csv(o.weather);
}

RunOptions run_options(const Options& o) {
    RunOptions r;
    r.threads = o.threads;
    return r;
}

int cmd_iv_curve(const Options& o) {
    const auto scenario = load_scenario(o);
    const auto weather = load_weather(o, scenario);
    if (o.timestamp.empty()) throw ConfigError("--timestamp is required");
    const auto t = parse_timestamp(o.timestamp);
    std::size_t idx = weather.size();
    for (std::size_t k = 0; k < weather.size(); ++k) {
        if (weather.records[k].timestamp == t) idx = k;
    }
    if (idx == weather.size()) throw DataError("timestamp " + format_timestamp(t) + " is not in the weather series");

    Simulator sim(scenario);
    WeatherSeries head = weather;
    head.records.resize(idx + 1);
    const auto prepared = sim.prepare(head, o.threads);
    const auto [curves, result] = sim.inspect(prepared, idx, scenario.resolution, scenario.architecture);

    const fs::path dir = fs::path(o.out) / "curves";
    Files files;
    if (!curves.modules.empty()) {
        for (std::size_t u = 0; u < curves.unique_cells.size(); ++u) {
            files.emplace_back(dir / ("cell_curve_" + std::to_string(u) + ".csv"), curve_csv(curves.unique_cells[u], "cell", t));
        }
        std::ostringstream map;
        map << "cell,curve,e_eff,tc_k\n";
        const auto per_module = static_cast<std::size_t>(scenario.topology.cells_per_module());
        for (std::size_t c = 0; c < curves.cell_curve_index.size(); ++c) {
            map << c << ',' << curves.cell_curve_index[c] << ',' << result.e_eff[c] << ',' << result.tc[c / per_module] << '\n';
        }
        files.emplace_back(dir / "cell_map.csv", map.str());
        for (std::size_t s = 0; s < curves.substring_v.size(); ++s) {
            const auto& v = curves.substring_v[s];
            if (!std::isfinite(v.front())) continue;
            files.emplace_back(dir / ("substring_" + std::to_string(s) + ".csv"),
                               curve_csv(curve_from_grid(curves.i_grid, v, CurveLevel::Substring), "substring", t));
        }
        for (std::size_t m = 0; m < curves.modules.size(); ++m) {
            files.emplace_back(dir / ("module_" + std::to_string(m) + ".csv"), curve_csv(curves.modules[m].curve, "module", t));
            if (curves.optimized[m]) {
                files.emplace_back(dir / ("optimized_" + std::to_string(m) + ".csv"), curve_csv(*curves.optimized[m], "optimized", t));
            }
        }
        for (std::size_t s = 0; s < curves.strings.size(); ++s) {
            files.emplace_back(dir / ("string_" + std::to_string(s) + ".csv"), curve_csv(curves.strings[s], "string", t));
        }
        if (!curves.strings.empty()) {
            files.emplace_back(dir / "system.csv", curve_csv(system_curve(curves.strings, scenario.grid_points), "system", t));
        }
    }
    const auto summary = timestep_summary(result, curves, scenario.architecture, scenario.resolution);
    files.emplace_back(fs::path(o.out) / "summary.json", summary.dump(2) + "\n");
    write_all(files);
    std::cout << "system p=" << result.p << " W, bypass activations=" << summary["bypass_activations"].get<int>() << "\n";
    return 0;
}

int cmd_simulate(const Options& o) {
    const auto scenario = load_scenario(o);
    const auto weather = load_weather(o, scenario);
    Simulator sim(scenario);
    const auto run = sim.simulate_period(weather, run_options(o));
    const fs::path dir(o.out);
    write_all({{dir / "timestep_results.csv", timestep_results_csv(run)},
               {dir / "yield_series.csv", yield_series_csv(run)},
               {dir / "yield_monthly.csv", yield_monthly_csv(run.yield)}});
    std::cout << "y_cum=" << run.yield.y_cum_wh() << " Wh over " << run.steps.size() << " steps\n";
    return 0;
}

int cmd_compare_resolutions(const Options& o) {
    const auto scenario = load_scenario(o);
    const auto weather = load_weather(o, scenario);
    std::vector<Resolution> levels;
    for (const auto& l : o.levels) levels.push_back(parse_resolution(l));
    Simulator sim(scenario);
    const auto rep = compare_resolutions(sim, weather, levels, run_options(o));
    const fs::path dir(o.out);
    write_all({{dir / "resolution_report.csv", resolution_report_csv(rep)},
               {dir / "resolution_monthly.csv", resolution_monthly_csv(rep)}});
    for (const auto& r : rep.runs) std::cout << to_string(r.resolution) << ": " << r.yield.y_cum_wh() << " Wh\n";
    return 0;
}

int cmd_compare_architectures(const Options& o) {
    const auto scenario = load_scenario(o);
    const auto weather = load_weather(o, scenario);
    std::vector<Architecture> archs;
    for (const auto& a : o.architectures) archs.push_back(parse_architecture(a));
    Simulator sim(scenario);
    const auto rep = compare_architectures(sim, weather, archs, run_options(o));
    write_all({{fs::path(o.out) / "architecture_report.csv", architecture_report_csv(rep)}});
    for (const auto& r : rep.runs) std::cout << to_string(r.architecture) << ": " << r.yield.y_cum_wh() << " Wh\n";
    return 0;
}

/// Last column of every data row; a non-numeric first row is a header.
std::vector<double> read_series(const std::string& path) {
    const std::string text = detail::read_text_file(path, "series file");
    std::istringstream in(text);
    std::string line;
    std::vector<double> out;
    bool first = true;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto fields = detail::split_csv(line);
        const auto last = fields.back();
        double v = 0;
        auto [ptr, ec] = std::from_chars(last.data(), last.data() + last.size(), v);
        if (ec != std::errc{} || ptr != last.data() + last.size()) {
            if (first) {
                first = false;
                continue;
            }
            throw DataError(path + ":" + std::to_string(line_no) + ": not a number");
        }
        first = false;
        out.push_back(v);
    }
    return out;
}

int cmd_metrics(const Options& o) {
    const auto pred = read_series(o.predicted);
    const auto meas = read_series(o.measured);
    const auto m = error_metrics(pred, meas);
    std::cout.precision(10);
    std::cout << "r2=" << m.r2 << " mbe=" << m.mbe << " rmse=" << m.rmse << "\n";
    return 0;
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Config: return 2;
        case ErrorKind::Data: return 3;
        case ErrorKind::Numerical: return 4;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"High-resolution PV system simulator"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--scenario", o.scenario, "Scenario JSON file");
        c->add_option("--weather", o.weather, "Weather CSV (timestamp,dni,dhi,temp_air,wind_speed)");
        c->add_option("--clear-day", o.clear_day, "Synthetic clear day YYYY-MM-DD instead of --weather");
        c->add_option("--out", o.out, "Output directory");
        c->add_option("--threads", o.threads, "Worker threads (0: all cores)");
        c->add_option("--datasheets", o.datasheets, "Module datasheet file overriding the bundled table");
    };

    auto* iv = app.add_subcommand("iv-curve", "Curves and operating points at one timestamp");
    add_common(iv);
    iv->add_option("--timestamp", o.timestamp, "Timestamp present in the weather series")->required();
    auto* sim = app.add_subcommand("simulate", "Energy yield over the weather period");
    add_common(sim);
    auto* cr = app.add_subcommand("compare-resolutions", "Yield and bypass states per irradiance resolution");
    add_common(cr);
    cr->add_option("--levels", o.levels, "Resolutions: cell, substring, module, string")->delimiter(',');
    auto* ca = app.add_subcommand("compare-architectures", "Yield per inverter architecture");
    add_common(ca);
    ca->add_option("--architectures", o.architectures, "central, string, optimizers, microinverters")->delimiter(',');
    auto* me = app.add_subcommand("metrics", "r2, MBE and RMSE of predicted against measured");
    me->add_option("predicted", o.predicted, "Predicted series CSV")->required();
    me->add_option("measured", o.measured, "Measured series CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*iv) return cmd_iv_curve(o);
        if (*sim) return cmd_simulate(o);
        if (*cr) return cmd_compare_resolutions(o);
        if (*ca) return cmd_compare_architectures(o);
        if (*me) return cmd_metrics(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
