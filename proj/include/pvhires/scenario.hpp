#pragma once

// Scenario description and its JSON form.
//
// {
//   "name": "dormer",
//   "site": {"latitude": 51.44, "longitude": 5.49},
//   "module": "GermanSolar USA GSM6-60-300W",
//   "datasheets": "extra_modules.txt",            // optional, relative to the file
//   "topology": {"modules_per_string": 12, "strings": 2, "bypass_vf": 0.7},
//   "layout": {"tilt": 45, "azimuth": 180, "rows": 2, "columns": 12,
//              "gap_m": 0.02, "origin": [0, 0, 0], "orientation": "portrait"},
//   "obstructions": [
//     {"type": "box", "corner": [x, y, z], "size": [dx, dy, dz]},
//     {"type": "cylinder", "base": [x, y, z], "height": h, "diameter": d},
//     {"type": "canopy", "centre": [x, y, z], "radius": r, "transmittance": t}],
//   "shading": {"samples_per_side": 4, "sky_patches": 145, "diffuse_shading": false},
//   "optics": {"a_r": 0.16},
//   "thermal": {"inoct_c": 48, "emissivity": 0.84, "absorptivity": 0.83,
//               "thermal_mass": 11000, "mount_height": 5},
//   "electrical": {"grid_points": 1001, "calibration_tolerance": 0.02,
//                  "recombination_share": 0.2},
//   "architecture": "string",      // central | string | optimizers | microinverters
//   "resolution": "cell",          // cell | substring | module | string
//   "optimizer": {"d_min": 0.1, "d_max": 0.95, "i_max": 15,
//                 "loss": {"switch_coeff": 0.0056, "conduction_r": 0.025,
//                          "capacitor_esr": 0.05, "control_power": 0.15}}
// }
//
// Every key except "module" has a default. Cell and substring counts come
// from the module datasheet unless given in "topology".

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pvhires/error.hpp"
#include "pvhires/geometry.hpp"
#include "pvhires/mlpe.hpp"
#include "pvhires/module_db.hpp"
#include "pvhires/thermal.hpp"
#include "pvhires/topology.hpp"

namespace pvhires {

enum class Architecture { CentralInverter, StringInverter, Optimizers, Microinverters };

inline const char* to_string(Architecture a) {
    switch (a) {
        case Architecture::CentralInverter: return "central";
        case Architecture::StringInverter: return "string";
        case Architecture::Optimizers: return "optimizers";
        case Architecture::Microinverters: return "microinverters";
    }
    return "?";
}

inline Architecture parse_architecture(std::string_view s) {
    if (s == "central" || s == "CentralInverter") return Architecture::CentralInverter;
    if (s == "string" || s == "StringInverter") return Architecture::StringInverter;
    if (s == "optimizers" || s == "Optimizers") return Architecture::Optimizers;
    if (s == "microinverters" || s == "Microinverters") return Architecture::Microinverters;
    throw ConfigError("unknown architecture '" + std::string(s) + "'");
}

struct Site {
    double latitude = 0;
    double longitude = 0;
};

struct Scenario {
    std::string name = "scenario";
    Site site;
    ModuleSpec module;
    SystemTopology topology;
    ArrayLayout layout;
    std::vector<Obstruction> obstructions;
    int samples_per_side = 4;
    int sky_patches = 145;
    bool diffuse_shading = false;
    double a_r = 0.16;
    ThermalParams thermal;
    CalibrationOptions calibration;
    std::size_t grid_points = 1001;
    Architecture architecture = Architecture::StringInverter;
    Resolution resolution = Resolution::Cell;
    OptimizerSpec optimizer;

    /// Throws on any inconsistency; called before a run starts.
    void validate() const {
        module.validate();
        topology.validate();
        thermal.validate();
        optimizer.validate();
        if (topology.cells_per_module() != module.cells_in_series) {
            throw TopologyMismatch("topology has " + std::to_string(topology.cells_per_module()) + " cells per module, module '" +
                                   module.id + "' has " + std::to_string(module.cells_in_series));
        }
        if (layout.rows * layout.columns != topology.module_count()) {
            throw TopologyMismatch("layout grid does not hold one slot per module");
        }
        if (!(site.latitude >= -90 && site.latitude <= 90)) throw ConfigError("latitude must lie in [-90, 90]");
        if (!(site.longitude >= -180 && site.longitude <= 360)) throw ConfigError("longitude out of range");
        if (samples_per_side < 1) throw ConfigError("samples_per_side must be >= 1");
        if (grid_points < 16) throw ConfigError("grid_points must be >= 16");
        if (!(a_r > 0)) throw ConfigError("a_r must be positive");
        for (const auto& o : obstructions) validate_obstruction(o);
    }

    /// Uniform string topology for a module with the given counts.
    static Scenario simple(const ModuleSpec& m, int modules_per_string, int strings = 1) {
        Scenario s;
        s.module = m;
        s.topology.substrings_per_module = m.substrings;
        s.topology.cells_per_substring = m.cells_in_series / m.substrings;
        s.topology.modules_per_string = modules_per_string;
        s.topology.strings = strings;
        s.layout.rows = strings;
        s.layout.columns = modules_per_string;
        return s;
    }
};

namespace detail {

using json = nlohmann::json;

inline Vec3 json_vec3(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(std::string(what) + " must be a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <class T>
void json_get(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

inline Obstruction json_obstruction(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "box") return AxisAlignedBox{json_vec3(j.at("corner"), "box corner"), json_vec3(j.at("size"), "box size")};
    if (type == "cylinder") {
        return VerticalCylinder{json_vec3(j.at("base"), "cylinder base"), j.at("height").get<double>(), j.at("diameter").get<double>()};
    }
    if (type == "canopy") {
        return CanopyDisk{json_vec3(j.at("centre"), "canopy centre"), j.at("radius").get<double>(),
                          j.at("transmittance").get<double>()};
    }
    throw ConfigError("unknown obstruction type '" + type + "'");
}

}  // namespace detail

/// Parses a scenario; relative datasheet paths resolve against base_dir.
inline Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {}) {
    using detail::json;
    Scenario s;
    try {
        const json j = json::parse(text);
        if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
        detail::json_get(j, "name", s.name);
        if (j.contains("site")) {
            detail::json_get(j["site"], "latitude", s.site.latitude);
            detail::json_get(j["site"], "longitude", s.site.longitude);
        }

        ModuleDatabase db = ModuleDatabase::bundled();
        if (j.contains("datasheets")) {
            std::filesystem::path p = j["datasheets"].get<std::string>();
            if (p.is_relative()) p = base_dir / p;
            db = ModuleDatabase::from_file(p.string());
        }
        if (!j.contains("module")) throw ConfigError("scenario needs a \"module\" id");
        s.module = db.lookup(j["module"].get<std::string>());

        s.topology.substrings_per_module = s.module.substrings;
        s.topology.cells_per_substring = s.module.cells_in_series / s.module.substrings;
        if (j.contains("topology")) {
            const auto& t = j["topology"];
            detail::json_get(t, "cells_per_substring", s.topology.cells_per_substring);
            detail::json_get(t, "substrings_per_module", s.topology.substrings_per_module);
            detail::json_get(t, "modules_per_string", s.topology.modules_per_string);
            detail::json_get(t, "strings", s.topology.strings);
            detail::json_get(t, "bypass_vf", s.topology.bypass_vf);
        }

        s.layout.rows = s.topology.strings;
        s.layout.columns = s.topology.modules_per_string;
        if (j.contains("layout")) {
            const auto& l = j["layout"];
            detail::json_get(l, "tilt", s.layout.tilt);
            detail::json_get(l, "azimuth", s.layout.azimuth);
            detail::json_get(l, "rows", s.layout.rows);
            detail::json_get(l, "columns", s.layout.columns);
            detail::json_get(l, "gap_m", s.layout.gap_m);
            if (l.contains("origin")) s.layout.origin = detail::json_vec3(l["origin"], "layout origin");
            if (l.contains("orientation")) {
                const auto o = l["orientation"].get<std::string>();
                if (o == "portrait") s.layout.orientation = Orientation::Portrait;
                else if (o == "landscape") s.layout.orientation = Orientation::Landscape;
                else throw ConfigError("orientation must be portrait or landscape");
            }
        }
        if (j.contains("obstructions")) {
            for (const auto& o : j["obstructions"]) s.obstructions.push_back(detail::json_obstruction(o));
        }
        if (j.contains("shading")) {
            detail::json_get(j["shading"], "samples_per_side", s.samples_per_side);
            detail::json_get(j["shading"], "sky_patches", s.sky_patches);
            detail::json_get(j["shading"], "diffuse_shading", s.diffuse_shading);
        }
        if (j.contains("optics")) detail::json_get(j["optics"], "a_r", s.a_r);
        if (j.contains("thermal")) {
            const auto& t = j["thermal"];
            detail::json_get(t, "inoct_c", s.thermal.inoct_c);
            detail::json_get(t, "emissivity", s.thermal.emissivity);
            detail::json_get(t, "absorptivity", s.thermal.absorptivity);
            detail::json_get(t, "thermal_mass", s.thermal.thermal_mass);
            detail::json_get(t, "mount_height", s.thermal.mount_height);
        }
        if (j.contains("electrical")) {
            const auto& e = j["electrical"];
            detail::json_get(e, "grid_points", s.grid_points);
            detail::json_get(e, "calibration_tolerance", s.calibration.tolerance);
            detail::json_get(e, "recombination_share", s.calibration.recombination_share);
        }
        if (j.contains("architecture")) s.architecture = parse_architecture(j["architecture"].get<std::string>());
        if (j.contains("resolution")) s.resolution = parse_resolution(j["resolution"].get<std::string>());
        if (j.contains("optimizer")) {
            const auto& o = j["optimizer"];
            detail::json_get(o, "d_min", s.optimizer.d_min);
            detail::json_get(o, "d_max", s.optimizer.d_max);
            detail::json_get(o, "i_max", s.optimizer.i_max);
            if (o.contains("loss")) {
                const auto& l = o["loss"];
                detail::json_get(l, "switch_coeff", s.optimizer.loss.switch_coeff);
                detail::json_get(l, "conduction_r", s.optimizer.loss.conduction_r);
                detail::json_get(l, "capacitor_esr", s.optimizer.loss.capacitor_esr);
                detail::json_get(l, "control_power", s.optimizer.loss.control_power);
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    s.validate();
    return s;
}

inline Scenario read_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), std::filesystem::path(path).parent_path());
}

}  // namespace pvhires
