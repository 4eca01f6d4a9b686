#pragma once

// System wiring. Cells are indexed string-major:
//   cell = ((string * M + module) * K + substring) * N + cell_in_substring
// with N cells per substring, K substrings per module and M modules per string.

#include <string>
#include <string_view>
#include <vector>

#include "pvhires/error.hpp"
#include "pvhires/mlpe.hpp"

namespace pvhires {

enum class MlpeKind { None, Optimizer, Microinverter };

inline const char* to_string(MlpeKind k) {
    switch (k) {
        case MlpeKind::None: return "none";
        case MlpeKind::Optimizer: return "optimizer";
        case MlpeKind::Microinverter: return "microinverter";
    }
    return "?";
}

struct MlpeAttachment {
    MlpeKind kind = MlpeKind::None;
    OptimizerSpec optimizer;
};

/// Spatial granularity at which irradiance reaches the electrical model.
enum class Resolution { Cell, Substring, Module, String };

inline const char* to_string(Resolution r) {
    switch (r) {
        case Resolution::Cell: return "cell";
        case Resolution::Substring: return "substring";
        case Resolution::Module: return "module";
        case Resolution::String: return "string";
    }
    return "?";
}

inline Resolution parse_resolution(std::string_view s) {
    if (s == "cell" || s == "Cell") return Resolution::Cell;
    if (s == "substring" || s == "Substring") return Resolution::Substring;
    if (s == "module" || s == "Module") return Resolution::Module;
    if (s == "string" || s == "String") return Resolution::String;
    throw ConfigError("unknown resolution '" + std::string(s) + "'");
}

struct SystemTopology {
    int cells_per_substring = 20;
    int substrings_per_module = 3;
    int modules_per_string = 1;
    int strings = 1;
    double bypass_vf = 0.7;  // V
    /// Per-module attachment indexed by module_index(); empty means none.
    std::vector<MlpeAttachment> mlpe;

    int cells_per_module() const { return cells_per_substring * substrings_per_module; }
    int module_count() const { return modules_per_string * strings; }
    int substring_count() const { return module_count() * substrings_per_module; }
    int cell_count() const { return module_count() * cells_per_module(); }

    int module_index(int string, int module) const { return string * modules_per_string + module; }
    int cell_index(int string, int module, int substring, int cell) const {
        return ((module_index(string, module) * substrings_per_module) + substring) * cells_per_substring + cell;
    }
    /// First cell of a substring, addressed by its global substring number.
    int substring_first_cell(int global_substring) const { return global_substring * cells_per_substring; }

    const MlpeAttachment& attachment(int module_index) const {
        static const MlpeAttachment none{};
        if (mlpe.empty()) return none;
        return mlpe.at(static_cast<std::size_t>(module_index));
    }

    void validate() const {
        if (cells_per_substring < 1 || substrings_per_module < 1 || modules_per_string < 1 || strings < 1) {
            throw ConfigError("topology counts must all be >= 1");
        }
        if (!(bypass_vf > 0)) throw ConfigError("bypass_vf must be positive");
        if (!mlpe.empty() && static_cast<int>(mlpe.size()) != module_count()) {
            throw TopologyMismatch("mlpe attachment list must have one entry per module");
        }
        for (const auto& a : mlpe) {
            if (a.kind == MlpeKind::Optimizer) a.optimizer.validate();
        }
    }

    /// Number of cells sharing one irradiance value at a resolution.
    int group_size(Resolution r) const {
        switch (r) {
            case Resolution::Cell: return 1;
            case Resolution::Substring: return cells_per_substring;
            case Resolution::Module: return cells_per_module();
            case Resolution::String: return cells_per_module() * modules_per_string;
        }
        return 1;
    }
};

}  // namespace pvhires
