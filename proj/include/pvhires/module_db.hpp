#pragma once

// Module datasheet records and the module-type ideality-factor table.
//
// Datasheet file format: one section per module, "[<module id>]" followed by
// "key = value" lines. Blank lines and lines starting with '#' are ignored.
// Keys: length_m, width_m, isc_stc, voc_stc, imp_stc, vmp_stc, alpha_isc,
// beta_voc, band_gap_ev, module_type (MonoCrystalline | MultiCrystalline |
// ThinFilm), cells_in_series, substrings. The last two are optional for
// crystalline modules (default 60 cells in 3 substrings) and required for
// thin film.

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "pvhires/error.hpp"

namespace pvhires {

enum class ModuleType { MonoCrystalline, MultiCrystalline, ThinFilm };

inline std::string_view to_string(ModuleType t) {
    switch (t) {
        case ModuleType::MonoCrystalline: return "MonoCrystalline";
        case ModuleType::MultiCrystalline: return "MultiCrystalline";
        case ModuleType::ThinFilm: return "ThinFilm";
    }
    return "?";
}

inline std::optional<ModuleType> parse_module_type(std::string_view s) {
    if (s == "MonoCrystalline") return ModuleType::MonoCrystalline;
    if (s == "MultiCrystalline") return ModuleType::MultiCrystalline;
    if (s == "ThinFilm") return ModuleType::ThinFilm;
    return std::nullopt;
}

struct ModuleSpec {
    std::string id;
    double length_m = 0;
    double width_m = 0;
    double isc_stc = 0;    // A
    double voc_stc = 0;    // V
    double imp_stc = 0;    // A
    double vmp_stc = 0;    // V
    double alpha_isc = 0;  // A/K
    double beta_voc = 0;   // V/K
    double band_gap_ev = 0;
    ModuleType module_type = ModuleType::MonoCrystalline;
    int cells_in_series = 60;
    int substrings = 3;

    double pmp_stc() const { return vmp_stc * imp_stc; }

    /// Throws DataError naming the first violated invariant.
    void validate() const {
        auto fail = [&](const std::string& why) { throw DataError("module '" + id + "': " + why); };
        if (!(isc_stc > imp_stc && imp_stc > 0)) fail("requires isc_stc > imp_stc > 0");
        if (!(voc_stc > vmp_stc && vmp_stc > 0)) fail("requires voc_stc > vmp_stc > 0");
        if (!(alpha_isc > 0)) fail("requires alpha_isc > 0");
        if (!(beta_voc < 0)) fail("requires beta_voc < 0");
        if (!(band_gap_ev > 0)) fail("requires band_gap_ev > 0");
        if (cells_in_series < 1 || substrings < 1) fail("cell and substring counts must be positive");
        if (cells_in_series % substrings != 0) fail("cells_in_series must be divisible by substrings");
        if (!(length_m > 0 && width_m > 0)) fail("dimensions must be positive");
    }
};

// ---------------------------------------------------------------------------
// Ideality factors

struct IdealityRow {
    double irradiance;
    ModuleType type;
    double n1;
    double n2;
};

/// Literature ideality factors per module type at five irradiance levels.
inline constexpr std::array<IdealityRow, 15> ideality_table{{
    {200, ModuleType::MonoCrystalline, 1.38, 3.46},
    {400, ModuleType::MonoCrystalline, 1.38, 2.30},
    {600, ModuleType::MonoCrystalline, 1.38, 2.83},
    {800, ModuleType::MonoCrystalline, 1.38, 3.15},
    {1000, ModuleType::MonoCrystalline, 1.37, 2.11},
    {200, ModuleType::MultiCrystalline, 1.02, 2.49},
    {400, ModuleType::MultiCrystalline, 1.02, 2.69},
    {600, ModuleType::MultiCrystalline, 1.02, 2.75},
    {800, ModuleType::MultiCrystalline, 1.03, 2.62},
    {1000, ModuleType::MultiCrystalline, 1.03, 2.35},
    {200, ModuleType::ThinFilm, 1.48, 3.10},
    {400, ModuleType::ThinFilm, 1.44, 3.68},
    {600, ModuleType::ThinFilm, 1.48, 3.61},
    {800, ModuleType::ThinFilm, 1.46, 3.31},
    {1000, ModuleType::ThinFilm, 1.48, 3.72},
}};

inline constexpr std::array<double, 5> ideality_levels{200, 400, 600, 800, 1000};

struct IdealityFactors {
    double n1;
    double n2;
};

/// Nearest tabulated irradiance level, clamped to [200, 1000]; an exact
/// midpoint resolves to the lower level.
inline double nearest_ideality_level(double irradiance) {
    double best = ideality_levels.front();
    for (double level : ideality_levels) {
        if (std::abs(irradiance - level) < std::abs(irradiance - best)) best = level;
    }
    return best;
}

inline IdealityFactors lookup_ideality_factors(ModuleType type, double irradiance) {
    const double level = nearest_ideality_level(irradiance);
    for (const auto& row : ideality_table) {
        if (row.type == type && row.irradiance == level) return {row.n1, row.n2};
    }
    throw DataError("ideality table has no row for level " + std::to_string(level));
}

// ---------------------------------------------------------------------------
// Datasheet store

inline constexpr std::string_view bundled_datasheets_text = R"(# Reference module datasheet values (CEC database extract).
[GermanSolar USA GSM6-60-300W]
length_m = 1.65
width_m = 0.997
isc_stc = 9.78
voc_stc = 39.82
imp_stc = 9.33
vmp_stc = 32.25
alpha_isc = 0.00255258
beta_voc = -0.135786
band_gap_ev = 1.121
module_type = MonoCrystalline
cells_in_series = 60
substrings = 3

[Centrosolar America EP72 335SW]
length_m = 1.95
width_m = 0.986
isc_stc = 9.47
voc_stc = 46.83
imp_stc = 8.84
vmp_stc = 37.90
alpha_isc = 0.00521797
beta_voc = -0.146578
band_gap_ev = 1.121
module_type = MultiCrystalline
cells_in_series = 72
substrings = 3

[First Solar Inc. FS-490A]
length_m = 1.20
width_m = 0.600
isc_stc = 1.53
voc_stc = 85.50
imp_stc = 1.36
vmp_stc = 66.50
alpha_isc = 0.00091188
beta_voc = -0.22487
band_gap_ev = 1.121
module_type = ThinFilm
cells_in_series = 154
substrings = 1
)";

class ModuleDatabase {
public:
    ModuleDatabase() = default;

    static ModuleDatabase bundled() { return parse(bundled_datasheets_text, "<bundled>"); }

    static ModuleDatabase from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open datasheet file: " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str(), path);
    }

    static ModuleDatabase parse(std::string_view text, const std::string& source) {
        ModuleDatabase db;
        std::map<std::string, std::string> fields;
        std::string current;
        int line_no = 0;

        auto flush = [&]() {
            if (current.empty()) return;
            db.insert(build(current, fields, source));
            fields.clear();
        };

        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string t = trim(line);
            if (t.empty() || t.front() == '#') continue;
            if (t.front() == '[') {
                if (t.back() != ']') throw DataError(source + ":" + std::to_string(line_no) + ": unterminated section header");
                flush();
                current = trim(t.substr(1, t.size() - 2));
                if (current.empty()) throw DataError(source + ":" + std::to_string(line_no) + ": empty module id");
                if (db.records_.count(current)) throw DataError(source + ": duplicate module id '" + current + "'");
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos || current.empty()) {
                throw DataError(source + ":" + std::to_string(line_no) + ": expected 'key = value' inside a [module] section");
            }
            fields[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
        }
        flush();
        return db;
    }

    const ModuleSpec& lookup(const std::string& id) const {
        auto it = records_.find(id);
        if (it == records_.end()) throw UnknownModule(id);
        return it->second;
    }

    bool contains(const std::string& id) const { return records_.count(id) != 0; }
    std::size_t size() const { return records_.size(); }
    const std::map<std::string, ModuleSpec>& records() const { return records_; }

    void insert(ModuleSpec spec) {
        std::string id = spec.id;
        records_.insert_or_assign(std::move(id), std::move(spec));
    }

private:
    static std::string trim(std::string_view s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string_view::npos) return {};
        const auto e = s.find_last_not_of(" \t\r\n");
        return std::string(s.substr(b, e - b + 1));
    }

    static double number(const std::map<std::string, std::string>& f, const std::string& key, const std::string& ctx) {
        auto it = f.find(key);
        if (it == f.end()) throw DataError(ctx + ": missing field '" + key + "'");
        double value = 0;
        const auto& s = it->second;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || ptr != s.data() + s.size()) throw DataError(ctx + ": field '" + key + "' is not a number: " + s);
        return value;
    }

    static ModuleSpec build(const std::string& id, const std::map<std::string, std::string>& f, const std::string& source) {
        const std::string ctx = source + " [" + id + "]";
        ModuleSpec m;
        m.id = id;
        m.length_m = number(f, "length_m", ctx);
        m.width_m = number(f, "width_m", ctx);
        m.isc_stc = number(f, "isc_stc", ctx);
        m.voc_stc = number(f, "voc_stc", ctx);
        m.imp_stc = number(f, "imp_stc", ctx);
        m.vmp_stc = number(f, "vmp_stc", ctx);
        m.alpha_isc = number(f, "alpha_isc", ctx);
        m.beta_voc = number(f, "beta_voc", ctx);
        m.band_gap_ev = number(f, "band_gap_ev", ctx);

        auto type_it = f.find("module_type");
        if (type_it == f.end()) throw DataError(ctx + ": missing field 'module_type'");
        auto type = parse_module_type(type_it->second);
        if (!type) throw DataError(ctx + ": unknown module_type '" + type_it->second + "'");
        m.module_type = *type;

        const bool has_cells = f.count("cells_in_series") != 0;
        const bool has_subs = f.count("substrings") != 0;
        if (m.module_type == ModuleType::ThinFilm && !(has_cells && has_subs)) {
            throw DataError(ctx + ": thin-film records must give cells_in_series and substrings");
        }
        if (has_cells) m.cells_in_series = integer(number(f, "cells_in_series", ctx), "cells_in_series", ctx);
        if (has_subs) m.substrings = integer(number(f, "substrings", ctx), "substrings", ctx);
        m.validate();
        return m;
    }

    static int integer(double v, const std::string& key, const std::string& ctx) {
        if (v != std::floor(v) || v < 1) throw DataError(ctx + ": field '" + key + "' must be a positive integer");
        return static_cast<int>(v);
    }

    std::map<std::string, ModuleSpec> records_;
};

inline ModuleSpec lookup_module_spec(const ModuleDatabase& db, const std::string& id) { return db.lookup(id); }

}  // namespace pvhires
