#include <catch_amalgamated.hpp>

#include <cstring>
#include <fstream>

#include "pvhires/module_db.hpp"

using namespace pvhires;

TEST_CASE("bundled datasheets reproduce the reference records", "[module_db]") {
    const auto db = ModuleDatabase::bundled();
    REQUIRE(db.size() == 3);

    const auto& gsm = lookup_module_spec(db, "GermanSolar USA GSM6-60-300W");
    CHECK(gsm.isc_stc == 9.78);
    CHECK(gsm.voc_stc == 39.82);
    CHECK(gsm.imp_stc == 9.33);
    CHECK(gsm.vmp_stc == 32.25);
    CHECK(gsm.alpha_isc == 0.00255258);
    CHECK(gsm.beta_voc == -0.135786);
    CHECK(gsm.band_gap_ev == 1.121);
    CHECK(gsm.length_m == 1.65);
    CHECK(gsm.width_m == 0.997);
    CHECK(gsm.module_type == ModuleType::MonoCrystalline);

    const auto& ep = db.lookup("Centrosolar America EP72 335SW");
    CHECK(ep.isc_stc == 9.47);
    CHECK(ep.voc_stc == 46.83);
    CHECK(ep.imp_stc == 8.84);
    CHECK(ep.vmp_stc == 37.90);
    CHECK(ep.alpha_isc == 0.00521797);
    CHECK(ep.beta_voc == -0.146578);
    CHECK(ep.module_type == ModuleType::MultiCrystalline);

    const auto& fs = db.lookup("First Solar Inc. FS-490A");
    CHECK(fs.isc_stc == 1.53);
    CHECK(fs.voc_stc == 85.50);
    CHECK(fs.imp_stc == 1.36);
    CHECK(fs.vmp_stc == 66.50);
    CHECK(fs.alpha_isc == 0.00091188);
    CHECK(fs.beta_voc == -0.22487);
    CHECK(fs.module_type == ModuleType::ThinFilm);
}

TEST_CASE("unknown module id is reported", "[module_db]") {
    const auto db = ModuleDatabase::bundled();
    CHECK_THROWS_AS(db.lookup("nonexistent-module"), UnknownModule);
    try {
        db.lookup("nonexistent-module");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Data);
    }
}

TEST_CASE("lookups are repeatable", "[module_db]") {
    const auto a = ModuleDatabase::bundled().lookup("GermanSolar USA GSM6-60-300W");
    const auto b = ModuleDatabase::bundled().lookup("GermanSolar USA GSM6-60-300W");
    CHECK(std::memcmp(&a.isc_stc, &b.isc_stc, sizeof(double)) == 0);
    CHECK(a.vmp_stc == b.vmp_stc);
}

TEST_CASE("shipped datasheet file matches the bundled copy", "[module_db]") {
    const auto file = ModuleDatabase::from_file(std::string(PVHIRES_DATA_DIR) + "/cec_modules.txt");
    const auto bundled = ModuleDatabase::bundled();
    REQUIRE(file.size() == bundled.size());
    for (const auto& [id, spec] : bundled.records()) {
        const auto& other = file.lookup(id);
        CHECK(other.isc_stc == spec.isc_stc);
        CHECK(other.voc_stc == spec.voc_stc);
        CHECK(other.cells_in_series == spec.cells_in_series);
    }
}

TEST_CASE("datasheet parser rejects malformed input", "[module_db]") {
    CHECK_THROWS_AS(ModuleDatabase::parse("[x]\nisc_stc = abc\n", "t"), DataError);
    CHECK_THROWS_AS(ModuleDatabase::parse("isc_stc = 1\n", "t"), DataError);
    const std::string rec =
        "length_m = 1\nwidth_m = 1\nisc_stc = 5\nvoc_stc = 40\nimp_stc = 4.5\nvmp_stc = 32\n"
        "alpha_isc = 0.002\nbeta_voc = -0.1\nband_gap_ev = 1.1\n";
    CHECK_NOTHROW(ModuleDatabase::parse("[a]\n" + rec + "module_type = MonoCrystalline\n", "t"));
    CHECK_THROWS_AS(ModuleDatabase::parse("[a]\n" + rec + "module_type = ThinFilm\n", "t"), DataError);
    CHECK_THROWS_AS(ModuleDatabase::parse("[a]\n" + rec + "module_type = Perovskite\n", "t"), DataError);
    CHECK_THROWS_AS(ModuleDatabase::parse("[a]\n" + rec + "module_type = MonoCrystalline\n[a]\n", "t"), DataError);
    CHECK_THROWS_AS(ModuleDatabase::parse("[a]\n" + rec + "module_type = MonoCrystalline\ncells_in_series = 61\n", "t"),
                    DataError);
    CHECK_THROWS_AS(ModuleDatabase::from_file("/nonexistent/modules.txt"), ConfigError);
}

TEST_CASE("ideality factors by module type and irradiance", "[module_db]") {
    auto f = lookup_ideality_factors(ModuleType::MonoCrystalline, 1000);
    CHECK(f.n1 == 1.37);
    CHECK(f.n2 == 2.11);
    f = lookup_ideality_factors(ModuleType::ThinFilm, 400);
    CHECK(f.n1 == 1.44);
    CHECK(f.n2 == 3.68);
    f = lookup_ideality_factors(ModuleType::MultiCrystalline, 50);
    CHECK(f.n1 == 1.02);
    CHECK(f.n2 == 2.49);
    f = lookup_ideality_factors(ModuleType::MultiCrystalline, 5000);
    CHECK(f.n1 == 1.03);
    CHECK(f.n2 == 2.35);
}

TEST_CASE("ideality rows are reproduced at every listed level", "[module_db]") {
    for (const auto& row : ideality_table) {
        const auto f = lookup_ideality_factors(row.type, row.irradiance);
        CHECK(f.n1 == row.n1);
        CHECK(f.n2 == row.n2);
        CHECK(row.n1 >= 1.0);
        CHECK(row.n2 >= row.n1);
    }
}

TEST_CASE("ideality level selection", "[module_db]") {
    CHECK(nearest_ideality_level(300) == 200);
    CHECK(nearest_ideality_level(300.001) == 400);
    CHECK(nearest_ideality_level(900) == 800);
    CHECK(nearest_ideality_level(0) == 200);

    double prev = 0;
    for (double e = 200; e <= 1000; e += 0.37) {
        const double level = nearest_ideality_level(e);
        CHECK(level >= prev);
        prev = level;
    }
}
