#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "pvhires/cell_electrical.hpp"
#include "pvhires/mpp.hpp"

using namespace pvhires;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const ModuleDatabase& db() {
    static const ModuleDatabase d = ModuleDatabase::bundled();
    return d;
}

const ModuleSpec& gsm() { return db().lookup("GermanSolar USA GSM6-60-300W"); }

// Residual of the implicit cell equation at a terminal point.
double residual(const OperatingDiodeParams& op, double v, double i) {
    const double u = v + i * op.rs;
    return op.iph - op.isat1 * std::expm1(u / (op.n1 * op.vt)) - op.isat2 * std::expm1(u / (op.n2 * op.vt)) - u / op.rsh - i;
}

}  // namespace

TEST_CASE("thermal voltage", "[cell]") {
    CHECK_THAT(thermal_voltage(298.15), WithinAbs(0.025693, 1e-6));
    CHECK_THAT(thermal_voltage(298.15), WithinRel(0.025692570188737374, 1e-14));
    CHECK_THAT(thermal_voltage(2 * 310.0), WithinRel(2 * thermal_voltage(310.0), 1e-15));
    CHECK_THROWS_AS(thermal_voltage(0.0), DataError);
}

TEST_CASE("initial shunt resistance", "[cell]") {
    CHECK_THAT(initial_shunt_resistance(gsm()), WithinAbs(70.855, 0.01));
    ModuleSpec bad = gsm();
    bad.imp_stc = bad.isc_stc;
    CHECK_THROWS_AS(initial_shunt_resistance(bad), CalibrationDiverged);
    CHECK_THROWS_AS(calibrate_two_diode(bad), CalibrationDiverged);
}

TEST_CASE("calibration matches an independent reference fit", "[cell]") {
    struct Ref {
        const char* id;
        double rs, rsh, err;
    };
    const Ref refs[] = {
        {"GermanSolar USA GSM6-60-300W", 0.00040715746421267894, 778.5117892425136, 0.009067560442868165},
        {"Centrosolar America EP72 335SW", 0.0004945089757127771, 119.56995373114701, 0.018504192765829725},
        {"First Solar Inc. FS-490A", 0.005588235294117647, 1719.107813861175, 0.005223606121828776},
    };
    for (const auto& r : refs) {
        INFO(r.id);
        const auto p = calibrate_two_diode(db().lookup(r.id));
        CHECK_THAT(p.rs, WithinRel(r.rs, 1e-9));
        CHECK_THAT(p.rsh, WithinRel(r.rsh, 1e-6));
        CHECK_THAT(p.calibration_mpp_error, WithinAbs(r.err, 1e-6));
        CHECK(p.rs >= 0);
        CHECK(p.rsh > 0);
        CHECK(std::abs(p.calibration_mpp_error) < 0.02);
    }
}

TEST_CASE("calibration is deterministic", "[cell]") {
    const auto a = calibrate_two_diode(gsm());
    const auto b = calibrate_two_diode(gsm());
    CHECK(std::memcmp(&a.rs, &b.rs, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.rsh, &b.rsh, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.isat1_stc, &b.isat1_stc, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.isat2_stc, &b.isat2_stc, sizeof(double)) == 0);
}

TEST_CASE("calibration reports impossible shunt resistance", "[cell]") {
    CalibrationOptions opt;
    opt.recombination_share = 0.5;
    try {
        calibrate_two_diode(gsm(), opt);
        FAIL("expected NegativeRsh");
    } catch (const NegativeRsh& e) {
        CHECK(e.rs > 0);
        CHECK(e.kind() == ErrorKind::Numerical);
    }
}

TEST_CASE("operating parameters", "[cell]") {
    const auto p = calibrate_two_diode(gsm());
    auto op = operating_params(p, gsm(), 1000, 298.15);
    CHECK(op.iph == gsm().isc_stc);
    CHECK(op.n1 == 1.37);
    CHECK(op.isat1 > 0);
    CHECK(op.isat2 > 0);
    CHECK_THAT(op.rs * 60, WithinRel(p.rs, 1e-15));

    op = operating_params(p, gsm(), 500, 298.15);
    CHECK_THAT(op.iph, WithinAbs(4.89, 1e-12));
    op = operating_params(p, gsm(), 0, 298.15);
    CHECK(op.iph == 0);
    op = operating_params(p, gsm(), 150, 298.15);
    CHECK(op.n2 == 3.46);
    CHECK_THROWS_AS(operating_params(p, gsm(), -1, 298.15), DataError);

    // Hotter cell: more current, less voltage.
    const auto hot = operating_params(p, gsm(), 1000, 328.15);
    const auto ref = operating_params(p, gsm(), 1000, 298.15);
    CHECK(hot.iph > ref.iph);
    CHECK(open_circuit_voltage(hot) < open_circuit_voltage(ref));
    CHECK_THAT(60 * open_circuit_voltage(hot), WithinAbs(gsm().voc_stc + 30 * gsm().beta_voc, 0.01 * gsm().voc_stc));
}

TEST_CASE("cell current root", "[cell]") {
    const auto p = calibrate_two_diode(gsm());
    const auto op = operating_params(p, gsm(), 1000, 298.15);
    for (double v = -2.0; v <= 0.75; v += 0.01) {
        const double i = solve_cell_current(op, v);
        CHECK(std::abs(residual(op, v, i)) < 1e-9);
    }
    const double isc = solve_cell_current(op, 0.0);
    CHECK_THAT(isc, WithinRel(op.iph * op.rsh / (op.rsh + op.rs), 0.005));

    const auto dark = operating_params(p, gsm(), 0, 298.15);
    CHECK_THAT(solve_cell_current(dark, 0.0), WithinAbs(0, 1e-12));
    CHECK(solve_cell_current(dark, 0.3) < 0);
}

TEST_CASE("standard test conditions round trip", "[cell]") {
    for (const auto& [id, spec] : db().records()) {
        INFO(id);
        const auto p = calibrate_two_diode(spec);
        const auto op = operating_params(p, spec, 1000, 298.15);
        const double n = spec.cells_in_series;
        CHECK_THAT(solve_cell_current(op, 0.0), WithinRel(spec.isc_stc, 0.005));
        CHECK_THAT(n * open_circuit_voltage(op), WithinRel(spec.voc_stc, 0.005));
        const auto m = cell_mpp(op);
        CHECK_THAT(n * m.v * m.i, WithinRel(spec.pmp_stc(), 0.02));
        // The sampled curve agrees with the continuous optimum.
        const auto curve = cell_iv_curve(op, 64);
        CHECK_THAT(find_mpp(curve).p, WithinRel(m.v * m.i, 1e-5));
    }
}

TEST_CASE("sampled curve points solve the circuit equation", "[cell]") {
    const auto p = calibrate_two_diode(gsm());
    for (double e : {0.0, 50.0, 370.0, 1000.0}) {
        for (double tc : {270.0, 298.15, 340.0}) {
            const auto op = operating_params(p, gsm(), e, tc);
            const auto c = cell_iv_curve(op, 32);
            CHECK(c.v_min() <= -2.0 + 1e-9);
            for (const auto& pt : c.points()) CHECK(std::abs(residual(op, pt.v, pt.i)) < 1e-9);
            // Interpolation stays close to the exact root along one axis or
            // the other (steep parts are resolved in voltage, flat parts in
            // current).
            for (double v = -1.9; v < c.v_max(); v += 0.0137) {
                const double exact = solve_cell_current(op, v);
                const bool close = std::abs(c.current_at(v) - exact) < 1e-5 || std::abs(c.voltage_at(exact) - v) < 1e-5;
                CHECK(close);
            }
        }
    }
}

TEST_CASE("dark cell passes through the origin", "[cell]") {
    const auto p = calibrate_two_diode(gsm());
    const auto c = cell_iv_curve(operating_params(p, gsm(), 0, 298.15), 16);
    CHECK_THAT(c.current_at(0.0), WithinAbs(0, 1e-12));
    CHECK(c.current_at(0.05) < 0);
    CHECK(c.v_max() > 0);
    CHECK_THROWS_AS(cell_iv_curve(operating_params(p, gsm(), 0, 298.15), 8), DataError);
}

TEST_CASE("irradiance scaling of the curve", "[cell]") {
    const auto p = calibrate_two_diode(gsm());
    const auto c1 = cell_iv_curve(operating_params(p, gsm(), 400, 298.15), 32);
    const auto c2 = cell_iv_curve(operating_params(p, gsm(), 800, 298.15), 32);
    CHECK_THAT(c2.current_at(0), WithinRel(2 * c1.current_at(0), 0.01));

    const auto shaded = cell_iv_curve(operating_params(p, gsm(), 50, 298.15), 32);
    const auto lit = cell_iv_curve(operating_params(p, gsm(), 370, 298.15), 32);
    const double hi = std::min(shaded.v_max(), lit.v_max());
    for (double v = -2.0; v <= hi; v += 0.005) CHECK(shaded.current_at(v) < lit.current_at(v));
}

TEST_CASE("curve shape properties", "[cell]") {
    const auto p = calibrate_two_diode(gsm());
    for (double e : {100.0, 450.0, 1000.0}) {
        const auto c = cell_iv_curve(operating_params(p, gsm(), e, 300.0), 32);
        const auto pts = c.points();
        for (std::size_t k = 1; k < pts.size(); ++k) CHECK(pts[k].i < pts[k - 1].i);
        // One interior power maximum on [0, voc]: the power rises then falls.
        int sign_changes = 0;
        int last = 0;
        for (std::size_t k = 1; k < pts.size(); ++k) {
            if (pts[k - 1].v < 0) continue;
            const double dp = pts[k].v * pts[k].i - pts[k - 1].v * pts[k - 1].i;
            const int s = dp > 0 ? 1 : (dp < 0 ? -1 : 0);
            if (s != 0 && last != 0 && s != last) ++sign_changes;
            if (s != 0) last = s;
        }
        CHECK(sign_changes == 1);
    }
}
